import random
from fractions import Fraction

import pytest

from newtonplumb.cones import (
    Cone,
    cone_dim,
    make_cone,
    minimal_containing_cone,
    minimal_containing_face,
    trivial_fan,
)
from newtonplumb.newton import (
    SupportedFunction,
    _hull2d,
    boundary_points,
    check_hypotheses,
    check_nnd,
    compact_faces,
    face_for_cone,
    height,
    interior_points,
    lattice_measures,
    make_polyhedron,
    minkowski_sum,
    mixed_volume_2d,
    normal_fan,
    polygon_volume,
)

OCTANT = make_cone([(1, 0, 0), (0, 1, 0), (0, 0, 1)], side="N")
PAPER_SIGMA = make_cone([(0, 1, 2), (0, 1, 0), (1, 1, -1), (1, 0, 0)], side="N")
BRIESKORN_235 = [(2, 0, 0), (0, 3, 0), (0, 0, 5)]
PAPER_SUPPORT = [(1, 1, 2), (2, 0, 1), (0, 2, 0), (0, 4, -2)]  # uv + uw + y^2 + x^2


def test_heights_brieskorn():
    lnp = make_polyhedron(OCTANT, BRIESKORN_235)
    assert height(lnp, (1, 1, 1)) == 2
    assert height(lnp, (15, 10, 6)) == 30
    assert height(lnp, (1, 0, 0)) == 0  # suitability: boundary heights vanish
    with pytest.raises(ValueError):
        height(lnp, (-1, 0, 0))


def test_normal_fan_brieskorn():
    lnp = make_polyhedron(OCTANT, BRIESKORN_235)
    fan = normal_fan(lnp)
    rays = fan.rays()
    assert (15, 10, 6) in rays
    interior = [r for r in rays
                if minimal_containing_face(OCTANT, r) == OCTANT]
    assert interior == [(15, 10, 6)]
    assert len(fan.maximal) == 3
    # three walls join the interior ray to the octant rays
    spokes = [w for w in fan.cones_of_dim(2) if (15, 10, 6) in w.rays]
    assert len(spokes) == 3


def test_normal_fan_single_vertex_is_trivial():
    lnp = make_polyhedron(OCTANT, [(2, 3, 4)])
    fan = normal_fan(lnp)
    assert set(fan.cones) == set(trivial_fan(OCTANT).cones)


def test_normal_fan_oracle_grid_clustering():
    """Brute-force oracle: directions of the ambient cone cluster by argmin
    set exactly along the computed fan cells."""
    lnp = make_polyhedron(OCTANT, BRIESKORN_235)
    fan = normal_fan(lnp)

    def argmin_set(v):
        h = min(sum(m[k] * v[k] for k in range(3)) for m in lnp.support)
        return frozenset(m for m in lnp.support
                         if sum(m[k] * v[k] for k in range(3)) == h)

    for v_x in range(0, 16, 3):
        for v_y in range(0, 16, 3):
            for v_z in range(0, 16, 3):
                v = (v_x, v_y, v_z)
                if v == (0, 0, 0):
                    continue
                cell = minimal_containing_cone(make_cone([v]), fan)
                from newtonplumb.cones import relint_point
                assert argmin_set(relint_point(cell)) <= argmin_set(v)


def test_normal_fan_paper_example_has_ray_in_singular_face():
    lnp = make_polyhedron(PAPER_SIGMA, PAPER_SUPPORT)
    fan = normal_fan(lnp)
    sing_face = make_cone([(0, 1, 2), (0, 1, 0)], side="N")
    inside = [r for r in fan.rays()
              if minimal_containing_face(PAPER_SIGMA, r) == sing_face]
    assert inside == [(0, 3, 4)]


def test_face_for_cone_brieskorn():
    lnp = make_polyhedron(OCTANT, BRIESKORN_235)
    tri = face_for_cone(lnp, make_cone([(15, 10, 6)], side="N"))
    assert tri.points == ((0, 0, 5), (0, 3, 0), (2, 0, 0))
    assert tri.dim == 2 and tri.compact
    edge = face_for_cone(lnp, make_cone([(15, 10, 6), (1, 0, 0)], side="N"))
    assert edge.points == ((0, 0, 5), (0, 3, 0))
    assert edge.dim == 1 and edge.compact


def test_face_for_cone_single_vertex():
    lnp = make_polyhedron(OCTANT, [(1, 2, 3)])
    f = face_for_cone(lnp, OCTANT)
    assert f.points == ((1, 2, 3),) and f.dim == 0


def test_face_for_cone_rejects_straddling():
    lnp = make_polyhedron(OCTANT, [(2, 0, 0), (0, 2, 0)])
    # the cone spanned by e1 and e2 crosses the wall x = y of the normal fan
    with pytest.raises(ValueError):
        face_for_cone(lnp, make_cone([(1, 0, 0), (0, 1, 0)], side="N"))


def test_lattice_measures_brieskorn():
    lnp = make_polyhedron(OCTANT, BRIESKORN_235)
    edge = face_for_cone(lnp, make_cone([(15, 10, 6), (0, 0, 1)], side="N"))
    assert edge.points == ((0, 3, 0), (2, 0, 0))
    assert lattice_measures(edge).l == 1  # (-2, 3, 0) is primitive
    tri = face_for_cone(lnp, make_cone([(15, 10, 6)], side="N"))
    m = lattice_measures(tri)
    assert m.i == 0  # only the three vertices meet the plane piece
    v_edge = face_for_cone(lnp, make_cone([(15, 10, 6), (1, 0, 0)], side="N"))
    assert lattice_measures(v_edge).l == 1


def test_lattice_measures_unit_square_pick():
    square = [(0, 0), (1, 0), (0, 1), (1, 1)]
    hull = _hull2d(square)
    assert polygon_volume(hull) == 2
    assert interior_points(hull) == 0
    assert boundary_points(hull) == 4
    # Pick: vol = 2i + b - 2
    assert polygon_volume(hull) == 2 * 0 + 4 - 2


def test_mixed_volume_examples():
    square = [(0, 0), (1, 0), (0, 1), (1, 1)]
    seg = [(0, 0), (1, 0)]
    assert mixed_volume_2d(square, seg) == 1
    assert mixed_volume_2d(square, square) == polygon_volume(_hull2d(square))
    assert mixed_volume_2d(seg, [(0, 0), (0, 1)]) == 1
    assert mixed_volume_2d(seg, seg) == 0


def test_mixed_volume_random_properties():
    rng = random.Random(11)
    for _ in range(200):
        p1 = [(rng.randint(0, 5), rng.randint(0, 5)) for _ in range(rng.randint(1, 6))]
        p2 = [(rng.randint(0, 5), rng.randint(0, 5)) for _ in range(rng.randint(1, 6))]
        v = mixed_volume_2d(p1, p2)
        assert v == mixed_volume_2d(p2, p1)
        assert polygon_volume(minkowski_sum(p1, p2)) == \
            polygon_volume(_hull2d(p1)) + 2 * v + polygon_volume(_hull2d(p2))


def test_check_hypotheses_paper_example():
    f = SupportedFunction(PAPER_SIGMA, tuple(sorted(PAPER_SUPPORT)))
    report = check_hypotheses(f)
    assert report.ok
    # the singular-face dual ray is spanned by (1,0,0); no support multiple of it
    assert not any(p[1] == 0 and p[2] == 0 for p in f.support)


def test_check_hypotheses_failures():
    bad = SupportedFunction(OCTANT, ((1, 1, 0),))
    report = check_hypotheses(bad)
    assert not report.suitable
    assert len(report.suitability_violations) == 2
    ok = SupportedFunction(OCTANT, ((2, 0, 0), (0, 2, 0)))
    assert check_hypotheses(ok).suitable

    sing = make_cone([(0, 1, 2), (0, 1, 0), (1, 0, 0)], side="N")
    viol = SupportedFunction(sing, ((1, 0, 0), (0, 2, -1), (0, 0, 1), (0, 1, 1)))
    rep = check_hypotheses(viol)
    assert not rep.smoothing_ok  # (1,0,0) sits on the singular face's dual ray


def _unit_coeffs(support):
    return {p: (Fraction(1), Fraction(0)) for p in support}


def test_check_nnd_brieskorn():
    support = tuple(sorted(BRIESKORN_235))
    f = SupportedFunction(OCTANT, support, _unit_coeffs(support))
    verdicts = check_nnd(f)
    assert verdicts and all(v.verdict == "nondegenerate" for v in verdicts)


def test_check_nnd_degenerate_edge():
    # x^2 - 2xy + y^2 + z^5: the edge truncation is (t - 1)^2, a double root
    support = ((2, 0, 0), (1, 1, 0), (0, 2, 0), (0, 0, 5))
    coeffs = _unit_coeffs(support)
    coeffs[(1, 1, 0)] = (Fraction(-2), Fraction(0))
    f = SupportedFunction(OCTANT, support, coeffs)
    verdicts = check_nnd(f)
    bad = [v for v in verdicts if v.verdict == "degenerate"]
    assert any(set(v.points) == {(2, 0, 0), (1, 1, 0), (0, 2, 0)} for v in bad)


def test_check_nnd_paper_example_unit_coefficients():
    support = tuple(sorted(PAPER_SUPPORT))
    f = SupportedFunction(PAPER_SIGMA, support, _unit_coeffs(support))
    verdicts = check_nnd(f)
    assert verdicts and all(v.verdict == "nondegenerate" for v in verdicts)


def test_check_nnd_without_coefficients_is_generic():
    f = SupportedFunction(OCTANT, tuple(sorted(BRIESKORN_235)))
    assert all(v.verdict == "assumed-generic" for v in check_nnd(f))


def test_compact_faces_counts():
    lnp = make_polyhedron(OCTANT, BRIESKORN_235)
    faces = compact_faces(lnp)
    dims = sorted(f.dim for f in faces)
    # one triangle, three edges, three vertices
    assert dims == [0, 0, 0, 1, 1, 1, 2]
