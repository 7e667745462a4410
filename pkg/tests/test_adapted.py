import random

import pytest

from newtonplumb.adapted import (
    build_adapted_fan,
    build_common_fan,
    hj_subdivision_2d,
    regularize_boundary_2cones,
    regularize_wall,
)
from newtonplumb.cones import (
    cone_dim,
    cone_faces,
    dual_cone,
    is_regular,
    make_cone,
    minimal_containing_cone,
    validate_fan,
)
from newtonplumb.errors import BudgetError
from newtonplumb.newton import make_polyhedron, height, normal_fan
from newtonplumb.semigroup import companion_polyhedron, hilbert_basis

OCTANT = make_cone([(1, 0, 0), (0, 1, 0), (0, 0, 1)], side="N")
PAPER_SIGMA = make_cone([(0, 1, 2), (0, 1, 0), (1, 1, -1), (1, 0, 0)], side="N")


def _companion(sigma):
    dual = dual_cone(sigma)
    return companion_polyhedron(hilbert_basis(dual), dual)


def test_hj_subdivision_examples():
    assert hj_subdivision_2d((1, 0), (1, 2)) == [(1, 1)]
    assert hj_subdivision_2d((1, 0), (0, 1)) == []
    assert hj_subdivision_2d((1, 0), (1, 3)) == [(1, 1), (1, 2)]
    # consecutive determinants are all 1 and the recurrence u_{i-1} + u_{i+1} = k u_i holds
    rng = random.Random(23)
    for _ in range(200):
        q = rng.randint(1, 30)
        p = rng.randint(q + 1, 40)
        from math import gcd
        if gcd(p, q) != 1:
            continue
        u, v = (1, 0), (q, p)
        chain = [u] + hj_subdivision_2d(u, v) + [v]
        for a, b in zip(chain, chain[1:]):
            assert a[0] * b[1] - a[1] * b[0] == 1
        for i in range(1, len(chain) - 1):
            s = (chain[i - 1][0] + chain[i + 1][0], chain[i - 1][1] + chain[i + 1][1])
            assert s[0] % chain[i][0] == 0 or s[1] % chain[i][1] == 0
            k = (s[0] // chain[i][0]) if chain[i][0] else (s[1] // chain[i][1])
            assert k >= 2 and s == (k * chain[i][0], k * chain[i][1])


def test_regularize_wall_embedded():
    wall = make_cone([(15, 10, 6), (1, 0, 0)], side="N")
    ins = regularize_wall(wall)
    assert ins == [(8, 5, 3)]
    regular = make_cone([(1, 0, 0), (0, 1, 0)], side="N")
    assert regularize_wall(regular) == []


def test_common_fan_trivial_factor():
    lnp_f = make_polyhedron(OCTANT, [(1, 2, 3)])  # single vertex: trivial fan
    lnp_g = _companion(OCTANT)
    fbar = build_common_fan(lnp_f, lnp_g)
    assert set(fbar.cones) == set(normal_fan(lnp_g).cones)


def test_common_fan_brieskorn_has_crossing_ray():
    lnp_f = make_polyhedron(OCTANT, [(2, 0, 0), (0, 3, 0), (0, 0, 5)])
    lnp_g = _companion(OCTANT)
    fbar = build_common_fan(lnp_f, lnp_g, check="full")
    rays = set(fbar.rays())
    assert {(15, 10, 6), (1, 1, 1), (3, 2, 2)} <= rays
    # additivity of heights validates the refinement
    for r in rays:
        prod = make_polyhedron(OCTANT, [tuple(p[k] + q[k] for k in range(3))
                                        for p in lnp_f.support
                                        for q in lnp_g.support])
        assert height(prod, r) == height(lnp_f, r) + height(lnp_g, r)


def test_fhat_brieskorn_regularises_spokes():
    lnp_f = make_polyhedron(OCTANT, [(2, 0, 0), (0, 3, 0), (0, 0, 5)])
    lnp_g = _companion(OCTANT)
    fan_f = normal_fan(lnp_f)
    fbar = build_common_fan(lnp_f, lnp_g)
    fhat = regularize_boundary_2cones(fbar, fan_f, check="full")
    for w in fhat.cones_of_dim(2):
        if cone_dim(minimal_containing_cone(w, fan_f)) == 2:
            assert is_regular(w)
    assert {(8, 5, 3), (5, 4, 2), (10, 7, 4), (12, 8, 5), (9, 6, 4), (6, 4, 3)} \
        <= set(fhat.rays())


def test_fhat_unchanged_when_walls_regular():
    # paper example: those 2-cones are already regular, so nothing moves
    lnp_f = make_polyhedron(PAPER_SIGMA, [(1, 1, 2), (2, 0, 1), (0, 2, 0), (0, 4, -2)])
    lnp_g = _companion(PAPER_SIGMA)
    fbar = build_common_fan(lnp_f, lnp_g)
    fhat = regularize_boundary_2cones(fbar, normal_fan(lnp_f))
    assert fhat == fbar


def _adapted(sigma, support, budget=10_000):
    lnp_f = make_polyhedron(sigma, support)
    lnp_g = _companion(sigma)
    fbar = build_common_fan(lnp_f, lnp_g)
    fhat = regularize_boundary_2cones(fbar, normal_fan(lnp_f))
    return build_adapted_fan(fhat, lnp_f, lnp_g, budget=budget), lnp_f, lnp_g


def test_adapted_fan_brieskorn_audit():
    cf, lnp_f, _ = _adapted(OCTANT, [(2, 0, 0), (0, 3, 0), (0, 0, 5)])
    validate_fan(cf.fan, full=True)
    # every cell incident to the central pertinent ray is regular
    for cell in cf.fan.maximal:
        if cell.contains((15, 10, 6)):
            assert is_regular(cell)


def test_adapted_fan_paper_example_audit():
    cf, lnp_f, _ = _adapted(PAPER_SIGMA, [(1, 1, 2), (2, 0, 1), (0, 2, 0), (0, 4, -2)])
    validate_fan(cf.fan, full=True)
    assert cf.cutting_cones  # the example does produce exceptional curves
    for w in cf.cutting_cones:
        assert is_regular(w)
    # boundary constraint: inserted 2-face rays only over faces under V(f)
    sigma = cf.sigma
    from newtonplumb.cones import minimal_containing_face
    for r in cf.fan.rays():
        face = minimal_containing_face(sigma, r)
        if cone_dim(face) == 2 and r not in sigma.rays:
            assert not any(all(sum(m[k] * rr[k] for k in range(3)) == 0
                               for rr in face.rays) for m in lnp_f.support)


def test_adapted_fan_budget_guard():
    with pytest.raises(BudgetError):
        _adapted(PAPER_SIGMA, [(1, 1, 2), (2, 0, 1), (0, 2, 0), (0, 4, -2)], budget=1)


def test_classification_data_brieskorn():
    cf, lnp_f, lnp_g = _adapted(OCTANT, [(2, 0, 0), (0, 3, 0), (0, 0, 5)])
    rd = cf.ray_data[(15, 10, 6)]
    assert rd.pertinent and rd.h_f == 30 and rd.h_g == 6 and rd.delta_dim == 2
    rd2 = cf.ray_data[(3, 2, 2)]
    assert rd2.pertinent and rd2.h_f == 6 and rd2.h_g == 2 and rd2.delta_dim == 1
    assert not cf.cutting_cones  # nothing sits inside a 2-face of the octant
