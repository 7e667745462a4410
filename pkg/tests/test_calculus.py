import random

import pytest

from newtonplumb.calculus import (
    blow_down,
    det_int,
    intersection_matrix,
    invariants,
    is_negative_definite,
    is_planar,
    lens_class,
    normalize_signs,
    reduce_graph,
    replay,
    smith_invariants,
    zero_chain_absorb,
    zero_leaf_split,
)
from newtonplumb.graphs import Edge, PGVertex, plumb_graph


def _chain(eulers, sign="+"):
    vs = [PGVertex(i, e, 0) for i, e in enumerate(eulers)]
    es = [Edge(i, i + 1, sign) for i in range(len(eulers) - 1)]
    return plumb_graph(vs, es)


def _e8():
    # star: center 7 with arms 3 | 5-1 | 6-4-2-0, all Euler -2
    vs = [PGVertex(i, -2, 0) for i in range(8)]
    es = [Edge(2, 0, "+"), Edge(5, 1, "+"), Edge(4, 2, "+"), Edge(7, 3, "+"),
          Edge(6, 4, "+"), Edge(7, 5, "+"), Edge(7, 6, "+")]
    return plumb_graph(vs, es)


def test_blow_down_middle_of_chain():
    g = _chain([-2, -1, -2])
    out = blow_down(g, 1)
    assert sorted(v.euler for v in out.vertices) == [-1, -1]
    assert len(out.edges) == 1
    # the manifold is unchanged: both sides are det-0 (S1 x S2 here)
    assert abs(det_int(intersection_matrix(g))) == \
        abs(det_int(intersection_matrix(out))) == 0


def test_blow_down_leaf_lens_oracle():
    g = _chain([-3, -1])
    out = blow_down(g, 1)
    assert [(v.euler, v.genus) for v in out.vertices] == [(-2, 0)]
    # L(2,1) on both sides; the chain [-3]-[-1] evaluates to -2
    assert lens_class([-3, -1]) == lens_class([-2]) == (2, 1)


def test_blow_down_isolated_vertex():
    g = plumb_graph([PGVertex(0, -1, 0)], [])
    assert blow_down(g, 0).vertices == ()


def test_blow_down_preconditions():
    g = plumb_graph([PGVertex(0, -2, 0)], [])
    with pytest.raises(ValueError):
        blow_down(g, 0)
    star = plumb_graph([PGVertex(0, -1, 0)] + [PGVertex(i, -2, 0) for i in (1, 2, 3)],
                       [Edge(0, 1, "+"), Edge(0, 2, "+"), Edge(0, 3, "+")])
    with pytest.raises(ValueError):
        blow_down(star, 0)  # valence 3
    genus = plumb_graph([PGVertex(0, -1, 1)], [])
    with pytest.raises(ValueError):
        blow_down(genus, 0)


def test_zero_chain_absorb():
    g = _chain([-3, 0, -5])
    out = zero_chain_absorb(g, 1)
    assert [(v.euler, v.genus) for v in out.vertices] == [(-8, 0)]
    # lens oracle: -3 - 1/(0 - 1/-5) = -8
    assert lens_class([-3, 0, -5]) == lens_class([-8])


def test_zero_leaf_split():
    g = _chain([0, 2, 0])
    out = zero_leaf_split(g, 0)
    assert [(v.euler, v.genus) for v in out.vertices] == [(0, 0)]
    # genus on the absorbed neighbour leaves handles behind
    g2 = plumb_graph([PGVertex(0, 0, 0), PGVertex(1, 5, 2)], [Edge(0, 1, "+")])
    out2 = zero_leaf_split(g2, 0)
    assert [(v.euler, v.genus) for v in out2.vertices] == [(0, 0)] * 4


def test_reduce_e8_with_appendage():
    # blow up the E8 tree once: attach a (-1)-leaf and offset its neighbour
    base = _e8()
    vs = list(base.vertices)
    vs[0] = PGVertex(0, -3, 0)
    vs.append(PGVertex(8, -1, 0))
    g = plumb_graph(vs, base.edges + (Edge(0, 8, "+"),))
    reduced, trace = reduce_graph(g)
    assert reduced == reduce_graph(_e8())[0]
    assert sorted(v.euler for v in reduced.vertices) == [-2] * 8
    assert abs(det_int(intersection_matrix(reduced))) == 1


def test_reduce_s1xs2_chain():
    reduced, _ = reduce_graph(_chain([-2, -1, -2]))
    assert [(v.euler, v.genus) for v in reduced.vertices] == [(0, 0)]
    assert reduced.edges == ()


def test_reduce_keeps_minimal_graphs():
    g = plumb_graph([PGVertex(0, 0, 0)], [])
    reduced, _ = reduce_graph(g)
    assert reduced == g  # S1 x S2 stays
    lens = _chain([-2, -3])
    assert reduce_graph(lens)[0] == lens


def test_reduce_removes_s3_units():
    g = plumb_graph([PGVertex(0, 1, 0), PGVertex(1, -2, 0), PGVertex(2, -2, 0)],
                    [Edge(1, 2, "+")])
    reduced, _ = reduce_graph(g)
    assert len(reduced.vertices) == 2


def test_reduce_idempotent_and_replayable():
    rng = random.Random(31)
    for _ in range(50):
        n = rng.randint(1, 7)
        vs = [PGVertex(i, rng.randint(-3, 3), rng.choice([0, 0, 0, 1]))
              for i in range(n)]
        es = []
        for i in range(1, n):
            es.append(Edge(rng.randint(0, i - 1), i, rng.choice("+-")))
        if n > 2 and rng.random() < 0.4:
            es.append(Edge(0, n - 1, rng.choice("+-")))
        g = plumb_graph(vs, es)
        reduced, trace = reduce_graph(g)
        again, _ = reduce_graph(reduced)
        assert again == reduced
        assert replay(g, trace) == reduced


def test_normalize_signs_tree_all_plus():
    g = _chain([-2, -3, -2], sign="-")
    out = normalize_signs(g)
    assert all(e.sign == "+" for e in out.edges)
    # cycles keep their gauge-invariant sign product
    tri = plumb_graph([PGVertex(i, -2, 0) for i in range(3)],
                      [Edge(0, 1, "-"), Edge(1, 2, "+"), Edge(0, 2, "+")])
    out2 = normalize_signs(tri)
    prod = 1
    for e in out2.edges:
        prod *= 1 if e.sign == "+" else -1
    assert prod == -1


def test_invariants_examples():
    inv8 = invariants(_e8())
    assert abs(inv8.det) == 1 and inv8.h1_rank == 0 and inv8.torsion == ()
    rp3 = invariants(plumb_graph([PGVertex(0, -2, 0)], []))
    assert abs(rp3.det) == 2 and rp3.torsion == (2,)
    s1s2 = invariants(plumb_graph([PGVertex(0, 0, 0)], []))
    assert s1s2.det == 0 and s1s2.h1_rank == 1
    signed = invariants(plumb_graph([PGVertex(0, -2, 0), PGVertex(1, -2, 0)],
                                    [Edge(0, 1, "-")]))
    assert not signed.supported and signed.h1_rank is None


def test_negative_definiteness():
    assert is_negative_definite([list(r) for r in invariants(_e8()).matrix])
    assert not is_negative_definite([[0]])
    assert not is_negative_definite([[2]])
    assert is_negative_definite([[-2, 1], [1, -2]])
    assert not is_negative_definite([[-2, 3], [3, -2]])


def test_planarity():
    assert is_planar(_e8())
    k5 = plumb_graph([PGVertex(i, -2, 0) for i in range(5)],
                     [Edge(i, j, "+") for i in range(5) for j in range(i + 1, 5)])
    assert not is_planar(k5)


def test_smith_invariants():
    assert smith_invariants([[2, 0], [0, 3]]) == [1, 6] or \
        sorted(smith_invariants([[2, 0], [0, 3]])) == [1, 6]
    assert smith_invariants([[0]]) == []


def test_lens_class_recognition():
    assert lens_class([0]) == (0, 1)
    assert lens_class([-2, -2]) == (3, 1)
    assert lens_class([-2, -2, -2]) == (4, 1)  # A3 chain: L(4, 3) = L(4, 1)-dual
    # L(5,2) and L(5,3) are the same space up to the inverse convention
    assert lens_class([-3, -2]) == lens_class([-2, -3]) == (5, 2)
