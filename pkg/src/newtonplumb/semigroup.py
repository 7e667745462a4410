"""Hilbert basis of the dual semigroup and the universal companion polyhedron.

The companion function itself is never materialised: all downstream
consumers read heights, faces and mixed volumes off its Newton polyhedron,
which is determined by the Hilbert basis alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Tuple

from .cones import Cone, cone_dim, cone_faces, dual_cone, pull_triangulate
from .errors import InvariantError
from .lattice import Coords, ZERO, det3, vdot, vec_rank
from .newton import NewtonPolyhedron, make_polyhedron


@dataclass(frozen=True)
class HilbertBasis:
    """The unique minimal generating set of cone ∩ M."""

    cone: Cone
    elements: Tuple[Coords, ...]


def _parallelepiped_points(v1: Coords, v2: Coords, v3: Coords) -> List[Coords]:
    """Lattice points of {t1 v1 + t2 v2 + t3 v3 : 0 <= t_i < 1}."""
    d = det3(v1, v2, v3)
    if d == 0:
        raise ValueError("degenerate simplicial cone")
    # adjugate rows, so adj . m = d * (t1, t2, t3)
    from .lattice import vcross

    adj = (vcross(v2, v3), vcross(v3, v1), vcross(v1, v2))
    if d < 0:
        d = -d
        adj = tuple((-a[0], -a[1], -a[2]) for a in adj)
    los = [min(v1[k], 0) + min(v2[k], 0) + min(v3[k], 0) for k in range(3)]
    his = [max(v1[k], 0) + max(v2[k], 0) + max(v3[k], 0) for k in range(3)]
    out = []
    for x in range(los[0], his[0] + 1):
        for y in range(los[1], his[1] + 1):
            for z in range(los[2], his[2] + 1):
                m = (x, y, z)
                if all(0 <= vdot(a, m) < d for a in adj):
                    out.append(m)
    return out


def _triangulate_3cone(c: Cone) -> List[Tuple[Coords, Coords, Coords]]:
    if len(c.rays) == 3:
        return [c.rays]
    apex = c.rays[0]  # lexicographically least; pulling is canonical
    return [tuple(sorted(p.rays)) for p in pull_triangulate(c, apex)]  # type: ignore[misc]


def hilbert_basis(c: Cone) -> HilbertBasis:
    """Gordan-style enumeration: triangulate, collect parallelepiped points,
    then drop every element that splits as a sum of two nonzero semigroup
    elements (semigroup membership is just cone membership here, since the
    semigroup is saturated)."""
    if cone_dim(c) != 3:
        raise ValueError("hilbert_basis expects a 3-dimensional cone")
    candidates = set(c.rays)
    for tri in _triangulate_3cone(c):
        for m in _parallelepiped_points(*tri):
            if m != ZERO:
                candidates.add(m)
    cands = sorted(candidates)

    def reducible(g: Coords) -> bool:
        for h in cands:
            if h == g:
                continue
            rest = (g[0] - h[0], g[1] - h[1], g[2] - h[2])
            if rest != ZERO and c.contains(rest):
                return True
        return False

    elements = tuple(g for g in cands if not reducible(g))
    _assert_generates_faces(c, elements)
    return HilbertBasis(c, elements)


def _assert_generates_faces(c: Cone, elements: Tuple[Coords, ...]) -> None:
    # every proper face must carry at least one generator, otherwise the
    # semigroup of that face could not be generated
    for f in cone_faces(c):
        if cone_dim(f) == 0:
            continue
        if not any(f.contains(e) for e in elements):
            raise InvariantError(f"face {f.rays} carries no Hilbert basis element")


def companion_polyhedron(hb: HilbertBasis, c: Cone) -> NewtonPolyhedron:
    """Newton polyhedron P(G) of a generic companion; support = Hilbert basis."""
    if hb.cone != c:
        raise ValueError("Hilbert basis does not belong to this cone")
    sigma = dual_cone(c)
    return make_polyhedron(sigma, hb.elements)


def is_generated_by(c: Cone, elements: Iterable[Coords], point: Coords,
                    _depth: int = 0) -> bool:
    """Greedy-with-backtracking test that point is an N-combination of elements."""
    if point == ZERO:
        return True
    if not c.contains(point):
        return False
    for e in elements:
        rest = (point[0] - e[0], point[1] - e[1], point[2] - e[2])
        if rest == ZERO:
            return True
        if c.contains(rest) and is_generated_by(c, elements, rest, _depth + 1):
            return True
    return False
