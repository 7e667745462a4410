"""Strongly convex rational cones in a rank-3 lattice, their duals, and fans.

Cones are stored by their primitive extremal rays in a fixed lexicographic
order, so equal cones compare equal and every construction is reproducible.
The H<->V conversions are hand-rolled double description at this fixed small
dimension: candidate extremal rays are cross products of pairs of facet
normals, which is complete for pointed cones in rank 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import InvariantError
from .lattice import (
    Coords,
    ZERO,
    det3,
    kernel_basis,
    primitive,
    vcross,
    vdot,
    vec_rank,
    vneg,
    vsub,
    vsum,
)

_UNITS = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def extreme_rays(halfspaces: Sequence[Coords]) -> Tuple[Coords, ...]:
    """Primitive extremal rays of the pointed cone {v : <a, v> >= 0 for all a}.

    Pointedness (rank of the normals = 3) is the caller's responsibility;
    every extremal ray of a pointed cone in rank 3 has two independent
    active constraints, so cross products of normal pairs find them all.
    """
    rays = set()
    n = len(halfspaces)
    for i in range(n):
        ai = halfspaces[i]
        for j in range(i + 1, n):
            d = vcross(ai, halfspaces[j])
            if d == ZERO:
                continue
            d = primitive(d)
            for cand in (d, vneg(d)):
                if cand in rays:
                    continue
                if all(vdot(a, cand) >= 0 for a in halfspaces):
                    rays.add(cand)
    return tuple(sorted(rays))


def _hull2d(points: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Convex hull (CCW, no repeated endpoint) of 2D integer points; exact."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: List[Tuple[int, int]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Tuple[int, int]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True, order=True)
class Cone:
    """A strongly convex rational cone given by sorted primitive extremal rays."""

    rays: Tuple[Coords, ...]
    side: str = "N"

    def __post_init__(self):
        if tuple(sorted(self.rays)) != self.rays:
            raise ValueError("rays must be sorted; use make_cone for raw generators")

    @property
    def dim(self) -> int:
        return cone_dim(self)

    def contains(self, v: Coords) -> bool:
        return all(vdot(a, v) >= 0 for a in cone_halfspaces(self))

    def sort_key(self):
        return (self.dim, self.rays)


def make_cone(generators: Iterable, side: str = "N") -> Cone:
    """Canonical cone from arbitrary generators; rejects non-pointed input."""
    prims = sorted({primitive(tuple(g) if not isinstance(g, tuple) else g)
                    for g in (tuple(x) for x in generators) if tuple(g) != ZERO})
    if not prims:
        return Cone((), side)
    r = vec_rank(prims)
    if r == 1:
        if len(prims) > 1:
            raise ValueError("cone contains a line (opposite rays)")
        return Cone((prims[0],), side)
    if r == 2:
        return _canonical_rank2(prims, side)
    dual = extreme_rays(prims)
    if vec_rank(dual) < 3:
        raise ValueError("cone is not strongly convex")
    return Cone(extreme_rays(dual), side)


def _canonical_rank2(prims: Sequence[Coords], side: str) -> Cone:
    normal = primitive(vcross(prims[0], next(p for p in prims if vcross(prims[0], p) != ZERO)))
    b1, b2 = kernel_basis(normal)
    # solve p = x b1 + y b2 exactly through the chart machinery
    from .lattice import UnimodularChart2D

    chart = UnimodularChart2D(ZERO, (b1, b2))
    pts2 = [chart.to_chart(p) for p in prims]
    hull = _hull2d([(0, 0)] + pts2)
    if (0, 0) not in hull:
        raise ValueError("cone is not strongly convex")
    k = hull.index((0, 0))
    nxt, prv = hull[(k + 1) % len(hull)], hull[(k - 1) % len(hull)]
    rays = sorted({primitive(chart.from_chart(nxt)), primitive(chart.from_chart(prv))})
    if len(rays) != 2:
        raise ValueError("cone is not strongly convex")
    return Cone(tuple(rays), side)


@lru_cache(maxsize=None)
def cone_dim(c: Cone) -> int:
    return vec_rank(c.rays)


@lru_cache(maxsize=None)
def cone_halfspaces(c: Cone) -> Tuple[Coords, ...]:
    """Half-space description {v : <a, v> >= 0}; equalities appear as +/- pairs."""
    d = cone_dim(c)
    if d == 0:
        out = []
        for e in _UNITS:
            out += [e, vneg(e)]
        return tuple(out)
    if d == 1:
        r = c.rays[0]
        n1, n2 = kernel_basis(r)
        return (n1, vneg(n1), n2, vneg(n2), r)
    if d == 2:
        r1, r2 = c.rays
        n = primitive(vcross(r1, r2))
        w1 = vcross(n, r1)
        if vdot(w1, r2) < 0:
            w1 = vneg(w1)
        w2 = vcross(n, r2)
        if vdot(w2, r1) < 0:
            w2 = vneg(w2)
        return (n, vneg(n), primitive(w1), primitive(w2))
    return dual_cone(c).rays


@lru_cache(maxsize=None)
def dual_cone(c: Cone) -> Cone:
    """Dual of a full-dimensional strongly convex cone, on the opposite side."""
    if cone_dim(c) != 3:
        raise ValueError("dual_cone is only represented for 3-dimensional cones")
    rays = extreme_rays(c.rays)
    if vec_rank(rays) < 3:
        raise InvariantError("dual of a strongly convex 3-cone must be 3-dimensional")
    other = "M" if c.side == "N" else "N"
    return Cone(rays, other)


@lru_cache(maxsize=None)
def cone_faces(c: Cone) -> Tuple[Cone, ...]:
    """All faces of c, including the origin and c itself, sorted by (dim, rays)."""
    faces = {Cone((), c.side), c}
    for r in c.rays:
        faces.add(Cone((r,), c.side))
    if cone_dim(c) == 3:
        for w in dual_cone(c).rays:
            fr = tuple(sorted(r for r in c.rays if vdot(w, r) == 0))
            if fr:
                faces.add(Cone(fr, c.side))
    return tuple(sorted(faces, key=lambda f: f.sort_key()))


@lru_cache(maxsize=None)
def is_regular(c: Cone) -> bool:
    """True iff the primitive ray generators extend to a Z-basis of the lattice."""
    d = cone_dim(c)
    if d <= 1:
        return True
    if d == 2:
        r1, r2 = c.rays
        m = vcross(r1, r2)  # coordinates are the three 2x2 minors
        return gcd(gcd(abs(m[0]), abs(m[1])), abs(m[2])) == 1
    if len(c.rays) != 3:
        return False
    return abs(det3(*c.rays)) == 1


def cone_index(c: Cone) -> int:
    """Multiplicity |det| of a simplicial 3-cone (1 iff regular)."""
    if cone_dim(c) != 3 or len(c.rays) != 3:
        raise ValueError("index is defined for simplicial 3-cones")
    return abs(det3(*c.rays))


def intersect_cones(a: Cone, b: Cone) -> Cone:
    if a.side != b.side:
        raise ValueError("cannot intersect cones on different sides")
    hs = cone_halfspaces(a) + cone_halfspaces(b)
    return Cone(extreme_rays(hs), a.side)


def relint_point(c: Cone) -> Coords:
    """A lattice point in the relative interior (0 for the zero cone)."""
    if not c.rays:
        return ZERO
    return vsum(c.rays)


def minimal_containing_face(c: Cone, v: Coords) -> Cone:
    """Smallest face of c containing v; errors if v is outside c."""
    for f in cone_faces(c):
        if f.contains(v):
            return f
    raise ValueError(f"{v!r} is not contained in the cone")


def is_face_of(f: Cone, c: Cone) -> bool:
    return f in cone_faces(c)


@dataclass(frozen=True)
class Fan:
    """A finite face-closed collection of cones subdividing a support cone."""

    support: Cone
    cones: Tuple[Cone, ...]

    def cones_of_dim(self, d: int) -> Tuple[Cone, ...]:
        return tuple(c for c in self.cones if cone_dim(c) == d)

    @property
    def maximal(self) -> Tuple[Cone, ...]:
        return self.cones_of_dim(cone_dim(self.support))

    def rays(self) -> Tuple[Coords, ...]:
        return tuple(sorted(r for c in self.cones_of_dim(1) for r in c.rays))

    def contains_cone(self, c: Cone) -> bool:
        return c in set(self.cones)


def trivial_fan(support: Cone) -> Fan:
    return Fan(support, cone_faces(support))


def fan_from_maximal(maximal: Iterable[Cone], support: Cone, check: str = "light") -> Fan:
    """Assemble the face closure of the given maximal cones and validate it."""
    cones = set()
    for c in maximal:
        cones.update(cone_faces(c))
    fan = Fan(support, tuple(sorted(cones, key=lambda c: c.sort_key())))
    validate_fan(fan, full=(check == "full"))
    return fan


def validate_fan(fan: Fan, full: bool = False) -> None:
    """Fan axioms; ``full`` adds the exhaustive pairwise common-face audit."""
    cones = set(fan.cones)
    sdim = cone_dim(fan.support)
    for c in fan.cones:
        for f in cone_faces(c):
            if f not in cones:
                raise InvariantError(f"fan is not face-closed at {c}")
        for r in c.rays:
            if not fan.support.contains(r):
                raise InvariantError("fan cone leaves the support")
    if sdim == 3:
        # wall condition: interior walls bound exactly two cells, boundary walls one
        counts: Dict[Cone, int] = {}
        for cell in fan.maximal:
            for f in cone_faces(cell):
                if cone_dim(f) == 2:
                    counts[f] = counts.get(f, 0) + 1
        for w in fan.cones_of_dim(2):
            on_boundary = cone_dim(minimal_containing_face(fan.support, relint_point(w))) <= 2
            expect = 1 if on_boundary else 2
            if counts.get(w, 0) != expect:
                raise InvariantError(f"wall condition fails at {w.rays} "
                                     f"(found {counts.get(w, 0)}, expected {expect})")
    if full:
        mx = fan.maximal
        for i in range(len(mx)):
            for j in range(i + 1, len(mx)):
                inter = intersect_cones(mx[i], mx[j])
                if not (is_face_of(inter, mx[i]) and is_face_of(inter, mx[j])):
                    raise InvariantError(
                        f"cones {mx[i].rays} and {mx[j].rays} do not meet in a common face")


def common_refinement(f1: Fan, f2: Fan, check: str = "light") -> Fan:
    """The fan of pairwise intersections; the minimal refinement of both."""
    if f1.support != f2.support:
        raise ValueError("fans must share their support cone")
    pieces = set()
    for a in f1.maximal:
        for b in f2.maximal:
            c = intersect_cones(a, b)
            if cone_dim(c) == cone_dim(f1.support):
                pieces.add(c)
    return fan_from_maximal(pieces, f1.support, check=check)


def minimal_containing_cone(t: Cone, fan: Fan) -> Cone:
    """The unique cone of the fan whose relative interior meets relint(t)."""
    p = relint_point(t)
    if not fan.support.contains(p):
        raise ValueError("cone is not contained in the fan support")
    best = None
    for c in fan.cones:
        if c.contains(p) and (best is None or cone_dim(c) < cone_dim(best)):
            best = c
    if best is None:
        raise InvariantError("fan does not cover its support")
    return best


def stellar_subdivide(fan: Fan, ray: Coords, check: str = "light") -> Fan:
    """Stellar subdivision of the fan at a new primitive ray in its support."""
    ray = primitive(ray)
    if Cone((ray,), fan.support.side) in set(fan.cones):
        raise ValueError("ray is already in the fan")
    new_max: List[Cone] = []
    for cell in fan.maximal:
        if not cell.contains(ray):
            new_max.append(cell)
            continue
        for f in cone_faces(cell):
            if cone_dim(f) == 2 and not f.contains(ray):
                new_max.append(make_cone(f.rays + (ray,), cell.side))
    return fan_from_maximal(new_max, fan.support, check=check)


def pull_triangulate(cell: Cone, apex: Coords) -> List[Cone]:
    """Triangulation of a 3-cone by pyramids from one of its extremal rays.

    Valid inside a fan as long as none of the cell's walls is subdivided
    elsewhere (the pyramids take whole walls as faces).
    """
    if apex not in cell.rays:
        raise ValueError("apex must be an extremal ray of the cell")
    pieces = []
    for f in cone_faces(cell):
        if cone_dim(f) == 2 and apex not in f.rays:
            pieces.append(make_cone(f.rays + (apex,), cell.side))
    return pieces
