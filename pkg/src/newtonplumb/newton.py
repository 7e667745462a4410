"""Local Newton polyhedra, their normal fans, face measures, and hypothesis checks.

The polyhedron Conv(support + dual cone) is never materialised as an
H-representation: heights are direct minima over the support, the normal
fan comes from dualising the vertex cones, and faces are common argmin sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InputError, InvariantError
from .cones import (
    Cone,
    cone_dim,
    cone_faces,
    dual_cone,
    extreme_rays,
    fan_from_maximal,
    Fan,
    is_regular,
    make_cone,
    relint_point,
    trivial_fan,
    _hull2d,
)
from .lattice import (
    Coords,
    ZERO,
    as_coords,
    face_chart,
    integral_length,
    vdot,
    vec_rank,
    vsub,
    vsum,
)

Coeff = Tuple[Fraction, Fraction]  # exact complex number (re, im)


@dataclass(frozen=True)
class SupportedFunction:
    """A germ on the toric variety of ``ambient`` given by its monomial support.

    Coefficients are optional: the pipeline is combinatorial and treats a
    missing coefficient map as "generic", which the nondegeneracy check
    reports rather than decides.
    """

    ambient: Cone  # the N-side cone sigma
    support: Tuple[Coords, ...]
    coefficients: Optional[Dict[Coords, Coeff]] = None

    def __post_init__(self):
        dual = dual_cone(self.ambient)
        for m in self.support:
            if not dual.contains(m):
                raise InputError("support-outside-dual",
                                 f"support point {m} lies outside the dual cone")


@dataclass(frozen=True)
class NewtonPolyhedron:
    """Conv(support + dual cone): support points, recession cone, vertices."""

    ambient: Cone  # sigma, N-side
    dual: Cone  # sigma-check, M-side
    support: Tuple[Coords, ...]

    @property
    def vertices(self) -> Tuple[Coords, ...]:
        return tuple(m for m in self.support if _is_vertex(self, m))


def make_polyhedron(sigma: Cone, support: Sequence) -> NewtonPolyhedron:
    if cone_dim(sigma) != 3:
        raise InputError("cone-not-3d", "the ambient cone must be 3-dimensional")
    pts = tuple(sorted({as_coords(p) for p in support}))
    if not pts:
        raise InputError("malformed", "empty support")
    dual = dual_cone(sigma)
    for m in pts:
        if not dual.contains(m):
            raise InputError("support-outside-dual",
                             f"support point {m} lies outside the dual cone")
    return NewtonPolyhedron(sigma, dual, pts)


def polyhedron_of(f: SupportedFunction) -> NewtonPolyhedron:
    return make_polyhedron(f.ambient, f.support)


def height(lnp: NewtonPolyhedron, v) -> int:
    """min <m, v> over the polyhedron; v must lie in sigma."""
    vc = as_coords(v)
    if not lnp.ambient.contains(vc):
        raise ValueError(f"direction {vc} is outside the ambient cone")
    return min(vdot(m, vc) for m in lnp.support)


def argmin_support(lnp: NewtonPolyhedron, v: Coords) -> Tuple[Coords, ...]:
    h = min(vdot(m, v) for m in lnp.support)
    return tuple(m for m in lnp.support if vdot(m, v) == h)


def _vertex_normal_rays(lnp: NewtonPolyhedron, m: Coords) -> Tuple[Coords, ...]:
    rows = [vsub(p, m) for p in lnp.support if p != m]
    rows.extend(lnp.dual.rays)
    return extreme_rays(tuple(rows))


def _is_vertex(lnp: NewtonPolyhedron, m: Coords) -> bool:
    return vec_rank(_vertex_normal_rays(lnp, m)) == 3


def normal_fan(lnp: NewtonPolyhedron) -> Fan:
    """The subdivision of sigma into linearity domains of v -> h_v.

    Maximal cones are duals of the vertex cones of the polyhedron; support
    points that are not vertices contribute lower-dimensional normal cones
    and are skipped (they arise as faces).
    """
    maximal = []
    for m in lnp.support:
        rays = _vertex_normal_rays(lnp, m)
        if vec_rank(rays) == 3:
            maximal.append(Cone(rays, lnp.ambient.side))
    if not maximal:
        raise InvariantError("a pointed polyhedron has at least one vertex")
    if len(maximal) == 1:
        return trivial_fan(lnp.ambient)
    return fan_from_maximal(maximal, lnp.ambient, check="light")


@dataclass(frozen=True)
class PolyFace:
    """A face of the polyhedron, carried by the cone of directions defining it."""

    points: Tuple[Coords, ...]  # support points on the face
    recession: Tuple[Coords, ...]  # extremal rays of the dual cone lying on it
    dim: int
    compact: bool
    cone: Cone  # the N-side cone it was computed from

    def polygon_chart_points(self) -> List[Tuple[int, int]]:
        """The face's points as 2D chart coordinates (dim-2 compact faces)."""
        chart = face_chart(sorted(self.points))
        return [chart.to_chart(p) for p in self.points]


def face_for_cone(lnp: NewtonPolyhedron, t: Cone) -> PolyFace:
    """The face on which every direction of t attains its height.

    Rejects cones straddling two linearity domains (the common argmin set is
    empty exactly in that case).
    """
    gens = t.rays if t.rays else (relint_point(lnp.ambient),)
    common = set(argmin_support(lnp, gens[0]))
    for v in gens[1:]:
        common &= set(argmin_support(lnp, v))
        if not common:
            raise ValueError("cone straddles two cones of the normal fan")
    pts = tuple(sorted(common))
    recession = tuple(r for r in lnp.dual.rays
                      if all(vdot(r, v) == 0 for v in t.rays))
    base = pts[0]
    dirs = [vsub(p, base) for p in pts[1:]]
    dirs.extend(recession)
    return PolyFace(points=pts, recession=recession, dim=vec_rank(dirs),
                    compact=not recession, cone=t)


def delta_dim(lnp: NewtonPolyhedron, t: Cone) -> int:
    return face_for_cone(lnp, t).dim


@dataclass(frozen=True)
class FaceMeasures:
    l: int  # lattice length (dim-1 faces; 0 otherwise)
    i: int  # interior lattice points (dim-2 faces; 0 otherwise)
    vol: int  # normalised lattice volume, unit simplex -> 1


def lattice_measures(face: PolyFace) -> FaceMeasures:
    if not face.compact:
        raise ValueError("lattice measures are defined for compact faces")
    if face.dim == 0:
        return FaceMeasures(0, 0, 0)
    if face.dim == 1:
        lo, hi = _segment_endpoints(face.points)
        return FaceMeasures(integral_length(vsub(hi, lo)), 0, 0)
    hull = _hull2d(face.polygon_chart_points())
    return FaceMeasures(0, interior_points(hull), polygon_volume(hull))


def _segment_endpoints(points: Sequence[Coords]) -> Tuple[Coords, Coords]:
    pts = sorted(points)
    return pts[0], pts[-1]


# -- 2D polygon helpers (exact, chart coordinates) ---------------------------

def polygon_volume(hull: Sequence[Tuple[int, int]]) -> int:
    """Normalised volume (= twice the Euclidean area) of a convex hull cycle."""
    if len(hull) <= 2:
        return 0
    s = 0
    for k in range(len(hull)):
        x1, y1 = hull[k]
        x2, y2 = hull[(k + 1) % len(hull)]
        s += x1 * y2 - x2 * y1
    return abs(s)


def _point_position(hull: Sequence[Tuple[int, int]], p: Tuple[int, int]) -> int:
    """1 interior, 0 boundary, -1 outside, for a CCW hull (degenerate allowed)."""
    if len(hull) == 1:
        return 0 if p == hull[0] else -1
    if len(hull) == 2:
        (x1, y1), (x2, y2) = hull
        cr = (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)
        if cr != 0:
            return -1
        d1 = (p[0] - x1) * (x2 - x1) + (p[1] - y1) * (y2 - y1)
        d2 = (x2 - x1) ** 2 + (y2 - y1) ** 2
        return 0 if 0 <= d1 <= d2 else -1
    pos = 1
    for k in range(len(hull)):
        a, b = hull[k], hull[(k + 1) % len(hull)]
        cr = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
        if cr < 0:
            return -1
        if cr == 0:
            pos = 0
    return pos


def _lattice_points_by_position(hull: Sequence[Tuple[int, int]]):
    if not hull:
        return
    xs = [p[0] for p in hull]
    ys = [p[1] for p in hull]
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            pos = _point_position(hull, (x, y))
            if pos >= 0:
                yield (x, y), pos


def interior_points(hull: Sequence[Tuple[int, int]]) -> int:
    return sum(1 for _, pos in _lattice_points_by_position(hull) if pos == 1)


def boundary_points(hull: Sequence[Tuple[int, int]]) -> int:
    return sum(1 for _, pos in _lattice_points_by_position(hull) if pos == 0)


def minkowski_sum(p1: Sequence[Tuple[int, int]], p2: Sequence[Tuple[int, int]]):
    return _hull2d([(a[0] + b[0], a[1] + b[1]) for a in p1 for b in p2])


def mixed_volume_2d(p1: Sequence[Tuple[int, int]], p2: Sequence[Tuple[int, int]]) -> int:
    """V(P1, P2) = (Vol(P1+P2) - Vol(P1) - Vol(P2)) / 2, in a common chart."""
    if not p1 or not p2:
        raise ValueError("mixed volume needs nonempty point sets")
    v12 = polygon_volume(minkowski_sum(p1, p2))
    v1 = polygon_volume(_hull2d(p1))
    v2 = polygon_volume(_hull2d(p2))
    num = v12 - v1 - v2
    if num % 2 or num < 0:
        raise InvariantError("mixed volume formula produced a non-integer")
    return num // 2


# -- hypothesis checks --------------------------------------------------------

@dataclass(frozen=True)
class HypothesisReport:
    suitable: bool
    smoothing_ok: bool
    suitability_violations: Tuple[Coords, ...]  # rays of sigma missed by the support
    smoothing_violations: Tuple[Tuple[Tuple[Coords, ...], Tuple[Coords, ...]], ...]
    # (face rays, offending support points) per violated non-regular face

    @property
    def ok(self) -> bool:
        return self.suitable and self.smoothing_ok


def check_hypotheses(f: SupportedFunction) -> HypothesisReport:
    """Suitability and the smoothing hypothesis V(f) containing Sing(X).

    Suitability: the support meets every 2-dimensional face of the dual
    cone, i.e. pairs to zero with every ray of sigma.  Smoothing: no support
    point lies on the dual face of a non-regular face of sigma.
    """
    sigma = f.ambient
    missed = tuple(r for r in sigma.rays
                   if not any(vdot(m, r) == 0 for m in f.support))
    bad_faces = []
    for face in cone_faces(sigma):
        if cone_dim(face) < 2 or is_regular(face):
            continue
        offending = tuple(m for m in f.support
                          if all(vdot(m, r) == 0 for r in face.rays))
        if offending:
            bad_faces.append((face.rays, offending))
    return HypothesisReport(
        suitable=not missed,
        smoothing_ok=not bad_faces,
        suitability_violations=missed,
        smoothing_violations=tuple(bad_faces),
    )


# -- Newton-nondegeneracy -----------------------------------------------------

@dataclass(frozen=True)
class FaceVerdict:
    points: Tuple[Coords, ...]
    dim: int
    verdict: str  # "nondegenerate" | "degenerate" | "assumed-generic"


def compact_faces(lnp: NewtonPolyhedron) -> List[PolyFace]:
    """All compact faces, one per normal-fan cone of codimension >= 1."""
    fan = normal_fan(lnp)
    faces = {}
    for c in fan.cones:
        if cone_dim(c) == 0:
            continue
        pf = face_for_cone(lnp, c)
        if pf.compact:
            faces.setdefault(pf.points, pf)
    return [faces[k] for k in sorted(faces)]


def check_nnd(f: SupportedFunction) -> List[FaceVerdict]:
    """Per compact face: is the truncation smooth on the torus?

    Without explicit coefficients every face is reported "assumed-generic"
    (generic coefficient choices are nondegenerate, and the graph pipeline
    only consumes the polyhedron).
    """
    lnp = polyhedron_of(f)
    out = []
    for face in compact_faces(lnp):
        if f.coefficients is None:
            out.append(FaceVerdict(face.points, face.dim, "assumed-generic"))
            continue
        coeffs = {}
        for p in face.points:
            if p not in f.coefficients:
                raise InputError("malformed", f"missing coefficient for {p}")
            coeffs[p] = f.coefficients[p]
        good = _face_nondegenerate(face, coeffs)
        out.append(FaceVerdict(face.points, face.dim,
                               "nondegenerate" if good else "degenerate"))
    return out


def _sympy_coeff(c: Coeff):
    import sympy

    re, im = c
    val = sympy.Rational(re.numerator, re.denominator)
    if im != 0:
        val = val + sympy.I * sympy.Rational(im.numerator, im.denominator)
    return val


def _face_nondegenerate(face: PolyFace, coeffs: Dict[Coords, Coeff]) -> bool:
    if face.dim == 0:
        return True
    import sympy

    if face.dim == 1:
        lo, _ = _segment_endpoints(face.points)
        d = None
        for p in face.points:
            if p != lo:
                d = vsub(p, lo)
                break
        assert d is not None
        g = integral_length(d)
        step = (d[0] // g, d[1] // g, d[2] // g)
        t = sympy.Symbol("t")
        # parameter of each point along the primitive edge direction
        idx = next(i for i in range(3) if step[i] != 0)
        poly = sum(_sympy_coeff(coeffs[p]) * t ** ((p[idx] - lo[idx]) // step[idx])
                   for p in face.points)
        poly = sympy.Poly(sympy.expand(poly), t)
        if poly.degree() == 0:
            return True
        return sympy.degree(sympy.gcd(poly, poly.diff(t)), t) == 0

    chart = face_chart(sorted(face.points))
    exps = {p: chart.to_chart(p) for p in face.points}
    xmin = min(e[0] for e in exps.values())
    ymin = min(e[1] for e in exps.values())
    x, y, w = sympy.symbols("x y w")
    poly = sum(_sympy_coeff(coeffs[p]) * x ** (e[0] - xmin) * y ** (e[1] - ymin)
               for p, e in exps.items())
    poly = sympy.expand(poly)
    px = sympy.expand(sympy.diff(poly, x))
    py = sympy.expand(sympy.diff(poly, y))
    # singular torus points are solutions of the saturated system
    basis = sympy.groebner([poly, px, py, x * y * w - 1], x, y, w, order="grevlex")
    return list(basis.exprs) == [sympy.Integer(1)]


def heights_are_additive(lnp_a: NewtonPolyhedron, lnp_b: NewtonPolyhedron,
                         samples: Sequence[Coords]) -> bool:
    """h_v(f*g) = h_v(f) + h_v(g): Minkowski additivity of heights."""
    joint = make_polyhedron(lnp_a.ambient, [vsum((p, q)) for p in lnp_a.support
                                            for q in lnp_b.support])
    return all(height(joint, v) == height(lnp_a, v) + height(lnp_b, v)
               for v in samples)
