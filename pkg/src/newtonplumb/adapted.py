"""The fan tower: common fan -> boundary-regularised fan -> adapted fan.

The adapted fan is where the curve configuration becomes readable: every
cutting cone, every pertinent 1- and 2-cone, and every 3-cone touching one
of those must be regular.  The paper's refinement choice here is explicitly
non-canonical; we pin a deterministic strategy (documented per operation)
so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .cones import (
    Cone,
    Fan,
    cone_dim,
    cone_faces,
    cone_index,
    common_refinement,
    fan_from_maximal,
    is_regular,
    make_cone,
    minimal_containing_cone,
    minimal_containing_face,
    pull_triangulate,
    relint_point,
    stellar_subdivide,
    validate_fan,
)
from .errors import BudgetError, InvariantError
from .lattice import (
    Coords,
    ZERO,
    direction_chart,
    primitive,
    vadd,
    vdot,
    vscale,
    vsum,
)
from .newton import NewtonPolyhedron, face_for_cone, height, normal_fan

DEFAULT_BUDGET = 10_000


def build_common_fan(lnp_f: NewtonPolyhedron, lnp_g: NewtonPolyhedron,
                     check: str = "light") -> Fan:
    """The fan of the product germ: minimal common refinement of both normal fans."""
    if lnp_f.ambient != lnp_g.ambient:
        raise ValueError("polyhedra live over different cones")
    return common_refinement(normal_fan(lnp_f), normal_fan(lnp_g), check=check)


# -- 2D regularisation of walls ----------------------------------------------

def _det2(u: Tuple[int, int], v: Tuple[int, int]) -> int:
    return u[0] * v[1] - u[1] * v[0]


def hj_subdivision_2d(u: Tuple[int, int], v: Tuple[int, int]) -> List[Tuple[int, int]]:
    """Rays of the minimal regular subdivision of the 2D cone <u, v>, ordered
    from the u side to the v side; empty when the cone is already regular.

    Each step inserts the unique primitive w with det(u, w) = 1 closest to v,
    which is the hull-boundary neighbour of u.
    """
    from .lattice import egcd

    d = _det2(u, v)
    if d < 0:
        raise ValueError("orient the cone so det(u, v) > 0")
    out: List[Tuple[int, int]] = []
    while _det2(u, v) > 1:
        g, x, y = egcd(u[0], u[1])
        if g != 1:
            raise ValueError("rays must be primitive")
        w0 = (-y, x)  # det(u, w0) = 1
        big = _det2(u, v)
        c = _det2(w0, v)
        t = -(c // big)
        w = (w0[0] + t * u[0], w0[1] + t * u[1])
        if _det2(w, v) == 0:
            raise InvariantError("HJ subdivision hit the far ray")
        out.append(w)
        u = w
    return out


def _wall_plane_chart(wall: Cone):
    from .lattice import UnimodularChart2D, kernel_basis, vcross

    r1, r2 = wall.rays
    normal = primitive(vcross(r1, r2))
    return UnimodularChart2D(ZERO, kernel_basis(normal))


def regularize_wall(wall: Cone) -> List[Coords]:
    """New primitive rays of the canonical minimal regular subdivision of a
    2-cone (in its saturated plane lattice), ordered from wall.rays[0] to
    wall.rays[1]."""
    chart = _wall_plane_chart(wall)
    u2 = chart.to_chart(wall.rays[0])
    v2 = chart.to_chart(wall.rays[1])
    flip = _det2(u2, v2) < 0
    if flip:
        u2 = (u2[0], -u2[1])
        v2 = (v2[0], -v2[1])
    inserted = hj_subdivision_2d(u2, v2)
    out = []
    for w in inserted:
        w3 = chart.from_chart((w[0], -w[1]) if flip else w)
        out.append(primitive(w3))
    return out


# -- re-closing 3-cones whose walls were subdivided ----------------------------

def _boundary_cycle(cell: Cone) -> List[Coords]:
    """Extremal rays of a 3-cone in cyclic order around the cone."""
    walls = [f for f in cone_faces(cell) if cone_dim(f) == 2]
    nbrs: Dict[Coords, List[Coords]] = {r: [] for r in cell.rays}
    for w in walls:
        a, b = w.rays
        nbrs[a].append(b)
        nbrs[b].append(a)
    start = cell.rays[0]
    cycle = [start]
    prev: Optional[Coords] = None
    cur = start
    while True:
        nxt = sorted(n for n in nbrs[cur] if n != prev)[0]
        if nxt == start:
            break
        cycle.append(nxt)
        prev, cur = cur, nxt
    if len(cycle) != len(cell.rays):
        raise InvariantError("boundary walk did not close into a cycle")
    return cycle


def _reclose_cell(cell: Cone, insertions: Dict[Cone, List[Coords]]) -> List[Cone]:
    """Triangulate a 3-cone compatibly with subdivisions of its walls.

    Pulls from the lexicographically least extremal ray whose two incident
    walls are untouched; if every ray touches a subdivided wall, falls back
    to a central ray (the primitive sum of the extremal rays), which always
    yields a valid fan at the cost of one extra interior divisor.
    """
    cycle = _boundary_cycle(cell)
    n = len(cycle)
    full: List[Coords] = []
    touched = [False] * n
    for i in range(n):
        a, b = cycle[i], cycle[(i + 1) % n]
        wall = Cone(tuple(sorted((a, b))), cell.side)
        ins = insertions.get(wall, [])
        if ins and (a, b) != wall.rays:  # stored order is rays[0] -> rays[1]
            ins = list(reversed(ins))
        full.append(a)
        if ins:
            touched[i] = True
        full.extend(ins)

    apex = None
    for i, r in enumerate(cycle):
        if not touched[i] and not touched[(i - 1) % n]:
            if apex is None or r < apex:
                apex = r
    m = len(full)
    pieces = []
    if apex is not None:
        k = full.index(apex)
        rot = full[k:] + full[:k]
        for i in range(1, m - 1):
            pieces.append(make_cone((rot[0], rot[i], rot[i + 1]), cell.side))
    else:
        center = primitive(vsum(cell.rays))
        for i in range(m):
            pieces.append(make_cone((center, full[i], full[(i + 1) % m]), cell.side))
    return pieces


def regularize_boundary_2cones(fbar: Fan, fan_f: Fan, check: str = "light") -> Fan:
    """Replace the 2-cones of fbar lying inside 2-cones of the f-fan by their
    canonical minimal regular subdivision, re-closing the adjacent 3-cones.

    Only walls whose relative interior meets the interior of the support are
    subdivided: those are the ones carrying points of the compact curve
    configuration.  Walls inside the boundary faces correspond to strata the
    configuration never visits, and subdividing them would only add
    spurious exceptional components.
    """
    sigma = fbar.support
    insertions: Dict[Cone, List[Coords]] = {}
    for wall in fbar.cones_of_dim(2):
        if cone_dim(minimal_containing_cone(wall, fan_f)) != 2:
            continue
        if minimal_containing_face(sigma, relint_point(wall)) != sigma:
            continue
        ins = regularize_wall(wall)
        if ins:
            insertions[wall] = ins
    if not insertions:
        return fbar
    new_max: List[Cone] = []
    for cell in fbar.maximal:
        if any(f in insertions for f in cone_faces(cell) if cone_dim(f) == 2):
            new_max.extend(_reclose_cell(cell, insertions))
        else:
            new_max.append(cell)
    return fan_from_maximal(new_max, fbar.support, check=check)


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class RayData:
    ray: Coords
    mcf_dim: int  # dimension of the minimal containing face of sigma
    interior: bool
    h_f: int
    h_g: int
    delta_dim: int
    pertinent: bool


@dataclass(frozen=True)
class WallData:
    cone: Cone
    interior: bool
    cutting: bool
    boundary_ray: Optional[Coords]  # tau_1 of a cutting cone
    interior_ray: Optional[Coords]  # tau_2 of a cutting cone
    delta_dim: int
    pertinent: bool


@dataclass(frozen=True)
class ClassifiedFan:
    fan: Fan
    sigma: Cone
    ray_data: Dict[Coords, RayData]
    wall_data: Dict[Cone, WallData]

    @property
    def cutting_cones(self) -> List[Cone]:
        return sorted((c for c, d in self.wall_data.items() if d.cutting),
                      key=lambda c: c.rays)

    @property
    def pertinent_rays(self) -> List[Coords]:
        return sorted(r for r, d in self.ray_data.items() if d.pertinent)


def _classify(fan: Fan, sigma: Cone, lnp_f: NewtonPolyhedron,
              lnp_g: NewtonPolyhedron) -> ClassifiedFan:
    ray_data: Dict[Coords, RayData] = {}
    for r in fan.rays():
        face = minimal_containing_face(sigma, r)
        interior = face == sigma
        delta = face_for_cone(lnp_f, Cone((r,), sigma.side))
        ray_data[r] = RayData(
            ray=r,
            mcf_dim=cone_dim(face),
            interior=interior,
            h_f=height(lnp_f, r),
            h_g=height(lnp_g, r),
            delta_dim=delta.dim,
            pertinent=interior and delta.dim >= 1,
        )
    wall_data: Dict[Cone, WallData] = {}
    for w in fan.cones_of_dim(2):
        mcf = minimal_containing_face(sigma, relint_point(w))
        interior = mcf == sigma
        r1, r2 = w.rays
        d1, d2 = ray_data[r1], ray_data[r2]
        cutting = False
        bray = iray = None
        if d1.interior and d2.mcf_dim == 2:
            cutting, iray, bray = True, r1, r2
        elif d2.interior and d1.mcf_dim == 2:
            cutting, iray, bray = True, r2, r1
        delta = face_for_cone(lnp_f, w)
        wall_data[w] = WallData(
            cone=w,
            interior=interior,
            cutting=cutting,
            boundary_ray=bray,
            interior_ray=iray,
            delta_dim=delta.dim,
            pertinent=interior and delta.dim >= 1,
        )
    return ClassifiedFan(fan=fan, sigma=sigma, ray_data=ray_data, wall_data=wall_data)


def _faces_under_vf(sigma: Cone, lnp_f: NewtonPolyhedron) -> List[Cone]:
    """2-faces of sigma whose 1-dimensional orbit lies inside V(f): exactly
    those whose dual edge carries no support point (the height is then
    non-linear or positive on the face)."""
    out = []
    for face in cone_faces(sigma):
        if cone_dim(face) != 2:
            continue
        if not any(all(vdot(m, r) == 0 for r in face.rays) for m in lnp_f.support):
            out.append(face)
    return out


def _audit_boundary_rays(fan: Fan, sigma: Cone, lnp_f: NewtonPolyhedron) -> None:
    allowed = set(_faces_under_vf(sigma, lnp_f))
    for r in fan.rays():
        if r in sigma.rays:
            continue
        face = minimal_containing_face(sigma, r)
        if cone_dim(face) == 2 and face not in allowed:
            raise InvariantError(
                f"inserted ray {r} modifies a 2-face of sigma outside V(f)")


# -- the adapted fan ----------------------------------------------------------

def _interior_hilbert_points_2d(wall: Cone) -> List[Coords]:
    """Hilbert basis elements interior to a singular 2-cone (its HJ rays)."""
    return regularize_wall(wall)


def _interior_hilbert_points_3d(cell: Cone) -> List[Coords]:
    from .semigroup import _parallelepiped_points

    pts = []
    walls = [f for f in cone_faces(cell) if cone_dim(f) == 2]
    for m in _parallelepiped_points(*cell.rays):
        if m == ZERO:
            continue
        if any(w.contains(m) for w in walls):
            continue
        pts.append(m)
    if not pts:
        raise InvariantError(
            f"singular simplicial cone {cell.rays} has no interior lattice point "
            "below the parallelepiped (walls must be regularised first)")
    # keep only irreducible ones; minimality keeps determinants small
    out = []
    for p in pts:
        if not any(q != p and cell.contains((p[0] - q[0], p[1] - q[1], p[2] - q[2]))
                   for q in pts):
            out.append(p)
    return sorted(out)


def _max_new_index(fan: Fan, ray: Coords) -> int:
    worst = 1
    for cell in fan.maximal:
        if not cell.contains(ray):
            continue
        for f in cone_faces(cell):
            if cone_dim(f) == 2 and not f.contains(ray):
                worst = max(worst, abs(_index_of(f.rays + (ray,))))
    return worst


def _index_of(rays: Tuple[Coords, ...]) -> int:
    from .lattice import det3

    return det3(rays[0], rays[1], rays[2])


def _choose_stellar_point(fan: Fan, candidates: Sequence[Coords]) -> Coords:
    best = None
    best_key = None
    for p in candidates:
        key = (_max_new_index(fan, p), p)
        if best_key is None or key < best_key:
            best, best_key = p, key
    assert best is not None
    return best


def _resolution_step(fan: Fan, targets: List[Cone]) -> Fan:
    t = targets[0]
    if cone_dim(t) == 2:
        point = _choose_stellar_point(fan, _interior_hilbert_points_2d(t))
        return stellar_subdivide(fan, point)
    # 3-dimensional target
    if len(t.rays) > 3:
        pieces = pull_triangulate(t, t.rays[0])
        new_max = [c for c in fan.maximal if c != t] + pieces
        return fan_from_maximal(new_max, fan.support, check="light")
    singular_walls = sorted((f for f in cone_faces(t)
                             if cone_dim(f) == 2 and not is_regular(f)),
                            key=lambda c: c.rays)
    if singular_walls:
        point = _choose_stellar_point(
            fan, _interior_hilbert_points_2d(singular_walls[0]))
        return stellar_subdivide(fan, point)
    point = _choose_stellar_point(fan, _interior_hilbert_points_3d(t))
    return stellar_subdivide(fan, point)


def _resolution_targets(fan: Fan, sigma: Cone, lnp_f: NewtonPolyhedron) -> List[Cone]:
    marked: List[Cone] = []
    ray_face: Dict[Coords, Cone] = {r: minimal_containing_face(sigma, r)
                                    for r in fan.rays()}
    for w in fan.cones_of_dim(2):
        r1, r2 = w.rays
        f1, f2 = ray_face[r1], ray_face[r2]
        cutting = ((f1 == sigma and cone_dim(f2) == 2)
                   or (f2 == sigma and cone_dim(f1) == 2))
        if cutting:
            marked.append(w)
            continue
        interior = minimal_containing_face(sigma, relint_point(w)) == sigma
        if interior and face_for_cone(lnp_f, w).dim >= 1:
            marked.append(w)
    pertinent_rays = [r for r, face in ray_face.items()
                      if face == sigma
                      and face_for_cone(lnp_f, Cone((r,), sigma.side)).dim >= 1]
    marked_set = set(marked)
    cells: List[Cone] = []
    for cell in fan.maximal:
        faces = set(cone_faces(cell))
        if any(m in faces for m in marked_set) or \
           any(Cone((r,), sigma.side) in faces for r in pertinent_rays):
            cells.append(cell)
    bad: List[Cone] = [c for c in marked if not is_regular(c)]
    bad.extend(c for c in cells if not is_regular(c))
    bad.sort(key=lambda c: c.sort_key())
    return bad


def build_adapted_fan(fhat: Fan, lnp_f: NewtonPolyhedron, lnp_g: NewtonPolyhedron,
                      budget: int = DEFAULT_BUDGET, check: str = "light") -> ClassifiedFan:
    """Resolve every cutting/pertinent cone and their ambient 3-cones.

    Deterministic strategy: lowest-dimensional offender first (canonical
    order); non-simplicial cells are pull-triangulated from their least ray;
    singular walls go before their cells; stellar points are Hilbert-basis
    elements interior to the offender, minimising the worst new multiplicity
    with lexicographic tie-break.  A step budget guards termination.
    """
    sigma = fhat.support
    fan = fhat
    steps = 0
    while True:
        targets = _resolution_targets(fan, sigma, lnp_f)
        if not targets:
            break
        steps += 1
        if steps > budget:
            raise BudgetError(f"adapted-fan resolution exceeded {budget} steps")
        fan = _resolution_step(fan, targets)
    validate_fan(fan, full=(check == "full"))
    _audit_boundary_rays(fan, sigma, lnp_f)
    cf = _classify(fan, sigma, lnp_f, lnp_g)
    _audit_classified(cf)
    return cf


def _audit_classified(cf: ClassifiedFan) -> None:
    """The adaptedness surrogate: regularity along the curve configuration."""
    for w, d in cf.wall_data.items():
        if (d.cutting or d.pertinent) and not is_regular(w):
            raise InvariantError(f"cutting/pertinent cone {w.rays} is not regular")
    marked = {w for w, d in cf.wall_data.items() if d.cutting or d.pertinent}
    prays = {r for r, d in cf.ray_data.items() if d.pertinent}
    for cell in cf.fan.maximal:
        faces = set(cone_faces(cell))
        touches = any(m in faces for m in marked) or \
            any(Cone((r,), cf.sigma.side) in faces for r in prays)
        if touches and not is_regular(cell):
            raise InvariantError(f"3-cone {cell.rays} along the configuration "
                                 "is not regular")
