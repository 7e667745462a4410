"""From the adapted fan to the plumbing graph.

Three passes: read the decorated curve-configuration graph off the fan,
split vertices and insert Hirzebruch-Jung strings to get the multiplicity
graph, then convert multiplicities to self-intersections by the balance
equation and erase the arrowheads.
"""

from __future__ import annotations

from math import gcd
from typing import Dict, List, Optional, Tuple

from .adapted import ClassifiedFan
from .cones import Cone, cone_dim, cone_faces, is_regular
from .errors import InvariantError
from .graphs import (
    ARROWHEAD,
    CHAIN,
    CCVertex,
    CurveConfigGraph,
    Edge,
    EXCEPTIONAL,
    MGVertex,
    MultGraph,
    PGVertex,
    PlumbGraph,
    STRICT,
    plumb_graph,
)
from .hjstring import HJString, build_string
from .lattice import Coords, direction_chart, vsub
from .newton import (
    NewtonPolyhedron,
    face_for_cone,
    lattice_measures,
    mixed_volume_2d,
)


def _face_polygon(points: Tuple[Coords, ...], ray: Coords) -> List[Tuple[int, int]]:
    """Face points as 2D coordinates in the saturated lattice orthogonal to ray."""
    chart = direction_chart(ray)
    base = min(points)
    return [chart.to_chart(vsub(p, base)) for p in points]


def build_gcdt(cf: ClassifiedFan, lnp_f: NewtonPolyhedron,
               lnp_g: NewtonPolyhedron) -> CurveConfigGraph:
    """The decorated dual graph of the compact curve configuration."""
    vertices: List[CCVertex] = []
    edges: List[Edge] = []

    def add_vertex(kind, triple, genus, source, component=0) -> int:
        vid = len(vertices)
        vertices.append(CCVertex(vid, kind, triple, genus, source, component))
        return vid

    # exceptional curves: one rational vertex per cutting cone
    exc_of: Dict[Cone, int] = {}
    for w in cf.cutting_cones:
        d = cf.wall_data[w]
        assert d.boundary_ray is not None and d.interior_ray is not None
        m1 = cf.ray_data[d.boundary_ray].h_f
        m2 = cf.ray_data[d.interior_ray].h_f
        n2 = cf.ray_data[d.interior_ray].h_g
        exc_of[w] = add_vertex(EXCEPTIONAL, (m1, m2, n2), 0, w.rays)

    # strict-transform curves: one family per pertinent interior ray
    family_of: Dict[Coords, List[int]] = {}
    family_dim: Dict[Coords, int] = {}
    for ray in cf.pertinent_rays:
        rd = cf.ray_data[ray]
        face = face_for_cone(lnp_f, Cone((ray,), cf.sigma.side))
        if not face.compact:
            raise InvariantError(f"pertinent ray {ray} carries a non-compact face")
        meas = lattice_measures(face)
        triple = (1, rd.h_f, rd.h_g)
        family_dim[ray] = face.dim
        if face.dim == 2:
            family_of[ray] = [add_vertex(STRICT, triple, meas.i, (ray,))]
        else:
            family_of[ray] = [add_vertex(STRICT, triple, 0, (ray,), component=k)
                              for k in range(meas.l)]

    # exceptional-exceptional intersections: shared 3-cones; the sign says
    # whether the two curves lie on the same component of the f-divisor
    for cell in sorted(cf.fan.maximal, key=lambda c: c.rays):
        cutting_faces = [f for f in cone_faces(cell)
                         if cone_dim(f) == 2 and f in exc_of]
        for i in range(len(cutting_faces)):
            for j in range(i + 1, len(cutting_faces)):
                wi, wj = cutting_faces[i], cutting_faces[j]
                shared = set(wi.rays) & set(wj.rays)
                if len(shared) != 1:
                    raise InvariantError("cutting cones of a cell must share one ray")
                r = shared.pop()
                same_boundary = (cf.wall_data[wi].boundary_ray == r
                                 and cf.wall_data[wj].boundary_ray == r)
                edges.append(Edge(exc_of[wi], exc_of[wj],
                                  "+" if same_boundary else "-"))

    # exceptional-strict intersections along pertinent cutting cones
    for w in cf.cutting_cones:
        d = cf.wall_data[w]
        face = face_for_cone(lnp_f, w)
        if face.dim == 0:
            continue
        l_gamma = lattice_measures(face).l
        tau2 = d.interior_ray
        family = family_of.get(tau2)
        if family is None:
            raise InvariantError("pertinent cutting cone without a strict family")
        if family_dim[tau2] == 1:
            tau_face = face_for_cone(lnp_f, Cone((tau2,), cf.sigma.side))
            if lattice_measures(tau_face).l != l_gamma or face.points != tau_face.points:
                raise InvariantError("component pairing mismatch on a cutting cone")
            for vid in family:
                edges.append(Edge(exc_of[w], vid, "-"))
        else:
            for _ in range(l_gamma):
                edges.append(Edge(exc_of[w], family[0], "-"))

    # strict-strict intersections along pertinent interior 2-cones
    for w in sorted(cf.wall_data, key=lambda c: c.rays):
        d = cf.wall_data[w]
        if not d.pertinent or d.cutting:
            continue
        r1, r2 = w.rays
        if r1 not in family_of or r2 not in family_of:
            # one boundary ray: those crossings are not double points of the
            # configuration (the other divisor is not part of it)
            continue
        face = face_for_cone(lnp_f, w)
        l_gamma = lattice_measures(face).l
        fam1, fam2 = family_of[r1], family_of[r2]
        if family_dim[r1] == 1 and family_dim[r2] == 1:
            f1 = face_for_cone(lnp_f, Cone((r1,), cf.sigma.side))
            f2 = face_for_cone(lnp_f, Cone((r2,), cf.sigma.side))
            if not (f1.points == f2.points == face.points
                    and len(fam1) == len(fam2) == l_gamma):
                raise InvariantError("component pairing mismatch on a 2-cone")
            for k in range(l_gamma):
                edges.append(Edge(fam1[k], fam2[k], "+"))
        elif family_dim[r1] == 1:
            _attach_all(edges, fam1, fam2[0], l_gamma)
        elif family_dim[r2] == 1:
            _attach_all(edges, fam2, fam1[0], l_gamma)
        else:
            for _ in range(l_gamma):
                edges.append(Edge(fam1[0], fam2[0], "+"))

    # non-compact curves: arrowheads, V(tau) per strict family
    for ray in cf.pertinent_rays:
        face_f = face_for_cone(lnp_f, Cone((ray,), cf.sigma.side))
        face_g = face_for_cone(lnp_g, Cone((ray,), cf.sigma.side))
        if not face_g.compact:
            raise InvariantError("companion face on an interior ray must be compact")
        vol = mixed_volume_2d(_face_polygon(face_f.points, ray),
                              _face_polygon(face_g.points, ray))
        if vol == 0:
            continue
        family = family_of[ray]
        if family_dim[ray] == 1:
            if vol % len(family):
                raise InvariantError(
                    f"arrowhead count {vol} does not split over {len(family)} branches")
            per = vol // len(family)
        else:
            per = vol
        for vid in family:
            for _ in range(per):
                ah = add_vertex(ARROWHEAD, (1, 0, 1), 0, (ray,))
                edges.append(Edge(vid, ah, "+"))

    graph = CurveConfigGraph(tuple(vertices), tuple(edges))
    check_gcdt_invariants(graph)
    return graph


def _attach_all(edges: List[Edge], components: List[int], single: int, l_gamma: int):
    if len(components) != l_gamma:
        raise InvariantError("component count does not match the intersection count")
    for vid in components:
        edges.append(Edge(vid, single, "+"))


def check_gcdt_invariants(g: CurveConfigGraph) -> None:
    """The two sufficiency facts that make the graph self-contained."""
    for v in g.vertices:
        if v.genus > 0 and v.triple[0] != 1:
            raise InvariantError("positive-genus vertex with first multiplicity != 1")
    # exceptional-exceptional subgraph: disjoint chains
    exc = {v.id for v in g.vertices if v.kind == EXCEPTIONAL}
    deg = {v: 0 for v in exc}
    exc_edges = []
    for e in g.edges:
        if e.u in exc and e.v in exc:
            deg[e.u] += 1
            deg[e.v] += 1
            exc_edges.append((e.u, e.v))
    if any(d > 2 for d in deg.values()):
        raise InvariantError("exceptional subgraph has a vertex of degree > 2")
    if _has_cycle(exc, exc_edges):
        raise InvariantError("exceptional subgraph contains a cycle")
    # every cycle of the whole graph passes through a vertex with m1 = 1,
    # i.e. the m1 > 1 part is a forest
    heavy = {v.id for v in g.vertices if v.triple[0] != 1}
    heavy_edges = [(e.u, e.v) for e in g.edges if e.u in heavy and e.v in heavy]
    if _has_cycle(heavy, heavy_edges):
        raise InvariantError("a cycle avoids all multiplicity-1 vertices")


def _has_cycle(nodes, edge_list) -> bool:
    parent = {n: n for n in nodes}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edge_list:
        ru, rv = find(u), find(v)
        if ru == rv:
            return True
        parent[ru] = rv
    return False


# -- the multiplicity graph ---------------------------------------------------

def _neighbor_items(g: CurveConfigGraph, vid: int) -> List[Tuple[str, int]]:
    """(sign, m_i) per incident edge, with the shared-entry sanity checks."""
    v = g.vertex(vid)
    m1, m2, n2 = v.triple
    items = []
    for e in g.edges:
        if vid not in (e.u, e.v):
            continue
        other = g.vertex(e.v if e.u == vid else e.u)
        om1, om2, on2 = other.triple
        if e.sign == "+":
            if om1 != m1:
                raise InvariantError("plus edge endpoints disagree on m1")
            items.append(("+", om2))
        else:
            if (om2, on2) != (m2, n2):
                raise InvariantError("minus edge endpoints disagree on (m2, n2)")
            items.append(("-", om1))
    return items


def _split_data(g: CurveConfigGraph, vid: int) -> Tuple[int, int, int]:
    """(n_C, genus, mu) for the covering copies of one vertex."""
    v = g.vertex(vid)
    m1, m2, n2 = v.triple
    items = _neighbor_items(g, vid)
    # n_C = gcd of m1, m2 and all neighbour multiplicities
    n_c = 0
    for x in [m1, m2] + [mi for _, mi in items]:
        n_c = gcd(n_c, x)
    if n_c == 0:
        raise InvariantError("vertex with all multiplicities zero")
    g12 = gcd(m1, m2)
    rhs = (2 - 2 * v.genus - len(items)) * g12
    for _, mi in items:
        rhs += gcd(g12, mi)
    if rhs % n_c:
        raise InvariantError(f"genus equation has no integer solution at vertex {vid}")
    val = rhs // n_c  # = 2 - 2 g_C
    if (2 - val) % 2 or (2 - val) < 0:
        raise InvariantError(f"genus equation has no admissible solution at vertex {vid}")
    genus = (2 - val) // 2
    if (m1 * n2) % g12:
        raise InvariantError("mu is not integral")
    mu = m1 * n2 // g12
    if mu <= 0:
        raise InvariantError("nonpositive multiplicity")
    return n_c, genus, mu


def _edge_string_params(g: CurveConfigGraph, e: Edge):
    """(a, b, c, n1, n2, n3, d): Str parameters, u on the b side, v on the c side."""
    tu = g.vertex(e.u).triple
    tv = g.vertex(e.v).triple
    if e.sign == "+":
        shared = tu[0]
        mb, nb = tu[1], tu[2]
        mc, nc = tv[1], tv[2]
        d = gcd(gcd(shared, mb), mc)
        return (shared // d, mb // d, mc // d, 0, nb, nc, d)
    shared_m, shared_n = tu[1], tu[2]
    mb, mc = tu[0], tv[0]
    d = gcd(gcd(shared_m, mb), mc)
    return (shared_m // d, mb // d, mc // d, shared_n, 0, 0, d)


def build_gmult(g: CurveConfigGraph) -> MultGraph:
    """Vertex splitting and string insertion: the multiplicity graph."""
    vertices: List[MGVertex] = []
    edges: List[Edge] = []
    strings: List[HJString] = []
    copies: Dict[int, List[int]] = {}

    def new_vertex(kind, mu, genus, origin) -> int:
        vid = len(vertices)
        vertices.append(MGVertex(vid, kind, mu, genus, origin))
        return vid

    for v in g.vertices:
        n_c, genus, mu = _split_data(g, v.id)
        if v.kind == ARROWHEAD:
            if (n_c, genus, mu) != (1, 0, 1):
                raise InvariantError("arrowhead must stay a single unit vertex")
        copies[v.id] = [new_vertex(v.kind, mu, genus, v.id) for _ in range(n_c)]

    for e in sorted(g.edges, key=lambda e: e.key()):
        a, b, c, n1, n2, n3, d = _edge_string_params(g, e)
        s = build_string(a, b, c, n1, n2, n3, e.sign)
        strings.append(s)
        side_u, side_v = copies[e.u], copies[e.v]
        if d % len(side_u) or d % len(side_v):
            raise InvariantError("string count is not a multiple of the copy count")
        if s.mu_end != vertices[side_u[0]].mu or s.mu_start != vertices[side_v[0]].mu:
            raise InvariantError("string endpoint multiplicities disagree with vertices")
        for j in range(d):
            left = side_u[j % len(side_u)]
            right = side_v[j % len(side_v)]
            prev = right  # mu_0 end
            for mu_i in s.interior_multiplicities:
                nxt = new_vertex(CHAIN, mu_i, 0, -1)
                edges.append(Edge(prev, nxt, e.sign))
                prev = nxt
            edges.append(Edge(prev, left, e.sign))

    return MultGraph(tuple(vertices), tuple(sorted(edges, key=lambda e: e.key())),
                     tuple(strings))


# -- the plumbing graph -------------------------------------------------------

def build_gplomb(g: MultGraph) -> PlumbGraph:
    """Self-intersections from k*mu = -sum(eps_i mu_i); arrowheads erased."""
    arrows = {v.id for v in g.vertices if v.kind == ARROWHEAD}
    verts: List[PGVertex] = []
    for v in g.vertices:
        if v.id in arrows:
            continue
        total = 0
        for e in g.edges:
            if e.u == e.v:
                raise InvariantError("loops cannot appear before reduction")
            if v.id not in (e.u, e.v):
                continue
            other = g.vertex(e.v if e.u == v.id else e.u)
            total += (1 if e.sign == "+" else -1) * other.mu
        if total % v.mu:
            raise InvariantError(f"balance k*mu = -sum(eps mu) fails at vertex {v.id}")
        verts.append(PGVertex(v.id, -total // v.mu, v.genus))
    edges = [e for e in g.edges if e.u not in arrows and e.v not in arrows]
    out = plumb_graph(verts, edges)
    check_balance(g, out)
    return out


def check_balance(gm: MultGraph, gp: PlumbGraph) -> None:
    """Termwise zero: every vertex balance holds exactly, arrowheads included."""
    mus = {v.id: v.mu for v in gm.vertices}
    for pv in gp.vertices:
        s = pv.euler * mus[pv.id]
        for e in gm.edges:
            if pv.id not in (e.u, e.v):
                continue
            other = e.v if e.u == pv.id else e.u
            s += (1 if e.sign == "+" else -1) * mus[other]
        if s != 0:
            raise InvariantError(f"balance audit fails at vertex {pv.id}")
