"""Plumbing-calculus reduction, graph invariants, and planarity.

The move set is the subset sufficient for this pipeline's outputs:
blow-downs of (+-1)-vertices, 0-chain absorption, 0-leaf splitting,
deletion of S^3 units, and sign normalisation by vertex reflections.
On graphs whose reduced form is a tree or a single cycle with all |e| >= 2
this agrees with the normal form; otherwise the result is a documented
best-effort reduction (never silently wrong: unsupported local shapes are
left in place).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InvariantError
from .graphs import Edge, PGVertex, PlumbGraph, plumb_graph


# -- elementary moves ----------------------------------------------------------

def blow_down(g: PlumbGraph, vid: int) -> PlumbGraph:
    """Remove a genus-0 vertex with Euler number +-1 and valence <= 2.

    Neighbour Euler numbers drop by the blown-down number; at valence 2 the
    two edges merge into one with sign -(s1*s2*e_v).
    """
    v = g.vertex(vid)
    inc = g.incident(vid)
    if v.genus != 0 or v.euler not in (1, -1) or g.valence(vid) > 2:
        raise ValueError("blow-down needs genus 0, Euler +-1, valence <= 2")
    if any(e.u == e.v for e in inc):
        raise ValueError("blow-down at a looped vertex is not supported")
    verts = {w.id: w for w in g.vertices if w.id != vid}
    edges = [e for e in g.edges if vid not in (e.u, e.v)]
    nbrs = [(e.v if e.u == vid else e.u, e.sign) for e in inc]
    for w, _ in nbrs:
        old = verts[w]
        verts[w] = PGVertex(old.id, old.euler - v.euler, old.genus)
    if len(nbrs) == 2:
        (w1, s1), (w2, s2) = nbrs
        sprod = (1 if s1 == "+" else -1) * (1 if s2 == "+" else -1) * v.euler
        edges.append(Edge(w1, w2, "-" if sprod > 0 else "+"))
    return plumb_graph(verts.values(), edges)


def zero_chain_absorb(g: PlumbGraph, vid: int) -> PlumbGraph:
    """Merge the two neighbours of a genus-0, Euler-0, valence-2 vertex.

    With edge signs s1, s2: when s1*s2 = -1 the absorbed side is reflected,
    flipping its remaining edge signs; Euler numbers and genera add.
    """
    v = g.vertex(vid)
    inc = g.incident(vid)
    if v.genus != 0 or v.euler != 0 or g.valence(vid) != 2 or len(inc) != 2:
        raise ValueError("0-chain absorption needs genus 0, e = 0, valence 2")
    (e1, e2) = inc
    w1 = e1.v if e1.u == vid else e1.u
    w2 = e2.v if e2.u == vid else e2.u
    if w1 == vid or w2 == vid or w1 == w2:
        raise ValueError("0-chain absorption onto one vertex is not supported")
    flip_w2 = (e1.sign != e2.sign)
    keep = min(w1, w2)
    a, b = g.vertex(w1), g.vertex(w2)
    merged = PGVertex(keep, a.euler + b.euler, a.genus + b.genus)
    verts = [w for w in g.vertices if w.id not in (vid, w1, w2)] + [merged]
    edges = []
    for e in g.edges:
        if vid in (e.u, e.v):
            continue
        sign = e.sign
        if flip_w2 and w2 in (e.u, e.v):
            u_, v_ = e.u, e.v
            flips = (1 if u_ == w2 else 0) + (1 if v_ == w2 else 0)
            if flips % 2:
                sign = "-" if sign == "+" else "+"
        u_ = keep if e.u in (w1, w2) else e.u
        v_ = keep if e.v in (w1, w2) else e.v
        edges.append(Edge(u_, v_, sign))
    return plumb_graph(verts, edges)


def zero_leaf_split(g: PlumbGraph, vid: int) -> PlumbGraph:
    """Absorb a genus-0, Euler-0 leaf together with its neighbour.

    The pair cancels; the neighbour's other edges are cut (connected-sum
    splitting) and its genus leaves one S^1 x S^2 unit per handle.
    """
    v = g.vertex(vid)
    inc = g.incident(vid)
    if v.genus != 0 or v.euler != 0 or g.valence(vid) != 1:
        raise ValueError("0-leaf splitting needs genus 0, e = 0, valence 1")
    e = inc[0]
    w = e.v if e.u == vid else e.u
    if w == vid:
        raise ValueError("looped 0-vertex is not supported")
    gw = g.vertex(w).genus
    verts = [x for x in g.vertices if x.id not in (vid, w)]
    edges = [e2 for e2 in g.edges if vid not in (e2.u, e2.v) and w not in (e2.u, e2.v)]
    next_id = (max((x.id for x in g.vertices), default=-1)) + 1
    for k in range(2 * gw):
        verts.append(PGVertex(next_id + k, 0, 0))
    return plumb_graph(verts, edges)


def _is_s3_unit(g: PlumbGraph, v: PGVertex) -> bool:
    return v.genus == 0 and abs(v.euler) == 1 and g.valence(v.id) == 0


# -- reduction to the normal-form subset ---------------------------------------

@dataclass(frozen=True)
class ReductionTrace:
    moves: Tuple[Tuple, ...]  # ("move-name", vertex-id) plus final markers


def replay(g: PlumbGraph, trace: ReductionTrace) -> PlumbGraph:
    for move in trace.moves:
        name = move[0]
        if name == "s3":
            v = g.vertex(move[1])
            g = plumb_graph([x for x in g.vertices if x.id != move[1]], g.edges)
        elif name == "blow_down":
            g = blow_down(g, move[1])
        elif name == "zero_chain":
            g = zero_chain_absorb(g, move[1])
        elif name == "zero_leaf":
            g = zero_leaf_split(g, move[1])
        elif name == "normalize":
            g = normalize_signs(g)
        elif name == "relabel":
            g = relabel(g)
        else:
            raise ValueError(f"unknown move {name!r}")
    return g


def _find_site(g: PlumbGraph) -> Optional[Tuple[str, int]]:
    for v in g.vertices:
        if _is_s3_unit(g, v):
            return ("s3", v.id)
    for v in g.vertices:
        if (v.genus == 0 and v.euler in (1, -1) and g.valence(v.id) <= 2
                and not any(e.u == e.v for e in g.incident(v.id))):
            return ("blow_down", v.id)
    for v in g.vertices:
        if v.genus == 0 and v.euler == 0 and g.valence(v.id) == 2:
            inc = g.incident(v.id)
            if len(inc) == 2:
                ws = [e.v if e.u == v.id else e.u for e in inc]
                if v.id not in ws and ws[0] != ws[1]:
                    return ("zero_chain", v.id)
    for v in g.vertices:
        if v.genus == 0 and v.euler == 0 and g.valence(v.id) == 1:
            e = g.incident(v.id)[0]
            if e.u != e.v:
                return ("zero_leaf", v.id)
    return None


def reduce_graph(g: PlumbGraph) -> Tuple[PlumbGraph, ReductionTrace]:
    """Apply the move set at the first eligible site until a fixed point.

    Site order is by canonical vertex id, move priority fixed, so traces,
    outputs and re-runs are identical.
    """
    moves: List[Tuple] = []
    cur = g
    while True:
        site = _find_site(cur)
        if site is None:
            break
        name, vid = site
        moves.append(site)
        if name == "s3":
            cur = plumb_graph([x for x in cur.vertices if x.id != vid], cur.edges)
        elif name == "blow_down":
            cur = blow_down(cur, vid)
        elif name == "zero_chain":
            cur = zero_chain_absorb(cur, vid)
        else:
            cur = zero_leaf_split(cur, vid)
    cur = normalize_signs(cur)
    moves.append(("normalize",))
    cur = relabel(cur)
    moves.append(("relabel",))
    return cur, ReductionTrace(tuple(moves))


def normalize_signs(g: PlumbGraph) -> PlumbGraph:
    """Canonical gauge: vertex reflections making spanning-tree edges '+'.

    BFS from the least vertex of each component; loops are gauge-invariant
    and left alone.  On trees this makes every sign '+'.
    """
    flips: Dict[int, int] = {}
    adj: Dict[int, List[Tuple[int, str]]] = {v.id: [] for v in g.vertices}
    for e in g.edges:
        if e.u != e.v:
            adj[e.u].append((e.v, e.sign))
            adj[e.v].append((e.u, e.sign))
    for root in sorted(adj):
        if root in flips:
            continue
        flips[root] = 1
        queue = [root]
        while queue:
            cur = queue.pop(0)
            for nxt, sign in sorted(adj[cur]):
                if nxt in flips:
                    continue
                s = 1 if sign == "+" else -1
                flips[nxt] = flips[cur] * s
                queue.append(nxt)
    edges = []
    for e in g.edges:
        if e.u == e.v:
            edges.append(e)
            continue
        s = (1 if e.sign == "+" else -1) * flips[e.u] * flips[e.v]
        edges.append(Edge(e.u, e.v, "+" if s > 0 else "-"))
    return plumb_graph(g.vertices, edges)


def relabel(g: PlumbGraph) -> PlumbGraph:
    order = {v.id: k for k, v in enumerate(sorted(g.vertices, key=lambda v: v.id))}
    verts = [PGVertex(order[v.id], v.euler, v.genus) for v in g.vertices]
    edges = [Edge(order[e.u], order[e.v], e.sign) for e in g.edges]
    return plumb_graph(verts, edges)


# -- invariants ----------------------------------------------------------------

def intersection_matrix(g: PlumbGraph) -> List[List[int]]:
    ids = g.vertex_ids()
    pos = {vid: k for k, vid in enumerate(ids)}
    n = len(ids)
    mat = [[0] * n for _ in range(n)]
    for v in g.vertices:
        mat[pos[v.id]][pos[v.id]] = v.euler
    for e in g.edges:
        s = 1 if e.sign == "+" else -1
        if e.u == e.v:
            mat[pos[e.u]][pos[e.u]] += 2 * s
        else:
            mat[pos[e.u]][pos[e.v]] += s
            mat[pos[e.v]][pos[e.u]] += s
    return mat


def det_int(mat: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant over the integers."""
    n = len(mat)
    if n == 0:
        return 1
    a = [list(row) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_invariants(mat: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero elementary divisors of an integer matrix."""
    a = [list(row) for row in mat]
    n = len(a)
    m = len(a[0]) if a else 0
    out = []
    top = 0
    while top < min(n, m):
        # find the smallest nonzero pivot
        piv = None
        for i in range(top, n):
            for j in range(top, m):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        a[top], a[i0] = a[i0], a[top]
        for row in a:
            row[top], row[j0] = row[j0], row[top]
        done = True
        for i in range(top + 1, n):
            q = a[i][top] // a[top][top]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[top])]
            if a[i][top]:
                done = False
        for j in range(top + 1, m):
            q = a[top][j] // a[top][top]
            if q:
                for row in a:
                    row[j] -= q * row[top]
            if a[top][j]:
                done = False
        if done:
            out.append(abs(a[top][top]))
            top += 1
    out = [d for d in out if d]
    # enforce the divisibility chain d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for i in range(len(out)):
            for j in range(i + 1, len(out)):
                if out[j] % out[i]:
                    g = gcd(out[i], out[j])
                    out[i], out[j] = g, out[i] * out[j] // g
                    changed = True
    return sorted(out)


@dataclass(frozen=True)
class GraphInvariants:
    matrix: Tuple[Tuple[int, ...], ...]
    det: int
    corank: int
    h1_rank: Optional[int]  # only for +-edge forests without loops
    torsion: Optional[Tuple[int, ...]]
    supported: bool
    note: str = ""


def invariants(g: PlumbGraph) -> GraphInvariants:
    mat = intersection_matrix(g)
    d = det_int(mat)
    divisors = smith_invariants(mat)
    corank = len(mat) - len(divisors)
    plus_forest = all(e.sign == "+" for e in g.edges) and not _graph_has_cycle(g)
    if plus_forest:
        rank = corank + 2 * sum(v.genus for v in g.vertices)
        torsion = tuple(x for x in divisors if x > 1)
        return GraphInvariants(tuple(map(tuple, mat)), d, corank, rank, torsion, True)
    return GraphInvariants(tuple(map(tuple, mat)), d, corank, None, None, False,
                           note="H1 reported only for plus-edge forests")


def _graph_has_cycle(g: PlumbGraph) -> bool:
    parent = {v.id: v.id for v in g.vertices}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in g.edges:
        if e.u == e.v:
            return True
        ru, rv = find(e.u), find(e.v)
        if ru == rv:
            return True
        parent[ru] = rv
    return False


def is_negative_definite(mat: Sequence[Sequence[int]]) -> bool:
    """Sylvester test on the exact leading principal minors."""
    n = len(mat)
    for k in range(1, n + 1):
        minor = det_int([row[:k] for row in mat[:k]])
        if (-1) ** k * minor <= 0:
            return False
    return n > 0


def is_planar(g: PlumbGraph) -> bool:
    """Planarity of the underlying multigraph (loops and multi-edges are
    immaterial, so the simple graph decides)."""
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(g.vertex_ids())
    G.add_edges_from((e.u, e.v) for e in g.edges if e.u != e.v)
    ok, _ = nx.check_planarity(G)
    return ok


# -- a lens-space oracle for chains (test support) ------------------------------

def lens_class(chain_eulers: Sequence[int]) -> Tuple[int, int]:
    """Canonical (p, q) of the lens space of a plus-edge chain of genus-0
    vertices, from the negative-continued-fraction value of the chain."""
    p, q = 1, 0
    for e in reversed(list(chain_eulers)):
        p, q = e * p - q, p
    if p == 0:
        return (0, 1)
    if p < 0:
        p, q = -p, -q
    q %= p
    if gcd(p, q) != 1:
        raise InvariantError("chain does not represent a lens space")
    if q == 0:
        return (p, 0) if p != 1 else (1, 0)
    qinv = pow(q, -1, p)
    return (p, min(q, qinv))
