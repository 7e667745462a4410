"""Decorated graph types produced along the pipeline.

All three are plain immutable records; construction order is deterministic,
so serialised output is byte-stable.  Multi-edges are separate entries;
arrowheads are vertices flagged by kind and erased only at the plumbing
stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

EXCEPTIONAL = "exceptional"
STRICT = "strict"
ARROWHEAD = "arrowhead"
CHAIN = "chain"  # interior vertex of an inserted string


@dataclass(frozen=True)
class CCVertex:
    id: int
    kind: str  # exceptional | strict | arrowhead
    triple: Tuple[int, int, int]  # (m1; m2, n2)
    genus: int
    source: Tuple[Tuple[int, ...], ...]  # rays of the fan cone it came from
    component: int = 0  # index within a disconnected strict family


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    sign: str  # "+" or "-"

    def key(self):
        return (min(self.u, self.v), max(self.u, self.v), self.sign)


@dataclass(frozen=True)
class CurveConfigGraph:
    vertices: Tuple[CCVertex, ...]
    edges: Tuple[Edge, ...]

    def vertex(self, vid: int) -> CCVertex:
        return self.vertices[vid]

    def neighbors(self, vid: int) -> List[int]:
        out = []
        for e in self.edges:
            if e.u == vid:
                out.append(e.v)
            elif e.v == vid:
                out.append(e.u)
        return out


@dataclass(frozen=True)
class MGVertex:
    id: int
    kind: str  # exceptional | strict | arrowhead | chain
    mu: int
    genus: int
    origin: int  # id of the curve-configuration vertex it came from, -1 for chain


@dataclass(frozen=True)
class MultGraph:
    vertices: Tuple[MGVertex, ...]
    edges: Tuple[Edge, ...]
    strings: Tuple = ()  # HJString records, kept for audits

    def vertex(self, vid: int) -> MGVertex:
        return self.vertices[vid]


@dataclass(frozen=True)
class PGVertex:
    id: int
    euler: int
    genus: int


@dataclass(frozen=True)
class PlumbGraph:
    vertices: Tuple[PGVertex, ...]
    edges: Tuple[Edge, ...]

    def vertex_ids(self) -> List[int]:
        return [v.id for v in self.vertices]

    def vertex(self, vid: int) -> PGVertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def incident(self, vid: int) -> List[Edge]:
        return [e for e in self.edges if vid in (e.u, e.v)]

    def valence(self, vid: int) -> int:
        n = 0
        for e in self.edges:
            if e.u == vid:
                n += 1
            if e.v == vid:
                n += 1
        return n

    def with_vertices(self, vertices, edges) -> "PlumbGraph":
        vs = tuple(sorted(vertices, key=lambda v: v.id))
        es = tuple(sorted(edges, key=lambda e: e.key()))
        return PlumbGraph(vs, es)


def plumb_graph(vertices, edges) -> PlumbGraph:
    vs = tuple(sorted(vertices, key=lambda v: v.id))
    es = tuple(sorted(edges, key=lambda e: e.key()))
    ids = {v.id for v in vs}
    if len(ids) != len(vs):
        raise ValueError("duplicate vertex ids")
    for e in es:
        if e.u not in ids or e.v not in ids:
            raise ValueError("edge endpoint missing")
        if e.sign not in ("+", "-"):
            raise ValueError("bad edge sign")
    return PlumbGraph(vs, es)
