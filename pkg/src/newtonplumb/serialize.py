"""Canonical JSON and DOT emission for all pipeline stages.

One consumer-facing contract for the three graph types:
{"stage": ..., "vertices": [...], "edges": [...], "decorations": ...};
fans carry rays/cones/classification instead of vertices/edges.  Output is
byte-stable across runs and platforms (sorted keys, fixed ordering).
"""

from __future__ import annotations

import json
from typing import Dict, List

from .adapted import ClassifiedFan
from .cones import Fan, cone_dim
from .graphs import ARROWHEAD, CurveConfigGraph, MultGraph, PlumbGraph


def to_json(data: Dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def fan_to_dict(cf: ClassifiedFan) -> Dict:
    fan = cf.fan
    cones = {}
    for d in (1, 2, 3):
        cones[str(d)] = [list(map(list, c.rays)) for c in fan.cones_of_dim(d)]
    rays = []
    for r in sorted(cf.ray_data):
        rd = cf.ray_data[r]
        rays.append({
            "ray": list(r),
            "containing_face_dim": rd.mcf_dim,
            "interior": rd.interior,
            "height_f": rd.h_f,
            "height_g": rd.h_g,
            "face_dim_f": rd.delta_dim,
            "pertinent": rd.pertinent,
        })
    walls = []
    for w in sorted(cf.wall_data, key=lambda c: c.rays):
        wd = cf.wall_data[w]
        walls.append({
            "rays": [list(r) for r in w.rays],
            "cutting": wd.cutting,
            "pertinent": wd.pertinent,
            "face_dim_f": wd.delta_dim,
        })
    return {"stage": "fan", "support": [list(r) for r in fan.support.rays],
            "cones": cones, "rays": rays, "walls": walls}


def gcdt_to_dict(g: CurveConfigGraph) -> Dict:
    return {
        "stage": "gcdt",
        "vertices": [{
            "id": v.id, "kind": v.kind, "triple": list(v.triple),
            "genus": v.genus, "component": v.component,
            "source": [list(r) for r in v.source],
        } for v in g.vertices],
        "edges": [{"u": e.u, "v": e.v, "sign": e.sign} for e in g.edges],
        "decorations": "triple = (m1; m2, n2), genus in brackets",
    }


def gmult_to_dict(g: MultGraph) -> Dict:
    return {
        "stage": "gmult",
        "vertices": [{"id": v.id, "kind": v.kind, "multiplicity": v.mu,
                      "genus": v.genus, "origin": v.origin} for v in g.vertices],
        "edges": [{"u": e.u, "v": e.v, "sign": e.sign} for e in g.edges],
        "decorations": "multiplicity of the companion pullback per vertex",
    }


def gplomb_to_dict(g: PlumbGraph, stage: str = "gplomb") -> Dict:
    return {
        "stage": stage,
        "vertices": [{"id": v.id, "euler": v.euler, "genus": v.genus}
                     for v in g.vertices],
        "edges": [{"u": e.u, "v": e.v, "sign": e.sign} for e in g.edges],
        "decorations": "euler number and genus per vertex",
    }


def _dot(lines: List[str]) -> str:
    return "graph {\n" + "\n".join("  " + ln for ln in lines) + "\n}\n"


def gcdt_to_dot(g: CurveConfigGraph) -> str:
    lines = []
    for v in g.vertices:
        label = f"({v.triple[0]};{v.triple[1]},{v.triple[2]}) [{v.genus}]"
        shape = ' shape=rarrow' if v.kind == ARROWHEAD else ""
        lines.append(f'v{v.id} [label="{label}"{shape}]')
    for e in g.edges:
        lines.append(f'v{e.u} -- v{e.v} [label="{e.sign}"]')
    return _dot(lines)


def gmult_to_dot(g: MultGraph) -> str:
    lines = []
    for v in g.vertices:
        shape = ' shape=rarrow' if v.kind == ARROWHEAD else ""
        lines.append(f'v{v.id} [label="{v.mu} [{v.genus}]"{shape}]')
    for e in g.edges:
        lines.append(f'v{e.u} -- v{e.v} [label="{e.sign}"]')
    return _dot(lines)


def gplomb_to_dot(g: PlumbGraph) -> str:
    lines = []
    for v in g.vertices:
        lines.append(f'v{v.id} [label="{v.euler} [{v.genus}]"]')
    for e in g.edges:
        lines.append(f'v{e.u} -- v{e.v} [label="{e.sign}"]')
    return _dot(lines)
