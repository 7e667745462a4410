"""Instance-level brute-force cross-checks backing the `oracle` subcommand.

Each check recomputes a pipeline quantity by an independent route
(enumeration, back-substitution, double evaluation) and compares.  The
checks run on the actual instance and its intermediate artifacts.
"""

from __future__ import annotations

import random
from typing import Iterable, List, Tuple

from .cones import Cone, cone_dim, dual_cone, make_cone, validate_fan
from .hjstring import cf_value, negative_cf
from .lattice import Coords, face_chart, integral_length, vadd, vdot, vscale, vsub, vsum
from .newton import (
    NewtonPolyhedron,
    _hull2d,
    boundary_points,
    face_for_cone,
    height,
    interior_points,
    lattice_measures,
    mixed_volume_2d,
    minkowski_sum,
    polygon_volume,
    compact_faces,
)
from .semigroup import is_generated_by

Check = Tuple[str, bool, str]


def _check(name: str, ok: bool, detail: str = "") -> Check:
    return (name, bool(ok), detail)


def check_dual_involution(sigma: Cone) -> Check:
    back = dual_cone(dual_cone(sigma))
    return _check("dual-involution", back.rays == sigma.rays, f"{sigma.rays}")


def check_height_linearity(lnp: NewtonPolyhedron, fan, rng: random.Random) -> Check:
    """h is additive inside each maximal cone and strictly superadditive
    across adjacent ones."""
    for cell in fan.maximal:
        rays = cell.rays
        for _ in range(10):
            u = vsum(vscale(rng.randint(0, 4), r) for r in rays)
            v = vsum(vscale(rng.randint(0, 4), r) for r in rays)
            if height(lnp, vadd(u, v)) != height(lnp, u) + height(lnp, v):
                return _check("height-linearity", False, f"inside {rays}")
    cells = list(fan.maximal)
    broken = 0
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            u = vsum(cells[i].rays)
            v = vsum(cells[j].rays)
            if height(lnp, vadd(u, v)) > height(lnp, u) + height(lnp, v):
                broken += 1
    return _check("height-linearity", True,
                  f"{len(cells)} cells, {broken} strict wall crossings")


def check_height_additivity(lnp_f: NewtonPolyhedron, lnp_g: NewtonPolyhedron,
                            samples: Iterable[Coords]) -> Check:
    from .newton import make_polyhedron

    pts = list(samples)
    product = make_polyhedron(
        lnp_f.ambient,
        [vadd(p, q) for p in lnp_f.support for q in lnp_g.support])
    bad = [v for v in pts
           if height(product, v) != height(lnp_f, v) + height(lnp_g, v)]
    return _check("height-additivity", not bad,
                  f"checked {len(pts)} rays" if not bad else f"fails at {bad[:3]}")


def check_measures_against_enumeration(lnp: NewtonPolyhedron) -> Check:
    """l by point counting on the segment, area by Pick's theorem."""
    for face in compact_faces(lnp):
        m = lattice_measures(face)
        if face.dim == 1:
            pts = sorted(face.points)
            chart_axis = vsub(pts[-1], pts[0])
            count = integral_length(chart_axis)
            if m.l != count:
                return _check("lattice-measures", False, f"length at {face.points}")
        if face.dim == 2:
            hull = _hull2d(face.polygon_chart_points())
            vol = m.vol
            i, b = interior_points(hull), boundary_points(hull)
            if vol != 2 * i + b - 2 or i != m.i:
                return _check("lattice-measures", False, f"Pick at {face.points}")
    return _check("lattice-measures", True, "all compact faces")


def check_mixed_volume_properties(lnp_f, lnp_g, rng: random.Random) -> Check:
    """Symmetry and the exact expansion Vol(P+Q) = Vol P + 2V + Vol Q."""
    polys = []
    for lnp in (lnp_f, lnp_g):
        for face in compact_faces(lnp):
            if face.dim == 2:
                polys.append(_hull2d(face.polygon_chart_points()))
    for _ in range(20):
        p = [(rng.randint(0, 6), rng.randint(0, 6)) for _ in range(rng.randint(1, 6))]
        polys.append(_hull2d(p))
    for i in range(len(polys)):
        for j in range(len(polys)):
            p, q = polys[i], polys[j]
            v1 = mixed_volume_2d(p, q)
            v2 = mixed_volume_2d(q, p)
            if v1 != v2:
                return _check("mixed-volume", False, "symmetry")
            if polygon_volume(minkowski_sum(p, q)) != \
                    polygon_volume(_hull2d(p)) + 2 * v1 + polygon_volume(_hull2d(q)):
                return _check("mixed-volume", False, "expansion")
    return _check("mixed-volume", True, f"{len(polys)}^2 pairs")


def check_hilbert_generation(hb, rng: random.Random) -> Check:
    cone = hb.cone
    box = 12
    count = 0
    for _ in range(300):
        p = (rng.randint(-box, box), rng.randint(-box, box), rng.randint(-box, box))
        if not cone.contains(p):
            continue
        count += 1
        if not is_generated_by(cone, hb.elements, p):
            return _check("hilbert-generation", False, f"{p} not generated")
    for e in hb.elements:
        others = tuple(x for x in hb.elements if x != e)
        if is_generated_by(cone, others, e):
            return _check("hilbert-generation", False, f"{e} is redundant")
    return _check("hilbert-generation", True, f"{count} sampled points")


def check_negative_cf() -> Check:
    from math import gcd

    for p in range(2, 51):
        for q in range(1, p):
            if gcd(p, q) != 1:
                continue
            ks = negative_cf(p, q)
            if any(k < 2 for k in ks) or cf_value(ks) != (p, q):
                return _check("negative-cf", False, f"{p}/{q}")
    return _check("negative-cf", True, "all p <= 50")


def check_string_closures(gmult) -> Check:
    for s in gmult.strings:
        s.check_closure()
        back = cf_value(list(s.ks))
        if s.ks and back != (s.delta, s.alpha):
            return _check("hj-closure", False, f"{s}")
    return _check("hj-closure", True, f"{len(gmult.strings)} strings")


def check_fan_validity(result) -> Check:
    for fan in (result.fan_f, result.fan_g, result.fbar, result.fhat,
                result.adapted.fan):
        validate_fan(fan, full=True)
    return _check("fan-validity", True, "5 fans, exhaustive pairwise")


def check_determinism(pi) -> Check:
    from .cli import run
    from .serialize import gplomb_to_dict, to_json

    a = to_json(gplomb_to_dict(run(pi).reduced, "reduced"))
    b = to_json(gplomb_to_dict(run(pi).reduced, "reduced"))
    return _check("determinism", a == b, f"{len(a)} bytes")


def check_reduce_idempotent(result) -> Check:
    from .calculus import reduce_graph, replay

    again, trace2 = reduce_graph(result.reduced)
    if again != result.reduced:
        return _check("reduce-idempotent", False, "second pass changed the graph")
    if replay(result.gplomb, result.trace) != result.reduced:
        return _check("reduce-idempotent", False, "trace replay mismatch")
    return _check("reduce-idempotent", True,
                  f"{len(result.trace.moves)} recorded moves")


def check_balance(result) -> Check:
    from .pipeline import check_balance as _cb

    _cb(result.gmult, result.gplomb)
    return _check("plumbing-balance", True, "termwise zero")


def run_instance_checks(pi) -> List[Check]:
    from .cli import run
    from .semigroup import hilbert_basis

    rng = random.Random(20260810)
    result = run(pi)
    sigma = result.func.ambient
    sample_rays = list(result.fbar.rays())
    checks = [
        check_dual_involution(sigma),
        check_height_linearity(result.lnp_f, result.fan_f, rng),
        check_height_additivity(result.lnp_f, result.lnp_g, sample_rays),
        check_measures_against_enumeration(result.lnp_f),
        check_measures_against_enumeration(result.lnp_g),
        check_mixed_volume_properties(result.lnp_f, result.lnp_g, rng),
        check_hilbert_generation(hilbert_basis(dual_cone(sigma)), rng),
        check_negative_cf(),
        check_string_closures(result.gmult),
        check_fan_validity(result),
        check_balance(result),
        check_reduce_idempotent(result),
        check_determinism(pi),
    ]
    return checks
