"""Input parsing, pipeline orchestration, and the command-line surface.

Input is a single JSON document:
{"cone_rays": [[..], ..],
 "support": [{"exponent": [..], "coefficient": ["p/q", "r/s"]?}, ..],
 "options": {"budget": int?}}

Subcommands: ``check`` (hypotheses + nondegeneracy), ``compute --stage
{fan|gcdt|gmult|gplomb|reduced} --emit {json|dot}``, ``oracle`` (instance
cross-checks).  Exit codes: 0 ok, 2 input/hypothesis failure, 3 internal
invariant failure, 4 budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .adapted import (
    ClassifiedFan,
    DEFAULT_BUDGET,
    build_adapted_fan,
    build_common_fan,
    regularize_boundary_2cones,
)
from .calculus import ReductionTrace, reduce_graph
from .cones import Cone, Fan, cone_dim, dual_cone, make_cone, minimal_containing_face
from .errors import BudgetError, InputError, InvariantError
from .graphs import CurveConfigGraph, MultGraph, PlumbGraph
from .lattice import ZERO
from .newton import (
    NewtonPolyhedron,
    SupportedFunction,
    check_hypotheses,
    check_nnd,
    normal_fan,
    polyhedron_of,
)
from .pipeline import build_gcdt, build_gmult, build_gplomb
from .semigroup import companion_polyhedron, hilbert_basis
from . import serialize


@dataclass(frozen=True)
class ProblemInput:
    cone_rays: Tuple[Tuple[int, int, int], ...]
    support: Tuple[Tuple[int, int, int], ...]
    coefficients: Optional[Dict[Tuple[int, int, int], Tuple[Fraction, Fraction]]]
    budget: int = DEFAULT_BUDGET


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError("malformed", f"bad rational {text!r}: {exc}") from exc


def parse_input(text: str) -> ProblemInput:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("malformed", f"input is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("malformed", "top-level JSON object expected")
    try:
        cone_rays = tuple(tuple(int(x) for x in ray) for ray in data["cone_rays"])
        raw_support = list(data["support"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("malformed", f"missing or bad field: {exc}") from exc
    if any(len(r) != 3 for r in cone_rays) or not cone_rays:
        raise InputError("malformed", "cone_rays must be nonempty integer triples")
    support = []
    coeffs = {}
    has_coeffs = False
    for item in raw_support:
        if isinstance(item, dict):
            try:
                exp = tuple(int(x) for x in item["exponent"])
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError("malformed", f"bad support entry {item!r}") from exc
            if "coefficient" in item and item["coefficient"] is not None:
                pair = item["coefficient"]
                if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                    raise InputError("malformed",
                                     f"coefficient must be a [re, im] pair: {item!r}")
                coeffs[exp] = (_parse_fraction(str(pair[0])),
                               _parse_fraction(str(pair[1])))
                has_coeffs = True
        else:
            try:
                exp = tuple(int(x) for x in item)
            except (TypeError, ValueError) as exc:
                raise InputError("malformed", f"bad support entry {item!r}") from exc
        if len(exp) != 3:
            raise InputError("malformed", "support exponents must be integer triples")
        support.append(exp)
    if not support:
        raise InputError("malformed", "empty support")
    options = data.get("options", {}) or {}
    budget = int(options.get("budget", DEFAULT_BUDGET))
    if has_coeffs:
        for exp in support:
            coeffs.setdefault(exp, (Fraction(1), Fraction(0)))
    return ProblemInput(cone_rays, tuple(support), coeffs if has_coeffs else None,
                        budget)


def _build_function(pi: ProblemInput) -> SupportedFunction:
    try:
        sigma = make_cone(pi.cone_rays, side="N")
    except ValueError as exc:
        raise InputError("cone-not-strongly-convex", str(exc)) from exc
    if cone_dim(sigma) != 3:
        raise InputError("cone-not-3d", "the cone must be 3-dimensional")
    if ZERO in pi.support:
        raise InputError("support-contains-origin",
                         "the origin in the support means f(0) != 0")
    return SupportedFunction(sigma, tuple(sorted(set(pi.support))), pi.coefficients)


def validate_input(pi: ProblemInput) -> SupportedFunction:
    """Hypothesis gate: suitability and the smoothing condition."""
    f = _build_function(pi)
    report = check_hypotheses(f)
    if not report.suitable:
        raise InputError("unsuitable",
                         "support misses the dual 2-faces of rays "
                         f"{[list(r) for r in report.suitability_violations]}")
    if not report.smoothing_ok:
        raise InputError("smoothing-violation",
                         "support meets the dual of a singular face: "
                         f"{report.smoothing_violations}")
    return f


@dataclass(frozen=True)
class PipelineResult:
    func: SupportedFunction
    lnp_f: NewtonPolyhedron
    lnp_g: NewtonPolyhedron
    fan_f: Fan
    fan_g: Fan
    fbar: Fan
    fhat: Fan
    adapted: ClassifiedFan
    gcdt: CurveConfigGraph
    gmult: MultGraph
    gplomb: PlumbGraph
    reduced: PlumbGraph
    trace: ReductionTrace


def run(pi: ProblemInput) -> PipelineResult:
    f = validate_input(pi)
    sigma = f.ambient
    dual = dual_cone(sigma)
    hb = hilbert_basis(dual)
    lnp_g = companion_polyhedron(hb, dual)
    lnp_f = polyhedron_of(f)
    fan_f = normal_fan(lnp_f)
    fan_g = normal_fan(lnp_g)
    _audit_companion_fan(fan_g, sigma)
    fbar = build_common_fan(lnp_f, lnp_g)
    fhat = regularize_boundary_2cones(fbar, fan_f)
    adapted = build_adapted_fan(fhat, lnp_f, lnp_g, budget=pi.budget)
    gcdt = build_gcdt(adapted, lnp_f, lnp_g)
    gmult = build_gmult(gcdt)
    gplomb = build_gplomb(gmult)
    reduced, trace = reduce_graph(gplomb)
    return PipelineResult(f, lnp_f, lnp_g, fan_f, fan_g, fbar, fhat, adapted,
                          gcdt, gmult, gplomb, reduced, trace)


def _audit_companion_fan(fan_g: Fan, sigma: Cone) -> None:
    # no companion-fan ray may sit inside a 2-face of sigma
    for r in fan_g.rays():
        d = cone_dim(minimal_containing_face(sigma, r))
        if d == 2:
            raise InvariantError(
                f"companion fan has a ray {r} interior to a 2-face of sigma")


# -- command-line surface -------------------------------------------------------

def _emit_stage(res: PipelineResult, stage: str, emit: str) -> str:
    if stage == "fan":
        if emit == "dot":
            raise InputError("malformed", "the fan stage has no DOT form")
        return serialize.to_json(serialize.fan_to_dict(res.adapted))
    if stage == "gcdt":
        return (serialize.gcdt_to_dot(res.gcdt) if emit == "dot"
                else serialize.to_json(serialize.gcdt_to_dict(res.gcdt)))
    if stage == "gmult":
        return (serialize.gmult_to_dot(res.gmult) if emit == "dot"
                else serialize.to_json(serialize.gmult_to_dict(res.gmult)))
    if stage == "gplomb":
        return (serialize.gplomb_to_dot(res.gplomb) if emit == "dot"
                else serialize.to_json(serialize.gplomb_to_dict(res.gplomb)))
    if stage == "reduced":
        return (serialize.gplomb_to_dot(res.reduced) if emit == "dot"
                else serialize.to_json(serialize.gplomb_to_dict(res.reduced, "reduced")))
    raise InputError("malformed", f"unknown stage {stage!r}")


def _cmd_check(args) -> int:
    pi = parse_input(_read(args.input))
    f = _build_function(pi)
    report = check_hypotheses(f)
    payload = {
        "suitable": report.suitable,
        "smoothing_ok": report.smoothing_ok,
        "suitability_violations": [list(r) for r in report.suitability_violations],
        "smoothing_violations": [
            {"face": [list(r) for r in face], "points": [list(p) for p in pts]}
            for face, pts in report.smoothing_violations],
    }
    if report.ok:
        verdicts = check_nnd(f)
        payload["nondegeneracy"] = [
            {"face": [list(p) for p in v.points], "dim": v.dim, "verdict": v.verdict}
            for v in verdicts]
    sys.stdout.write(serialize.to_json(payload))
    if not report.ok:
        return 2
    if any(v.verdict == "degenerate" for v in verdicts):
        return 2
    return 0


def _cmd_compute(args) -> int:
    pi = parse_input(_read(args.input))
    res = run(pi)
    sys.stdout.write(_emit_stage(res, args.stage, args.emit))
    return 0


def _cmd_oracle(args) -> int:
    from .oracle import run_instance_checks

    pi = parse_input(_read(args.input))
    failures = 0
    for name, ok, detail in run_instance_checks(pi):
        line = f"{'ok  ' if ok else 'FAIL'} {name}"
        if detail:
            line += f" ({detail})"
        sys.stdout.write(line + "\n")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 3


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="newtonplumb",
        description="Plumbing graphs of Milnor fiber boundaries on toric 3-folds")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="hypothesis and nondegeneracy report")
    p_check.add_argument("input", help="input JSON file, or - for stdin")
    p_check.set_defaults(func=_cmd_check)

    p_comp = sub.add_parser("compute", help="run the pipeline and emit one stage")
    p_comp.add_argument("input")
    p_comp.add_argument("--stage", default="reduced",
                        choices=["fan", "gcdt", "gmult", "gplomb", "reduced"])
    p_comp.add_argument("--emit", default="json", choices=["json", "dot"])
    p_comp.set_defaults(func=_cmd_compute)

    p_oracle = sub.add_parser("oracle", help="run instance-level cross-checks")
    p_oracle.add_argument("input")
    p_oracle.set_defaults(func=_cmd_oracle)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"input error [{exc.code}]: {exc}\n")
        return 2
    except InvariantError as exc:
        sys.stderr.write(f"internal invariant failure: {exc}\n")
        return 3
    except BudgetError as exc:
        sys.stderr.write(f"budget exhausted: {exc}\n")
        return 4


if __name__ == "__main__":
    sys.exit(main())
