"""Command-line entry point: ``bisectrix solve|reproduce-paper|sweep|plot|oracle-check``.

Exit codes: 0 success, 1 input error, 2 discrepancy between the two systems,
3 no valid solution, 4 reproduction or oracle check failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from importlib import resources
from typing import List, Optional

import jsonschema

from .bisector_system import DegenerateInstanceError, InstanceSquaredSides, eliminate_to_characteristic
from .constructibility import NOT_CONSTRUCTIBLE
from .exact_core import UPoly
from .geometry import INCENTER, INVALID
from .pipeline import T_SCALE, fmt, solve
from . import sweep as sweep_mod
from .svg import render_svg

EXIT_OK, EXIT_INPUT, EXIT_DISCREPANCY, EXIT_NO_SOLUTION, EXIT_CHECK = 0, 1, 2, 3, 4

WORKED_SQUARES = (4, 9, 7)
PUBLISHED_CUBIC_T = (-570, 259, 74, 1)  # ascending coefficients
PUBLISHED_ROOTS_T = (1.52, -5.32, -70.19)
PUBLISHED_VIETA_SUM = -74.0
PUBLISHED_VIETA_PRODUCT = 570.0
DIAGNOSIS_SQUARES = (4, 9, 19)


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse would exit 2, which is reserved for system discrepancies
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def parse_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return v


def _system(name: str) -> str:
    return "printed" if name == "printed-only" else name


def load_schema() -> dict:
    return json.loads(resources.files("bisectrix").joinpath("schema/report_v1.json").read_text())


def validate_report(doc: dict):
    jsonschema.validate(doc, load_schema())


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def instance_from_args(args) -> InstanceSquaredSides:
    try:
        if args.sq is not None:
            return InstanceSquaredSides.exact_from(*args.sq)
        if args.sides is not None:
            if any(v <= 0 for v in args.sides):
                raise InputError("side lengths must be positive")
            return InstanceSquaredSides.numeric_from(*(v * v for v in args.sides))
        if args.points is not None:
            p = args.points
            P = [(p[0], p[1]), (p[2], p[3]), (p[4], p[5])]
            d2 = lambda u, v: (u[0] - v[0]) ** 2 + (u[1] - v[1]) ** 2
            # a is opposite A, so a^2 = |BC|^2
            return InstanceSquaredSides.exact_from(d2(P[1], P[2]), d2(P[2], P[0]), d2(P[0], P[1]))
    except DegenerateInstanceError as exc:
        raise InputError(f"degenerate instance (triangle inequality violated): {exc}")
    except ValueError as exc:
        raise InputError(str(exc))
    raise InputError("give the instance with --sq, --sides or --points")


# ---------------------------------------------------------------------------
# text rendering


def _poly_line(label: str, coeffs) -> str:
    return f"  {label}: {UPoly(coeffs).to_str('t' if label.endswith('(t)') else 's')}"


def render_text(doc: dict) -> str:
    lines = []
    inst = doc["instance"]
    sq = inst["exact"] if inst["exact"] is not None else inst["float"]
    lines.append(f"instance ({inst['mode']}): a^2={sq[0]} b^2={sq[1]} c^2={sq[2]}")
    ch = doc["characteristic"]
    for key in ("printed", "ground_truth"):
        if key in ch:
            c = ch[key]
            lines.append(f"{key.replace('_', '-')} characteristic (chart {c['chart']}, degree {c['degree']}):")
            lines.append(_poly_line("in s", c["s"]))
            if c["t"]:
                lines.append(_poly_line("in t = s/3 (t)", c["t"]))
    lines.append(f"used: {ch['used']}")
    for r, sol in zip(doc["roots"], doc["solutions"]):
        lines.append(
            f"root {r['index']}: s={r['s']} t={r['t']} -> {sol['classification']} "
            f"(feet residual {sol['feet_residual']})"
        )
        for d in sol["diagnostics"]:
            lines.append(f"    note: {d}")
    if not doc["roots"]:
        lines.append("no real roots")
    if doc["verdict"] is not None:
        lines.append(f"verdict: {doc['verdict']['status']}")
        for step in doc["verdict"]["trail"]:
            lines.append(f"  {step['step']}: {step['detail']}")
    if doc["discrepancy"] is not None:
        lines.append(f"DISCREPANCY ({doc['discrepancy']['kind']}): {doc['discrepancy']['message']}")
    for c in doc.get("checks", []):
        lines.append(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['name']}: {c['detail']}")
    pub = doc.get("published_cubic")
    if pub:
        lines.append(f"published cubic: {pub['message']}")
        for line in pub.get("diagnosis", {}).get("lines", []):
            lines.append(f"  {line}")
    if "timing" in doc:
        lines.append(f"time: {doc['timing']['seconds']} s")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args) -> int:
    inst = instance_from_args(args)
    rep = solve(inst, system=_system(args.system), eps=args.eps)
    doc = rep.as_dict(timing=args.timing)
    validate_report(doc)
    emit(dump_json(doc) if args.json else render_text(doc), args.out)
    return rep.exit_code()


def _trunc2(v: float) -> float:
    return math.trunc(v * 100) / 100


def _diagnose_published_cubic(system: str) -> dict:
    """Where the published cubic comes from: instance (4,9,19) with t = 3z/y."""
    inst = InstanceSquaredSides.exact_from(*DIAGNOSIS_SQUARES)
    cp = eliminate_to_characteristic(inst, system)
    in_t = cp.poly.compose_scale(Fraction(1, 3)).primitive() if not cp.is_empty else cp.poly
    lines = [
        f"instance (a^2,b^2,c^2) = {DIAGNOSIS_SQUARES} has characteristic {cp.poly.to_str('s')}",
        f"with t = 3z/y it becomes {in_t.to_str('t')}",
    ]
    roots = []
    if not cp.is_empty:
        rep = solve(inst, system=system)
        for r in rep.roots:
            roots.append({"t": fmt(3 * r.s), "classification": r.solution.classification})
            lines.append(f"t = {3 * r.s:.4f} -> {r.solution.classification}")
    return {
        "squares": list(DIAGNOSIS_SQUARES),
        "variable": "t = 3z/y",
        "characteristic_t": in_t.as_int_list(),
        "matches_published": in_t.as_int_list() == list(PUBLISHED_CUBIC_T),
        "roots": roots,
        "lines": lines,
    }


def reproduction_checks(rep) -> List[dict]:
    checks = []

    def add(name, ok, detail):
        checks.append({"name": name, "passed": bool(ok), "detail": detail})

    used = rep.used
    t_poly = used.in_t(T_SCALE) if not used.is_empty else used.poly
    deg = 0 if used.is_empty else used.degree
    add("degree 3", deg == 3, f"characteristic degree {deg}: {t_poly.to_str('t')}")
    ts = [r.t for r in rep.roots]
    add("three real roots", len(ts) == 3, f"{len(ts)} real root(s)")
    got = sorted((_trunc2(t) for t in ts), reverse=True)
    want = sorted(PUBLISHED_ROOTS_T, reverse=True)
    add("roots 1.52, -5.32, -70.19", got == want, "t = " + ", ".join(f"{t:.6f}" for t in ts))
    ssum = sum(ts)
    add("Vieta sum -74", len(ts) == 3 and abs(ssum - PUBLISHED_VIETA_SUM) <= 1e-6, f"sum of real roots {ssum:.9g}")
    prod = math.prod(ts) if ts else float("nan")
    add("Vieta product 570", len(ts) == 3 and abs(prod - PUBLISHED_VIETA_PRODUCT) <= 1e-3, f"product of real roots {prod:.9g}")
    n_in, n_ex = rep.n_incenter, rep.n_excenter
    add("1 Incenter + 2 Excenter", n_in == 1 and n_ex == 2, f"{n_in} Incenter, {n_ex} Excenter")
    status = rep.verdict.status if rep.verdict is not None else "none"
    add("NotConstructible", status == NOT_CONSTRUCTIBLE, f"verdict {status}")
    ok_cubic = (not used.is_empty) and t_poly.as_int_list() == list(PUBLISHED_CUBIC_T)
    add("published cubic reproduced", ok_cubic, f"t-characteristic {t_poly.as_int_list()}")
    return checks


def cmd_reproduce_paper(args) -> int:
    system = _system(args.system)
    inst = InstanceSquaredSides.exact_from(*WORKED_SQUARES)
    rep = solve(inst, system=system, eps=args.eps)
    checks = reproduction_checks(rep)
    rep.extra["checks"] = checks
    if not checks[-1]["passed"]:
        rep.extra["published_cubic"] = {
            "kind": "published-cubic-mismatch",
            "message": "the characteristic of (4,9,7) is not the published cubic "
                       + " + ".join(f"{c}*t^{i}" for i, c in enumerate(PUBLISHED_CUBIC_T)),
            "computed_t": (rep.used.in_t(T_SCALE).as_int_list() if not rep.used.is_empty else []),
            "diagnosis": _diagnose_published_cubic("ground-truth" if system == "both" else system),
        }
    doc = rep.as_dict(timing=args.timing)
    validate_report(doc)
    emit(dump_json(doc) if args.json else render_text(doc), args.out)
    return EXIT_OK if all(c["passed"] for c in checks) else EXIT_CHECK


def cmd_sweep(args) -> int:
    try:
        if args.rational_grid is not None:
            jobs = sweep_mod.grid_jobs(args.rational_grid)
        else:
            if args.n < 0:
                raise InputError("--n must be non-negative")
            jobs = sweep_mod.forward_jobs(args.n, args.seed, args.angle_min, args.angle_max, args.degenerate)
    except sweep_mod.SamplingError as exc:
        raise InputError(str(exc))
    rows = sweep_mod.run_jobs(jobs)
    emit(sweep_mod.rows_to_csv(rows, timing=args.timing), args.out)
    return EXIT_OK


def cmd_plot(args) -> int:
    inst = instance_from_args(args)
    rep = solve(inst, system=_system(args.system), eps=args.eps)
    sols = rep.solutions
    if args.root is not None:
        if not 1 <= args.root <= len(sols):
            print(f"no root {args.root}: the instance has {len(sols)} real root(s)", file=sys.stderr)
            return EXIT_NO_SOLUTION
        sol = sols[args.root - 1]
        idx = args.root
    else:
        pick = [i for i, s in enumerate(sols) if s.classification == INCENTER]
        if not pick:
            print("no Incenter solution to draw", file=sys.stderr)
            return EXIT_NO_SOLUTION
        idx = pick[0] + 1
        sol = sols[pick[0]]
    if sol.classification == INVALID or not sol.vertices:
        print(f"root {idx} gives no valid triangle", file=sys.stderr)
        return EXIT_NO_SOLUTION
    emit(render_svg(inst, sol, f"root {idx}: {sol.classification}"), args.out)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    if args.n < 0:
        raise InputError("--n must be non-negative")
    if args.perturb < 0:
        raise InputError("--perturb must be non-negative")
    results = sweep_mod.oracle_check(args.n, args.seed, args.perturb)
    lines = []
    for r in results:
        status = "pass" if r.passed else "FAIL"
        line = (f"{r.index:4d} {status} angles=({r.angles[0]:.2f},{r.angles[1]:.2f},{r.angles[2]:.2f}) "
                f"incenter={r.n_incenter} congruent={r.n_congruent} error={r.best_error:.3e}")
        if r.perturbation:
            line += f" perturb={r.perturbation:g} amplification={r.best_error / r.perturbation:.3g}"
        if not r.systems_agree:
            line += " systems-disagree"
        lines.append(line)
    n_pass = sum(r.passed for r in results)
    lines.append(f"oracle-check: {n_pass}/{len(results)} passed")
    if args.json:
        doc = {
            "n": len(results), "seed": args.seed, "perturb": args.perturb, "passed": n_pass,
            "instances": [
                {"index": r.index, "angles": [fmt(a) for a in r.angles], "n_incenter": r.n_incenter,
                 "n_congruent": r.n_congruent, "error": fmt(r.best_error), "systems_agree": r.systems_agree,
                 "passed": r.passed}
                for r in results
            ],
        }
        emit(dump_json(doc), args.out)
    else:
        emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if n_pass == len(results) else EXIT_CHECK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
    common.add_argument("--eps", type=parse_rational, default=Fraction(1, 10**12), metavar="RATIONAL",
                        help="root interval width (default 1e-12)")
    common.add_argument("--system", default="both", choices=["ground-truth", "printed", "both", "printed-only"],
                        help="equation system used for elimination (default both, cross-checked)")
    common.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte determinism)")

    inst = _Parser(add_help=False)
    g = inst.add_mutually_exclusive_group()
    g.add_argument("--sq", nargs=3, type=parse_rational, metavar=("A2", "B2", "C2"),
                   help="exact squared side lengths")
    g.add_argument("--sides", nargs=3, type=parse_float, metavar=("A", "B", "C"), help="floating side lengths")
    g.add_argument("--points", nargs=6, type=parse_rational, metavar="X",
                   help="vertices x1 y1 x2 y2 x3 y3 (exact)")

    p = _Parser(prog="bisectrix", description="Recover triangles from the feet of their angle bisectors.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", parents=[common, inst], help="solve one instance")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("reproduce-paper", parents=[common], help="check the worked instance (4, 9, 7)")
    r.set_defaults(func=cmd_reproduce_paper)

    w = sub.add_parser("sweep", parents=[common], help="seeded sweep, CSV output")
    w.add_argument("--n", type=int, default=100)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--angle-min", type=parse_float, default=15.0)
    w.add_argument("--angle-max", type=parse_float, default=150.0)
    w.add_argument("--rational-grid", type=int, metavar="G", help="all integer squared sides up to G")
    w.add_argument("--degenerate", action="store_true", help="sample collinear triangles")
    w.set_defaults(func=cmd_sweep)

    pl = sub.add_parser("plot", parents=[common, inst], help="draw a solution as SVG")
    pl.add_argument("--root", type=int, help="1-based root index (default: first Incenter)")
    pl.set_defaults(func=cmd_plot)

    o = sub.add_parser("oracle-check", parents=[common], help="round-trip self-test")
    o.add_argument("--n", type=int, default=50)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--perturb", type=parse_float, default=0.0, help="relative noise on the squared sides")
    o.set_defaults(func=cmd_oracle_check)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "eps", 1) <= 0:
        print("bisectrix: error: --eps must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"bisectrix: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"bisectrix: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
