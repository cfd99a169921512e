"""End-to-end solve: elimination, root isolation, classification and verdict."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .bisector_system import (
    CharacteristicPolynomial,
    InstanceSquaredSides,
    build_ground_truth_system,
    build_printed_system,
    eliminate_to_characteristic,
    scaled_residual,
)
from .constructibility import Verdict, verdict_for
from .geometry import EXCENTERS, INCENTER, TriangleSolution, classify_root
from .realroots import DEFAULT_EPS, RootInterval, isolate_real_roots, refine

SCHEMA_VERSION = 1
T_SCALE = 3  # roots are also reported in t = s / 3
CLASSIFY_EPS = Fraction(1, 10**12)
SYSTEMS = ("ground-truth", "printed", "both")


def fmt(v) -> Optional[float]:
    """Round to 12 significant digits for stable output."""
    if v is None:
        return None
    v = float(v)
    if v != v or v in (float("inf"), float("-inf")):
        return None
    return float(f"{v:.12g}")


def rat_str(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass
class RootReport:
    index: int
    interval: RootInterval
    s: float
    t: float
    solution: TriangleSolution
    printed_residual: float
    ground_truth_residual: float

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "s": fmt(self.s),
            "t": fmt(self.t),
            "interval": {"lo": rat_str(self.interval.lo), "hi": rat_str(self.interval.hi),
                         "width": fmt(self.interval.width)},
            "residual": {"printed": fmt(self.printed_residual), "ground_truth": fmt(self.ground_truth_residual)},
        }


@dataclass
class SolveReport:
    instance: InstanceSquaredSides
    system: str
    characteristics: dict
    used: CharacteristicPolynomial
    roots: List[RootReport]
    verdict: Optional[Verdict]
    discrepancy: Optional[dict]
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def solutions(self) -> List[TriangleSolution]:
        return [r.solution for r in self.roots]

    @property
    def n_incenter(self) -> int:
        return sum(1 for s in self.solutions if s.classification == INCENTER)

    @property
    def n_excenter(self) -> int:
        return sum(1 for s in self.solutions if s.classification in EXCENTERS)

    def exit_code(self) -> int:
        if self.discrepancy is not None:
            return 2
        if self.n_incenter == 0:
            return 3
        return 0

    def as_dict(self, timing: bool = False) -> dict:
        inst = self.instance
        out = {
            "schema": SCHEMA_VERSION,
            "instance": {
                "mode": "exact" if inst.exact else "numeric",
                "exact": [rat_str(v) for v in inst.squares()] if inst.exact else None,
                "float": [fmt(v) for v in inst.as_floats()],
            },
            "system": self.system,
            "characteristic": {
                "used": self.used.system,
                **{name.replace("-", "_"): _char_dict(cp) for name, cp in self.characteristics.items()},
            },
            "roots": [r.as_dict() for r in self.roots],
            "solutions": [_solution_dict(r.index, r.solution) for r in self.roots],
            "verdict": self.verdict.as_dict() if self.verdict is not None else None,
            "discrepancy": self.discrepancy,
        }
        out.update(self.extra)
        if timing:
            out["timing"] = {"seconds": round(self.elapsed, 6)}
        return out


def _char_dict(cp: CharacteristicPolynomial) -> dict:
    empty = cp.is_empty
    return {
        "chart": cp.chart,
        "degree": 0 if empty else cp.degree,
        "s": [int(c) for c in cp.poly.as_int_list()],
        "t": [] if empty else [int(c) for c in cp.in_t(T_SCALE).as_int_list()],
        "removed": [{"poly": r.poly.as_int_list(), "reason": r.reason} for r in cp.removed],
        "notes": list(cp.notes),
    }


def _pt(p) -> list:
    return [fmt(v) for v in p]


def _solution_dict(idx: int, sol: TriangleSolution) -> dict:
    return {
        "root_index": idx,
        "classification": sol.classification,
        "center": _pt(sol.center),
        "center_cartesian": _pt(sol.center_cart) if sol.center_cart is not None else None,
        "vertices": [_pt(v) for v in sol.vertices],
        "vertices_barycentric": [_pt(v) for v in sol.vertices_bary],
        "side_lengths": _pt(sol.side_lengths),
        "feet_residual": fmt(sol.feet_residual),
        "match_distance": fmt(sol.match_distance),
        "diagnostics": list(sol.diagnostics),
    }


def compare_characteristics(printed: CharacteristicPolynomial, truth: CharacteristicPolynomial) -> Optional[dict]:
    if printed.poly == truth.poly and printed.chart == truth.chart:
        return None
    return {
        "kind": "system-mismatch",
        "message": "printed and ground-truth systems give different characteristic polynomials; "
                   "ground-truth result used downstream",
        "printed": printed.poly.as_int_list(),
        "ground_truth": truth.poly.as_int_list(),
    }


def solve(inst: InstanceSquaredSides, system: str = "both", eps=DEFAULT_EPS) -> SolveReport:
    """Run the whole pipeline on one instance."""
    if system not in SYSTEMS:
        raise ValueError(f"system must be one of {SYSTEMS}")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    started = time.perf_counter()
    exact_inst = inst.to_exact()
    chars = {}
    if system in ("printed", "both"):
        chars["printed"] = eliminate_to_characteristic(exact_inst, "printed", CLASSIFY_EPS)
    if system in ("ground-truth", "both"):
        chars["ground-truth"] = eliminate_to_characteristic(exact_inst, "ground-truth", CLASSIFY_EPS)
    used = chars.get("ground-truth", chars.get("printed"))
    discrepancy = None
    if system == "both":
        discrepancy = compare_characteristics(chars["printed"], chars["ground-truth"])

    printed_forms = build_printed_system(inst.numeric_from(*inst.as_floats()))
    truth_forms = build_ground_truth_system(inst.numeric_from(*inst.as_floats()))
    roots: List[RootReport] = []
    if not used.is_empty:
        for i, iv in enumerate(isolate_real_roots(used.poly), start=1):
            fine = refine(iv, min(eps, CLASSIFY_EPS))
            reported = refine(iv, eps)
            s = fine.midpoint
            sol = classify_root(inst, s, used.chart)
            point = tuple(float(v) for v in sol.center)
            if used.chart == "y":
                t_val = float(s) / T_SCALE
            else:
                t_val = 1.0 / (T_SCALE * float(s)) if s != 0 else float("inf")
            roots.append(
                RootReport(
                    index=i,
                    interval=reported,
                    s=float(s),
                    t=t_val,
                    solution=sol,
                    printed_residual=scaled_residual(printed_forms, point),
                    ground_truth_residual=scaled_residual(truth_forms, point),
                )
            )

    verdict = None
    if inst.exact and not used.is_empty:
        verdict = verdict_for(used.in_t(T_SCALE))
    return SolveReport(
        instance=inst,
        system=system,
        characteristics=chars,
        used=used,
        roots=roots,
        verdict=verdict,
        discrepancy=discrepancy,
        elapsed=time.perf_counter() - started,
    )
