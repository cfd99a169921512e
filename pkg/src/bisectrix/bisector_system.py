"""Polynomial systems for the inverse bisector-feet problem and their elimination.

The unknown is the incenter ``(x : y : z)`` of the sought triangle A'B'C' in
barycentric coordinates with respect to the given triangle ABC. Two encodings
are provided:

* the printed system ``E1, E2, E3`` (three homogeneous cubics), and
* a ground-truth system ``G_A, G_B, G_C`` (homogeneous sextics) written
  directly from the bisector-foot ratio condition ``|B'A|/|AC'| = |A'B'|/|A'C'|``
  with the barycentric distance formula.

Elimination sets ``y = 1, z = s`` and takes resultants in ``x``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exact_core import (
    UPoly,
    XPoly,
    exact_div,
    factor_over_q,
    poly_gcd,
    squarefree_part,
    sylvester_resultant,
)
from .realroots import DEFAULT_EPS, isolate_real_roots, refine

log = logging.getLogger(__name__)

Exponent = Tuple[int, int, int]

RESIDUAL_TOL = 1e-6
POLISHED_RESIDUAL_TOL = 1e-9
ORACLE_TOL = 1e-6


class DegenerateInstanceError(ValueError):
    """Side squares that do not describe a nondegenerate triangle."""


class EliminationError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# instances


def _as_exact(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            raise DegenerateInstanceError(f"non-finite side square {v!r}")
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    return Fraction(v)


@dataclass(frozen=True)
class InstanceSquaredSides:
    """Squared side lengths ``a2 = |BC|^2, b2 = |CA|^2, c2 = |AB|^2``.

    ``exact`` instances hold Fractions; numeric ones hold floats.
    """

    a2: object
    b2: object
    c2: object
    exact: bool = True

    def __post_init__(self):
        conv = _as_exact if self.exact else float
        try:
            vals = [conv(v) for v in (self.a2, self.b2, self.c2)]
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise DegenerateInstanceError(f"invalid side square: {exc}") from None
        for name, v in zip(("a2", "b2", "c2"), vals):
            object.__setattr__(self, name, v)
            if not v > 0:
                raise DegenerateInstanceError(f"{name} must be positive, got {v}")
        if not self.area16() > 0:
            raise DegenerateInstanceError(
                "squared sides violate the strict triangle inequality "
                f"(16*Area^2 = {self.area16()})"
            )

    @classmethod
    def exact_from(cls, a2, b2, c2) -> "InstanceSquaredSides":
        return cls(a2, b2, c2, exact=True)

    @classmethod
    def numeric_from(cls, a2, b2, c2) -> "InstanceSquaredSides":
        return cls(float(a2), float(b2), float(c2), exact=False)

    @classmethod
    def from_sides(cls, a, b, c) -> "InstanceSquaredSides":
        return cls(float(a) ** 2, float(b) ** 2, float(c) ** 2, exact=False)

    def area16(self):
        """``2a2 b2 + 2b2 c2 + 2c2 a2 - a2^2 - b2^2 - c2^2`` (16 * Area^2)."""
        a, b, c = self.a2, self.b2, self.c2
        return 2 * a * b + 2 * b * c + 2 * c * a - a * a - b * b - c * c

    def squares(self) -> tuple:
        return (self.a2, self.b2, self.c2)

    def as_floats(self) -> tuple:
        return (float(self.a2), float(self.b2), float(self.c2))

    def to_exact(self) -> "InstanceSquaredSides":
        """Exact instance holding the binary values of the floats (no rounding)."""
        if self.exact:
            return self
        return InstanceSquaredSides(Fraction(self.a2), Fraction(self.b2), Fraction(self.c2), exact=True)

    def scaled(self, lam2) -> "InstanceSquaredSides":
        return InstanceSquaredSides(self.a2 * lam2, self.b2 * lam2, self.c2 * lam2, exact=self.exact)

    def permuted(self, perm: Sequence[int]) -> "InstanceSquaredSides":
        sq = self.squares()
        return InstanceSquaredSides(*(sq[i] for i in perm), exact=self.exact)


# ---------------------------------------------------------------------------
# trivariate forms


class Form:
    """Polynomial in x, y, z stored as ``{(i, j, k): coefficient}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Exponent, object]] = None):
        clean = {}
        for e, c in (terms or {}).items():
            if c != 0:
                clean[tuple(e)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Form is immutable")

    @classmethod
    def var(cls, idx: int) -> "Form":
        e = [0, 0, 0]
        e[idx] = 1
        return cls({tuple(e): 1})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Form":
        return cls({(1, 0, 0): coeffs[0], (0, 1, 0): coeffs[1], (0, 0, 1): coeffs[2]})

    @classmethod
    def const(cls, c) -> "Form":
        return cls({(0, 0, 0): c})

    def __add__(self, other: "Form") -> "Form":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Form(out)

    def __neg__(self) -> "Form":
        return Form({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __mul__(self, other) -> "Form":
        if not isinstance(other, Form):
            return Form({e: c * other for e, c in self.terms.items()})
        out: Dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, 0) + c1 * c2
        return Form(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Form) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        body = " + ".join(f"{c}*x^{i}y^{j}z^{k}" for (i, j, k), c in sorted(self.terms.items(), reverse=True))
        return f"Form({body or '0'})"

    def coeff(self, i: int, j: int, k: int):
        return self.terms.get((i, j, k), 0)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def __call__(self, x, y, z):
        return self.evaluate((x, y, z))

    def evaluate(self, point: Sequence):
        x, y, z = point
        total = 0
        for (i, j, k), c in self.terms.items():
            total += c * x**i * y**j * z**k
        return total

    def coefficient_scale(self) -> float:
        return max((abs(float(c)) for c in self.terms.values()), default=0.0)

    def scaled_abs(self, point: Sequence) -> float:
        """|F(p)| divided by (max |coefficient|) * (max |p_i|)^degree."""
        norm = max(abs(complex(v)) for v in point)
        denom = self.coefficient_scale() * norm ** max(self.degree, 0)
        val = abs(complex(self.evaluate(point)))
        return val / denom if denom > 0 else val

    def in_chart(self, chart: str = "y") -> XPoly:
        """Dehomogenize to a polynomial in x over Q[s].

        chart 'y': y = 1, z = s.  chart 'z': z = 1, y = s.
        """
        if chart not in ("y", "z"):
            raise ValueError(f"unknown chart {chart!r}")
        buckets: Dict[int, Dict[int, object]] = {}
        for (i, j, k), c in self.terms.items():
            sdeg = k if chart == "y" else j
            buckets.setdefault(i, {})
            buckets[i][sdeg] = buckets[i].get(sdeg, 0) + c
        if not buckets:
            return XPoly()
        out = []
        for i in range(max(buckets) + 1):
            b = buckets.get(i, {})
            if not b:
                out.append(UPoly())
                continue
            coeffs = [0] * (max(b) + 1)
            for d, c in b.items():
                coeffs[d] = c
            out.append(UPoly(coeffs))
        return XPoly(out)


# CubicForm is the historical name for a degree-3 Form.
CubicForm = Form

System = Tuple[Form, Form, Form]


def build_printed_system(inst: InstanceSquaredSides) -> System:
    """The three cubic conditions on the incenter ``(x : y : z)``."""
    a2, b2, c2 = inst.squares()
    return (
        Form({(1, 2, 0): -c2, (1, 0, 2): b2, (0, 2, 1): c2 + a2 - b2, (0, 1, 2): -(a2 + b2 - c2)}),
        Form({(0, 1, 2): -a2, (2, 1, 0): c2, (1, 0, 2): a2 + b2 - c2, (2, 0, 1): -(b2 + c2 - a2)}),
        Form({(2, 0, 1): -b2, (0, 2, 1): a2, (2, 1, 0): b2 + c2 - a2, (1, 2, 0): -(c2 + a2 - b2)}),
    )


def _dist2_form(inst: InstanceSquaredSides, u: Form, v: Form, w: Form) -> Form:
    # squared length of a displacement (u, v, w) with u + v + w = 0
    a2, b2, c2 = inst.squares()
    return -(v * w * a2 + w * u * b2 + u * v * c2)


def _vertex_forms() -> tuple:
    x, y, z = Form.var(0), Form.var(1), Form.var(2)
    # A' = (-x, y, z), B' = (x, -y, z), C' = (x, y, -z) and their coordinate sums
    verts = ((-x, y, z), (x, -y, z), (x, y, -z))
    sums = tuple(p[0] + p[1] + p[2] for p in verts)
    return verts, sums


def _ratio_condition(inst, idx: int, verts, sums) -> Form:
    """Squared, cross-multiplied foot-ratio condition at the foot on side opposite vertex ``idx``.

    For idx = 0 this is |B'A|^2 |A'C'|^2 - |AC'|^2 |A'B'|^2 with every point
    normalized and all denominators cleared.
    """
    i, j, k = idx, (idx + 1) % 3, (idx + 2) % 3
    P, Q, R = verts[i], verts[j], verts[k]
    sP, sQ, sR = sums[i], sums[j], sums[k]
    e = [Form.const(0)] * 3
    e[i] = Form.const(1)

    def disp_point(Pt, sPt):
        # sPt * e_i-normalized difference: Pt - sPt * e (foot vertex of the reference triangle)
        return [Pt[m] - sPt * e[m] for m in range(3)]

    def disp_pair(Pt, sPt, Qt, sQt):
        return [Pt[m] * sQt - Qt[m] * sPt for m in range(3)]

    d_QF = _dist2_form(inst, *disp_point(Q, sQ))
    d_PR = _dist2_form(inst, *disp_pair(P, sP, R, sR))
    d_FR = _dist2_form(inst, *disp_point(R, sR))
    d_PQ = _dist2_form(inst, *disp_pair(P, sP, Q, sQ))
    return d_QF * d_PR - d_FR * d_PQ


def build_ground_truth_system(inst: InstanceSquaredSides) -> System:
    """Three homogeneous sextics encoding "AA', BB', CC' bisect the angles of A'B'C'".

    Each form is the squared ratio condition at one foot; it covers the internal
    and the external bisector alike, so common zeros are tritangent centers.
    """
    verts, sums = _vertex_forms()
    return tuple(_ratio_condition(inst, i, verts, sums) for i in range(3))


def build_system(inst: InstanceSquaredSides, system: str = "ground-truth") -> System:
    if system == "printed":
        return build_printed_system(inst)
    if system in ("ground-truth", "ground_truth"):
        return build_ground_truth_system(inst)
    raise ValueError(f"unknown system {system!r}")


def residual(system: Sequence[Form], point: Sequence) -> tuple:
    """Evaluate every form at ``point`` (exact for rational input)."""
    return tuple(f.evaluate(point) for f in system)


def scaled_residual(system: Sequence[Form], point: Sequence) -> float:
    return max(f.scaled_abs(point) for f in system)


def outside_locus(point: Sequence, tol: float = 0.0) -> bool:
    """True if some coordinate vanishes (points outside ``xyz != 0``)."""
    scale = max(abs(complex(v)) for v in point)
    if scale == 0:
        return True
    return any(abs(complex(v)) <= tol * scale for v in point)


# ---------------------------------------------------------------------------
# elimination


@dataclass(frozen=True)
class RemovedFactor:
    poly: UPoly
    reason: str


@dataclass(frozen=True)
class CharacteristicPolynomial:
    """Square-free primitive polynomial in ``s`` (the ratio z/y in chart 'y', y/z in chart 'z')."""

    poly: UPoly
    system: str
    chart: str = "y"
    removed: Tuple[RemovedFactor, ...] = ()
    notes: Tuple[str, ...] = ()

    @property
    def degree(self) -> int:
        return self.poly.degree()

    @property
    def is_empty(self) -> bool:
        return self.poly.degree() < 1

    def in_t(self, k=3) -> UPoly:
        return rescale_to_t(self.poly, k)


def rescale_to_t(p: UPoly, k) -> UPoly:
    """Primitive integer polynomial proportional to ``p(k*t)``."""
    k = Fraction(k)
    if k == 0:
        raise ValueError("rescale factor must be nonzero")
    if p.is_zero():
        raise ValueError("cannot rescale the zero polynomial")
    return p.compose_scale(k).primitive()


def _strip_x_power(xp: XPoly) -> Tuple[XPoly, int]:
    k = 0
    while k < len(xp.coeffs) and xp.coeffs[k].is_zero():
        k += 1
    return XPoly(xp.coeffs[k:]), k


def _chart_point(x, s, chart: str) -> tuple:
    return (x, 1, s) if chart == "y" else (x, s, 1)


def _real_x_candidates(xp: XPoly, s: float) -> List[float]:
    coeffs = xp.at_s_float(s)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    roots = np.roots(coeffs[::-1])
    scale = max(1.0, float(np.max(np.abs(roots)))) if len(roots) else 1.0
    return [float(r.real) for r in roots if abs(r.imag) <= 1e-7 * scale]


def solve_x_at(forms: Sequence[Form], s: float, chart: str = "y") -> Tuple[Optional[float], float]:
    """Best real ``x`` with xyz != 0 for the ratio value ``s``; returns (x, scaled residual)."""
    best, best_res = None, math.inf
    for f in forms:
        xp, _ = _strip_x_power(f.in_chart(chart))
        for xv in _real_x_candidates(xp, s):
            pt = _chart_point(xv, s, chart)
            if outside_locus(pt, 1e-12):
                continue
            r = scaled_residual(forms, pt)
            if r < best_res:
                best, best_res = xv, r
    return best, best_res


def root_is_genuine(inst: InstanceSquaredSides, forms: Sequence[Form], s: float, chart: str = "y") -> bool:
    """Double gate: full-system residual, then the forward geometric oracle."""
    x, res = solve_x_at(forms, s, chart)
    if x is not None and res <= RESIDUAL_TOL:
        return True
    if x is None:
        return False
    from .geometry import classify_point  # geometry depends on this module

    sol = classify_point(inst, _chart_point(x, s, chart), tol=ORACLE_TOL)
    return sol.classification != "Invalid"


def _filter_factors(inst, forms, poly: UPoly, chart: str, eps) -> Tuple[UPoly, List[RemovedFactor], List[str]]:
    """Keep the irreducible factors with at least one real root passing the double gate."""
    removed: List[RemovedFactor] = []
    notes: List[str] = []
    keep = UPoly.const(1)
    for fac, _ in factor_over_q(poly):
        ivs = [refine(iv, eps) for iv in isolate_real_roots(fac)]
        if not ivs:
            removed.append(RemovedFactor(fac, "no real roots: no geometric solution"))
            continue
        verdicts = [root_is_genuine(inst, forms, float(iv.midpoint), chart) for iv in ivs]
        if any(verdicts):
            keep = keep * fac
        else:
            removed.append(RemovedFactor(fac, "every real root fails residual and forward-oracle checks"))
    return keep.primitive(), removed, notes


def _chart_characteristic(inst, forms, system: str, chart: str, eps) -> CharacteristicPolynomial:
    removed: List[RemovedFactor] = []
    xps = []
    for idx, f in enumerate(forms):
        # x = 0 lies outside the locus; other x-free factors stay, since a
        # form vanishing identically in x can still carry genuine solutions
        xp, _ = _strip_x_power(f.in_chart(chart))
        if xp.is_zero():
            raise EliminationError(f"form {idx + 1} vanishes identically")
        xps.append(xp)

    resultants = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        r = sylvester_resultant(xps[i], xps[j])
        if not r.is_zero():
            resultants.append(r.primitive())
    if not resultants:
        raise EliminationError("all pairwise resultants vanish (forms share a factor in x)")
    g = resultants[0]
    for r in resultants[1:]:
        g = poly_gcd(g, r).primitive()
    cof = exact_div(resultants[0], g)
    if cof.degree() > 0:
        removed.append(
            RemovedFactor(squarefree_part(cof), "not common to all pairwise resultants (spurious)")
        )
    if g.degree() < 1:
        return CharacteristicPolynomial(UPoly.const(1), system, chart, tuple(removed))
    k = g.trailing_zero_order()
    if k:
        removed.append(RemovedFactor(UPoly.monomial(1), "trivial factor s (outside the xyz != 0 locus)"))
        g = UPoly(g.coeffs[k:])
    if g.degree() < 1:
        return CharacteristicPolynomial(UPoly.const(1), system, chart, tuple(removed))
    kept, dropped, notes = _filter_factors(inst, forms, squarefree_part(g), chart, eps)
    removed.extend(dropped)
    return CharacteristicPolynomial(kept, system, chart, tuple(removed), tuple(notes))


def eliminate_to_characteristic(
    inst: InstanceSquaredSides, system: str = "ground-truth", eps=DEFAULT_EPS
) -> CharacteristicPolynomial:
    """Eliminate x and return the filtered characteristic polynomial.

    Runs chart y = 1 (``s = z/y``); if nothing survives there, chart z = 1
    (``s = y/z``) is tried. An empty survivor is returned as a constant
    polynomial, meaning no solution.
    """
    if not inst.exact:
        raise ValueError("elimination needs an exact instance; use inst.to_exact()")
    forms = build_system(inst, system)
    cp = _chart_characteristic(inst, forms, system, "y", eps)
    if cp.is_empty:
        alt = _chart_characteristic(inst, forms, system, "z", eps)
        if not alt.is_empty:
            return alt
    return cp
