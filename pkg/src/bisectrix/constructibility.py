"""Ruler-and-compass constructibility of roots of rational polynomials (degree <= 4).

Roots of an irreducible rational cubic are never constructible. An irreducible
quartic has constructible roots exactly when its resolvent cubic has a
rational root (its Galois group is then a 2-group).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .exact_core import UPoly, exact_div, rational_roots

CONSTRUCTIBLE = "Constructible"
NOT_CONSTRUCTIBLE = "NotConstructible"
UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class TrailStep:
    step: str
    before: UPoly
    after: UPoly
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "step": self.step,
            "before": [str(c) for c in self.before.coeffs],
            "after": [str(c) for c in self.after.coeffs],
            "detail": self.detail,
        }

    def __str__(self):
        s = f"{self.step}: {self.before.to_str()} -> {self.after.to_str()}"
        return f"{s} ({self.detail})" if self.detail else s


@dataclass(frozen=True)
class Verdict:
    status: str
    trail: Tuple[TrailStep, ...] = ()
    rational_roots: Tuple[Fraction, ...] = ()

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "rational_roots": [str(r) for r in self.rational_roots],
            "trail": [t.as_dict() for t in self.trail],
        }


def _require_exact(p) -> UPoly:
    """Coerce to UPoly, refusing floating coefficients (UPoly itself is always exact)."""
    if not isinstance(p, UPoly):
        coeffs = list(p)
        for c in coeffs:
            if isinstance(c, bool) or not isinstance(c, (int, Fraction)):
                raise TypeError("constructibility needs exact rational coefficients")
        p = UPoly(coeffs)
    if p.is_zero():
        raise ValueError("zero polynomial")
    return p


def peel_rational_roots(p) -> Tuple[List[UPoly], UPoly]:
    """Split off linear factors (t - r) for every rational root r.

    Returns the linear factors (with multiplicity) and a primitive remainder
    without rational roots.
    """
    p = _require_exact(p)
    factors = []
    rem = p.primitive()
    for r in rational_roots(p):
        lin = UPoly((-r, 1)).primitive()
        factors.append(lin)
        rem = exact_div(rem, lin)
    rem = rem.primitive() if rem.degree() > 0 else UPoly.const(1)
    return factors, rem


def depress_quartic(q: UPoly) -> Tuple[Fraction, Fraction, Fraction]:
    """(p, q, r) with the monic quartic shifted to t^4 + p t^2 + q t + r."""
    if q.degree() != 4:
        raise ValueError("depress_quartic needs a quartic")
    m = q.monic()
    shifted = m.shift(-m[3] / 4)
    return shifted[2], shifted[1], shifted[0]


def resolvent_cubic(q: UPoly) -> UPoly:
    """Resolvent y^3 - p y^2 - 4 r y + (4 p r - q^2) of the depressed monic quartic."""
    if q.degree() != 4:
        raise ValueError("resolvent cubic needs a quartic")
    p, qq, r = depress_quartic(q)
    return UPoly((4 * p * r - qq * qq, -4 * r, -p, 1))


def verdict_for(p) -> Verdict:
    """Constructibility of the roots of ``p`` that are not rational.

    Rational roots are always constructible and listed separately in the trail.
    """
    p = _require_exact(p)
    trail: List[TrailStep] = []
    factors, rem = peel_rational_roots(p)
    roots = tuple(sorted(Fraction(-f[0], f[1]) for f in factors))
    trail.append(
        TrailStep(
            "peel_rational_roots",
            p.primitive(),
            rem,
            "rational roots: " + (", ".join(str(r) for r in roots) if roots else "none"),
        )
    )
    d = rem.degree()
    if d <= 0:
        trail.append(TrailStep("all_roots_rational", rem, rem, "rational numbers are constructible"))
        return Verdict(CONSTRUCTIBLE, tuple(trail), roots)
    if d == 1:
        # only possible if rem had a non-rational linear factor, which cannot happen
        raise AssertionError("linear remainder after peeling rational roots")
    if d == 2:
        trail.append(TrailStep("quadratic", rem, rem, "roots need one square root"))
        return Verdict(CONSTRUCTIBLE, tuple(trail), roots)
    if d == 3:
        trail.append(TrailStep("irreducible cubic", rem, rem, "no rational root, so irreducible over Q"))
        return Verdict(NOT_CONSTRUCTIBLE, tuple(trail), roots)
    if d == 4:
        res = resolvent_cubic(rem)
        res_roots = rational_roots(res)
        if res_roots:
            trail.append(
                TrailStep("quartic with reducible resolvent", rem, res,
                          f"resolvent root {res_roots[0]}; Galois group is a 2-group")
            )
            return Verdict(CONSTRUCTIBLE, tuple(trail), roots)
        trail.append(
            TrailStep("irreducible quartic with irreducible resolvent", rem, res,
                      "resolvent has no rational root; Galois group is A4 or S4")
        )
        return Verdict(NOT_CONSTRUCTIBLE, tuple(trail), roots)
    trail.append(TrailStep("degree above 4", rem, rem, "no decision procedure implemented"))
    return Verdict(UNDETERMINED, tuple(trail), roots)
