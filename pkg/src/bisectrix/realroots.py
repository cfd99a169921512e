"""Certified real root isolation with Sturm sequences and exact bisection."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .exact_core import UPoly, cauchy_bound, is_squarefree, poly_divmod, squarefree_part

DEFAULT_EPS = Fraction(1, 10**12)


class NotSquareFreeError(ValueError):
    pass


def sturm_sequence(p: UPoly) -> List[UPoly]:
    """Canonical Sturm chain p0=p, p1=p', p_{k+1} = -rem(p_{k-1}, p_k).

    Each member is rescaled by a positive constant to a primitive integer
    polynomial, which leaves all sign patterns intact.
    """
    if p.is_zero():
        raise ValueError("Sturm sequence of the zero polynomial")
    if not is_squarefree(p):
        raise NotSquareFreeError("Sturm sequence requires a square-free polynomial; apply squarefree_part first")
    chain = [_pos_primitive(p)]
    if p.degree() == 0:
        return chain
    chain.append(_pos_primitive(p.derivative()))
    while chain[-1].degree() > 0:
        rem = poly_divmod(chain[-2], chain[-1])[1]
        if rem.is_zero():
            break
        chain.append(_pos_primitive(-rem))
    return chain


def _pos_primitive(p: UPoly) -> UPoly:
    c = p.content()
    return UPoly(a / c for a in p.coeffs)


def _variations(signs) -> int:
    prev = 0
    count = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def sign_variations(chain: List[UPoly], v: Fraction) -> int:
    return _variations(q.sign_at(v) for q in chain)


def sign_variations_at_infinity(chain: List[UPoly], positive: bool = True) -> int:
    signs = []
    for q in chain:
        lc = 1 if q.lead() > 0 else -1
        if not positive and q.degree() % 2 == 1:
            lc = -lc
        signs.append(lc)
    return _variations(signs)


def count_real_roots(p: UPoly, lo=None, hi=None, chain=None) -> int:
    """Distinct real roots in (lo, hi]; the whole real line when bounds are None."""
    chain = chain if chain is not None else sturm_sequence(p)
    vlo = sign_variations_at_infinity(chain, False) if lo is None else sign_variations(chain, Fraction(lo))
    vhi = sign_variations_at_infinity(chain, True) if hi is None else sign_variations(chain, Fraction(hi))
    return vlo - vhi


@dataclass(frozen=True)
class RootInterval:
    """Isolating interval for one real root of a square-free polynomial.

    Either ``lo < hi`` with a strict sign change, or ``lo == hi`` at an exact
    rational root.
    """

    lo: Fraction
    hi: Fraction
    poly: UPoly
    sign_lo: int
    sign_hi: int

    def __post_init__(self):
        if self.lo == self.hi:
            if self.sign_lo != 0 or self.sign_hi != 0:
                raise ValueError("degenerate interval must sit on an exact root")
        elif not (self.lo < self.hi and self.sign_lo * self.sign_hi < 0):
            raise ValueError("interval does not bracket a sign change")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.midpoint)

    def contains(self, v) -> bool:
        return self.lo <= v <= self.hi


def _make_interval(p: UPoly, lo: Fraction, hi: Fraction) -> RootInterval:
    return RootInterval(lo, hi, p, p.sign_at(lo), p.sign_at(hi))


def _split_point(p: UPoly, lo: Fraction, hi: Fraction) -> Fraction:
    w = hi - lo
    for f in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(2, 5), Fraction(3, 5)):
        m = lo + w * f
        if p.sign_at(m) != 0:
            return m
    m = lo + w / 2
    k = 7
    while p.sign_at(m) == 0:
        m = lo + w * Fraction(k // 2, k)
        k += 2
    return m


def isolate_real_roots(p: UPoly) -> List[RootInterval]:
    """Disjoint isolating intervals for all distinct real roots, ascending."""
    if p.is_zero():
        raise ValueError("root isolation of the zero polynomial")
    sf = squarefree_part(p)
    if sf.degree() < 1:
        return []
    chain = sturm_sequence(sf)
    bound = cauchy_bound(sf)
    lo, hi = -bound, bound
    out: List[RootInterval] = []
    stack = [(lo, hi, sign_variations(chain, lo), sign_variations(chain, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            out.append(_make_interval(sf, a, b))
            continue
        m = _split_point(sf, a, b)
        vm = sign_variations(chain, m)
        stack.append((a, m, va, vm))
        stack.append((m, b, vm, vb))
    out.sort(key=lambda r: r.lo)
    return out


def refine(r: RootInterval, eps=DEFAULT_EPS) -> RootInterval:
    """Shrink ``r`` to width <= eps by exact bisection, keeping the bracket."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if r.is_exact:
        return r
    p = r.poly
    lo, hi, slo, shi = r.lo, r.hi, r.sign_lo, r.sign_hi
    while hi - lo > eps:
        m = (lo + hi) / 2
        sm = p.sign_at(m)
        if sm == 0:
            return RootInterval(m, m, p, 0, 0)
        if sm == slo:
            lo = m
        else:
            hi = m
    return RootInterval(lo, hi, p, slo, shi)


def real_roots(p: UPoly, eps=DEFAULT_EPS) -> List[RootInterval]:
    return [refine(r, eps) for r in isolate_real_roots(p)]
