"""Exact rational arithmetic and dense univariate polynomials over Q.

Scalars are :class:`fractions.Fraction` (aliased :data:`Rat`), which keeps
numerator and denominator coprime with a positive denominator after every
operation. Polynomials are immutable dense coefficient tuples, lowest degree
first.
"""

from __future__ import annotations

import math
import operator
from fractions import Fraction
from itertools import product
from typing import Iterable, Union

Rat = Fraction
Scalar = Union[int, Fraction]

_OPS = {
    "+": operator.add,
    "-": operator.sub,
    "−": operator.sub,
    "*": operator.mul,
    "×": operator.mul,
    "/": operator.truediv,
    "÷": operator.truediv,
}


def rat_arith(a: Scalar, b: Scalar, op: str) -> Fraction:
    """Apply ``op`` to two rationals and return a canonical Fraction.

    Raises ZeroDivisionError on division by zero.
    """
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None
    if fn is operator.truediv and b == 0:
        raise ZeroDivisionError("rational division by zero")
    return Fraction(fn(Fraction(a), Fraction(b)))


def _strip(coeffs: Iterable[Scalar]) -> tuple:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class UPoly:
    """Dense univariate polynomial with rational coefficients.

    ``coeffs[i]`` is the coefficient of ``var**i``. The zero polynomial has an
    empty coefficient tuple.
    """

    __slots__ = ("coeffs", "_ints")

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))
        object.__setattr__(self, "_ints", None)

    def __setattr__(self, name, value):
        raise AttributeError("UPoly is immutable")

    # construction helpers
    @classmethod
    def const(cls, c: Scalar) -> "UPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, deg: int, c: Scalar = 1) -> "UPoly":
        return cls([0] * deg + [c])

    @classmethod
    def x(cls) -> "UPoly":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> "UPoly":
        p = cls.const(1)
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    # basic queries
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _strip((other,))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"UPoly({self.to_str()})"

    def to_str(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if i == 0:
                body = str(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        s = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    # arithmetic
    def __neg__(self):
        return UPoly(-c for c in self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly(self[i] - other[i] for i in range(n))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out, base = UPoly.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        return poly_divmod(self, _as_poly(other))

    def __floordiv__(self, other):
        return poly_divmod(self, _as_poly(other))[0]

    def __mod__(self, other):
        return poly_divmod(self, _as_poly(other))[1]

    def scale(self, c: Scalar) -> "UPoly":
        c = Fraction(c)
        return UPoly(c * a for a in self.coeffs)

    def __call__(self, v):
        return self.eval(v)

    def eval(self, v):
        """Horner evaluation; exact for rational ``v``, floating for floats."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def eval_float(self, v: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * v + float(c)
        return acc

    def sign_at(self, v: Fraction) -> int:
        """Exact sign of ``self(v)`` using integer arithmetic only."""
        v = Fraction(v)
        n, d = v.numerator, v.denominator
        num = self.integer_coeffs()
        acc = 0
        dpow = 1
        # sum c_i n^i d^(deg-i), accumulated from the top down
        for c in reversed(num):
            acc = acc * n + c * dpow
            dpow *= d
        return (acc > 0) - (acc < 0)

    def derivative(self) -> "UPoly":
        return UPoly(i * self.coeffs[i] for i in range(1, len(self.coeffs)))

    def compose_scale(self, k: Scalar) -> "UPoly":
        """Return ``p(k*var)``."""
        k = Fraction(k)
        return UPoly(c * k**i for i, c in enumerate(self.coeffs))

    def shift(self, h: Scalar) -> "UPoly":
        """Return ``p(var + h)`` (Taylor shift)."""
        h = Fraction(h)
        out = UPoly()
        lin = UPoly((h, 1))
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def content(self) -> Fraction:
        """Positive rational content: self / content is a primitive integer polynomial."""
        if not self.coeffs:
            return Fraction(0)
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, int(c * den))
        return Fraction(g, den)

    def integer_coeffs(self) -> tuple:
        """Integer coefficients of a positive multiple of self (denominators cleared, no gcd removal)."""
        if self._ints is not None:
            return self._ints
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = tuple(int(c * den) for c in self.coeffs)
        object.__setattr__(self, "_ints", ints)
        return ints

    def primitive(self) -> "UPoly":
        """Primitive integer polynomial with positive leading coefficient."""
        if not self.coeffs:
            return self
        c = self.content()
        if self.lead() < 0:
            c = -c
        return UPoly(a / c for a in self.coeffs)

    def monic(self) -> "UPoly":
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no monic form")
        lc = self.lead()
        return UPoly(a / lc for a in self.coeffs)

    def as_int_list(self) -> list:
        """Coefficients as ints; requires integer coefficients."""
        out = []
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError("polynomial has non-integer coefficients")
            out.append(c.numerator)
        return out

    def trailing_zero_order(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return 0


def _as_poly(v):
    if isinstance(v, UPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return UPoly.const(v)
    return NotImplemented


def poly_mul(p: UPoly, q: UPoly) -> UPoly:
    if p.is_zero() or q.is_zero():
        return UPoly()
    out = [Fraction(0)] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return UPoly(out)


def poly_divmod(p: UPoly, q: UPoly) -> tuple:
    if q.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p.coeffs)
    dq = q.degree()
    lq = q.lead()
    if len(rem) - 1 < dq:
        return UPoly(), p
    quot = [Fraction(0)] * (len(rem) - dq)
    for k in range(len(rem) - 1 - dq, -1, -1):
        c = rem[k + dq] / lq
        quot[k] = c
        if c:
            for j in range(dq + 1):
                rem[k + j] -= c * q.coeffs[j]
    return UPoly(quot), UPoly(rem[:dq])


def exact_div(p: UPoly, q: UPoly) -> UPoly:
    """Divide ``p`` by ``q``; raise ArithmeticError if the remainder is nonzero."""
    quot, rem = poly_divmod(p, q)
    if not rem.is_zero():
        raise ArithmeticError(f"{q.to_str()} does not divide {p.to_str()}")
    return quot


def _pseudo_rem_primitive(a: UPoly, b: UPoly) -> UPoly:
    return poly_divmod(a, b)[1].primitive()


def poly_gcd(p: UPoly, q: UPoly) -> UPoly:
    """Monic gcd via the primitive Euclidean algorithm."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    a, b = p.primitive(), q.primitive()
    if a.degree() < b.degree():
        a, b = b, a
    while not b.is_zero():
        a, b = b, _pseudo_rem_primitive(a, b)
    return a.monic()


def squarefree_part(p: UPoly) -> UPoly:
    """``p / gcd(p, p')`` as a primitive integer polynomial, positive leading coefficient."""
    if p.is_zero():
        raise ValueError("square-free part of the zero polynomial")
    if p.degree() == 0:
        return UPoly.const(1)
    g = poly_gcd(p, p.derivative())
    return exact_div(p, g).primitive()


def is_squarefree(p: UPoly) -> bool:
    if p.degree() <= 0:
        return True
    return poly_gcd(p, p.derivative()).degree() == 0


def squarefree_decomposition(p: UPoly) -> list:
    """Yun's algorithm: list of (factor, multiplicity) with primitive factors."""
    if p.is_zero():
        raise ValueError("square-free decomposition of the zero polynomial")
    out = []
    if p.degree() == 0:
        return out
    a = p.primitive()
    b = a.derivative()
    c = poly_gcd(a, b)
    w = exact_div(a, c)
    y = exact_div(b, c)
    z = y - w.derivative()
    i = 1
    while w.degree() > 0:
        g = poly_gcd(w, z) if not z.is_zero() else w.monic()
        if g.degree() > 0:
            out.append((g.primitive(), i))
        w = exact_div(w, g)
        y = exact_div(z, g)
        z = y - w.derivative()
        i += 1
    return out


def cauchy_bound(p: UPoly) -> Fraction:
    """Strict upper bound on the absolute value of every complex root."""
    if p.degree() < 1:
        return Fraction(1)
    lc = abs(p.lead())
    return 1 + max(abs(c) / lc for c in p.coeffs[:-1])


# ---------------------------------------------------------------------------
# polynomials in x with coefficients in Q[s]


class XPoly:
    """Polynomial in an elimination variable x with :class:`UPoly` coefficients in s."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[UPoly] = ()):
        out = [c if isinstance(c, UPoly) else UPoly.const(c) for c in coeffs]
        while out and out[-1].is_zero():
            out.pop()
        object.__setattr__(self, "coeffs", tuple(out))

    def __setattr__(self, name, value):
        raise AttributeError("XPoly is immutable")

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> UPoly:
        return self.coeffs[-1] if self.coeffs else UPoly()

    def __eq__(self, other):
        return isinstance(other, XPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "XPoly(" + ", ".join(c.to_str("s") for c in self.coeffs) + ")"

    def at_s(self, s0) -> UPoly:
        """Specialize s -> s0; exact for rational s0."""
        return UPoly(c.eval(Fraction(s0)) for c in self.coeffs)

    def at_s_float(self, s0: float) -> list:
        return [c.eval_float(s0) for c in self.coeffs]

    def content(self) -> UPoly:
        """Gcd of the x-coefficients (a primitive polynomial in s)."""
        g = UPoly()
        for c in self.coeffs:
            if c.is_zero():
                continue
            g = c.primitive() if g.is_zero() else poly_gcd(g, c).primitive()
            if g.degree() == 0:
                return UPoly.const(1)
        return g

    def divide_content(self, g: UPoly) -> "XPoly":
        return XPoly(exact_div(c, g) for c in self.coeffs)


def _ip_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _ip_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _ip_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _ip_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _ip_exact_div(a: list, b: list) -> list:
    """Exact quotient in Z[s]; raises ArithmeticError if b does not divide a."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    if len(a) - 1 < db:
        if a:
            raise ArithmeticError("inexact integer polynomial division")
        return []
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c, r = divmod(a[k + db], lb)
        if r:
            raise ArithmeticError("inexact integer polynomial division")
        q[k] = c
        if c:
            for j in range(db + 1):
                a[k + j] -= c * b[j]
    if any(a[:db]):
        raise ArithmeticError("inexact integer polynomial division")
    return q


def _bareiss_det_int(m: list) -> list:
    """Fraction-free determinant over Z[s]; entries are int coefficient lists."""
    n = len(m)
    m = [row[:] for row in m]
    sign = 1
    prev = [1]
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return []
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            for j in range(k + 1, n):
                num = _ip_sub(_ip_mul(m[i][j], pivot), _ip_mul(mik, m[k][j]))
                m[i][j] = _ip_exact_div(num, prev) if num else []
            m[i][k] = []
        prev = pivot
    det = m[n - 1][n - 1]
    return [-c for c in det] if sign < 0 else det


def _xpoly_integer_scale(p: "XPoly") -> Fraction:
    den = 1
    for c in p.coeffs:
        for a in c.coeffs:
            den = den * a.denominator // math.gcd(den, a.denominator)
    return Fraction(den)


def sylvester_matrix(p: XPoly, q: XPoly) -> list:
    m, n = p.degree(), q.degree()
    size = m + n
    zero = UPoly()
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([zero] * i + pc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qc + [zero] * (size - n - 1 - i))
    return rows


def sylvester_resultant(p: XPoly, q: XPoly) -> UPoly:
    """Resultant with respect to x: determinant of the Sylvester matrix, a polynomial in s."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant with the zero polynomial")
    m, n = p.degree(), q.degree()
    if m == 0 and n == 0:
        return UPoly.const(1)
    if m == 0:
        return p.coeffs[0] ** n
    if n == 0:
        return q.coeffs[0] ** m
    # Res(lp, mq) = l^n m^m Res(p, q): clear denominators and work over Z[s]
    lp, lq = _xpoly_integer_scale(p), _xpoly_integer_scale(q)
    rows = sylvester_matrix(p, q)
    int_rows = []
    for r_idx, row in enumerate(rows):
        lam = lp if r_idx < n else lq
        int_rows.append([[int(a * lam) for a in c.coeffs] for c in row])
    det = UPoly(_bareiss_det_int(int_rows))
    return det.scale(1 / (lp**n * lq**m))


def scalar_resultant(p: UPoly, q: UPoly) -> Fraction:
    """Resultant of two rational univariate polynomials (Sylvester determinant)."""
    r = sylvester_resultant(XPoly(UPoly.const(c) for c in p.coeffs), XPoly(UPoly.const(c) for c in q.coeffs))
    return r[0]


# ---------------------------------------------------------------------------
# rational roots

_SMALL_FACTOR_LIMIT = 10**6


def _prime_factors(n: int) -> dict:
    n = abs(n)
    out: dict = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f, step = 7, (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f <= _SMALL_FACTOR_LIMIT:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += step[i % 8]
        i += 1
    if n > 1:
        if f * f > n:
            out[n] = out.get(n, 0) + 1
        else:
            from sympy.ntheory import factorint

            for pr, e in factorint(n).items():
                out[int(pr)] = out.get(int(pr), 0) + int(e)
    return out


def divisors(n: int) -> list:
    """Positive divisors of a nonzero integer, ascending."""
    if n == 0:
        raise ValueError("divisors of zero")
    fac = _prime_factors(n)
    primes = list(fac)
    out = []
    for exps in product(*(range(fac[p] + 1) for p in primes)):
        d = 1
        for p, e in zip(primes, exps):
            d *= p**e
        out.append(d)
    return sorted(out)


def rational_roots(p: UPoly) -> list:
    """All rational roots of ``p`` with multiplicity, ascending.

    Candidates are ``±u/v`` with ``u | a0`` and ``v | an`` of the primitive
    integer form; each reported root is confirmed by exact evaluation.
    """
    if p.is_zero():
        raise ValueError("rational roots of the zero polynomial")
    roots: list = []
    work = p.primitive()
    k = work.trailing_zero_order()
    if k:
        roots.extend([Fraction(0)] * k)
        work = UPoly(work.coeffs[k:])
    if work.degree() < 1:
        return roots
    ints = work.as_int_list()
    bound = cauchy_bound(work)
    lead_divs = divisors(ints[-1])
    const_divs = divisors(ints[0])
    candidates = set()
    for u in const_divs:
        for v in lead_divs:
            r = Fraction(u, v)
            if r < bound:
                candidates.add(r)
                candidates.add(-r)
    for r in sorted(candidates):
        while work.degree() >= 1 and work.sign_at(r) == 0:
            roots.append(r)
            work = exact_div(work, UPoly((-r, 1)))
    return sorted(roots)


def factor_over_q(p: UPoly) -> list:
    """Irreducible factorization over Q: list of (primitive factor, multiplicity).

    Constants are dropped. Backed by sympy's Zassenhaus factorizer.
    """
    if p.is_zero():
        raise ValueError("factorization of the zero polynomial")
    if p.degree() < 1:
        return []
    from sympy import Poly, Symbol

    ints = p.primitive().as_int_list()
    s = Symbol("s")
    _, facs = Poly(list(reversed(ints)), s).factor_list()
    out = []
    for f, m in facs:
        out.append((UPoly(reversed([int(c) for c in f.all_coeffs()])).primitive(), int(m)))
    out.sort(key=lambda fm: (fm[0].degree(), fm[0].as_int_list()))
    return out
