"""Cartesian embedding, barycentric conversions and tritangent classification.

The reference triangle ABC is placed at A = (0, 0), B = (c, 0) with C in
the upper half plane. Everything here is floating point; exactness lives in
the algebraic pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .bisector_system import (
    DegenerateInstanceError,
    InstanceSquaredSides,
    build_printed_system,
    scaled_residual,
)

CLASSIFY_TOL = 1e-6
ACCEPT_TOL = 1e-8

INCENTER = "Incenter"
EXCENTERS = ("ExcenterOppositeA'", "ExcenterOppositeB'", "ExcenterOppositeC'")
INVALID = "Invalid"


class DegenerateTriangleError(ValueError):
    pass


class PointAtInfinityError(ValueError):
    pass


@dataclass(frozen=True)
class CartesianPoint:
    px: float
    py: float

    def __post_init__(self):
        if not (math.isfinite(self.px) and math.isfinite(self.py)):
            raise ValueError("Cartesian coordinates must be finite")

    def __iter__(self):
        yield self.px
        yield self.py

    def as_array(self) -> np.ndarray:
        return np.array([self.px, self.py])

    @classmethod
    def of(cls, v) -> "CartesianPoint":
        return cls(float(v[0]), float(v[1]))


@dataclass(frozen=True)
class BarycentricPoint:
    u: object
    v: object
    w: object

    def __post_init__(self):
        if self.u == 0 and self.v == 0 and self.w == 0:
            raise ValueError("(0, 0, 0) is not a barycentric point")

    def __iter__(self):
        yield self.u
        yield self.v
        yield self.w

    @property
    def total(self):
        return self.u + self.v + self.w

    def normalized(self) -> "BarycentricPoint":
        t = self.total
        if t == 0:
            raise PointAtInfinityError("point at infinity has no normalized form")
        return BarycentricPoint(self.u / t, self.v / t, self.w / t)


Triangle = Tuple[CartesianPoint, CartesianPoint, CartesianPoint]


def embed_reference(inst: InstanceSquaredSides) -> Triangle:
    a2, b2, c2 = inst.as_floats()
    if not inst.area16() > 0:
        raise DegenerateInstanceError("degenerate instance")
    c = math.sqrt(c2)
    xc = (b2 + c2 - a2) / (2 * c)
    yc2 = b2 - xc * xc
    if yc2 <= 0:
        raise DegenerateInstanceError("degenerate instance")
    return (CartesianPoint(0.0, 0.0), CartesianPoint(c, 0.0), CartesianPoint(xc, math.sqrt(yc2)))


def bary_to_cart(ref: Triangle, p) -> CartesianPoint:
    u, v, w = (float(t) for t in p)
    tot = u + v + w
    scale = max(abs(u), abs(v), abs(w))
    if scale == 0 or abs(tot) <= 1e-14 * scale:
        raise PointAtInfinityError(f"barycentric point {tuple(p)} lies at infinity")
    A, B, C = ref
    return CartesianPoint((u * A.px + v * B.px + w * C.px) / tot, (u * A.py + v * B.py + w * C.py) / tot)


def cart_to_bary(ref: Triangle, p) -> BarycentricPoint:
    A, B, C = ref
    m = np.array([[A.px, B.px, C.px], [A.py, B.py, C.py], [1.0, 1.0, 1.0]])
    px, py = (float(v) for v in tuple(p))
    u, v, w = np.linalg.solve(m, [px, py, 1.0])
    return BarycentricPoint(float(u), float(v), float(w))


def angle_at(P, Q, R) -> float:
    """Angle QPR in degrees."""
    v1 = np.subtract(tuple(Q), tuple(P))
    v2 = np.subtract(tuple(R), tuple(P))
    cosang = float(np.dot(v1, v2) / (np.linalg.norm(v1) * np.linalg.norm(v2)))
    return math.degrees(math.acos(max(-1.0, min(1.0, cosang))))


def recover_vertices(center) -> Tuple[BarycentricPoint, BarycentricPoint, BarycentricPoint]:
    """A' = (-x, y, z), B' = (x, -y, z), C' = (x, y, -z)."""
    x, y, z = center
    if x == 0 or y == 0 or z == 0:
        raise DegenerateTriangleError("center with a zero coordinate gives a degenerate cevian configuration")
    return BarycentricPoint(-x, y, z), BarycentricPoint(x, -y, z), BarycentricPoint(x, y, -z)


def _side_lengths(T) -> Tuple[float, float, float]:
    P, Q, R = (np.asarray(tuple(v), dtype=float) for v in T)
    return float(np.linalg.norm(Q - R)), float(np.linalg.norm(R - P)), float(np.linalg.norm(P - Q))


def _area2(T) -> float:
    (x1, y1), (x2, y2), (x3, y3) = (tuple(v) for v in T)
    return (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)


def diameter(T) -> float:
    return max(_side_lengths(T))


def _check_nondegenerate(T, rel: float = 1e-12):
    d = diameter(T)
    if not d > 0 or abs(_area2(T)) <= rel * d * d:
        raise DegenerateTriangleError("degenerate triangle")


def bisector_feet(T, external: Sequence[bool] = (False, False, False)) -> Triangle:
    """Feet of the angle bisectors of T = (P, Q, R) on the opposite side lines.

    The internal foot from P divides QR as |PQ| : |PR|, i.e. it is
    (b*Q + c*R)/(b + c) with b = |RP|, c = |PQ|. ``external[i]`` switches
    vertex i to its external bisector, whose foot is (b*Q - c*R)/(b - c).
    """
    _check_nondegenerate(T)
    pts = [np.asarray(tuple(v), dtype=float) for v in T]
    a, b, c = _side_lengths(T)
    lengths = (a, b, c)
    feet = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        wj, wk = lengths[j], lengths[k]
        if external[i]:
            den = wj - wk
            if abs(den) <= 1e-15 * max(wj, wk):
                raise PointAtInfinityError("external bisector parallel to the opposite side")
            f = (wj * pts[j] - wk * pts[k]) / den
        else:
            f = (wj * pts[j] + wk * pts[k]) / (wj + wk)
        feet.append(CartesianPoint.of(f))
    return tuple(feet)


def tritangent_centers(T) -> dict:
    """Incenter and the three excenters of T, keyed by classification label."""
    _check_nondegenerate(T)
    pts = [np.asarray(tuple(v), dtype=float) for v in T]
    a, b, c = _side_lengths(T)
    out = {}
    for label, sgn in ((INCENTER, (1, 1, 1)), (EXCENTERS[0], (-1, 1, 1)), (EXCENTERS[1], (1, -1, 1)), (EXCENTERS[2], (1, 1, -1))):
        w = (sgn[0] * a, sgn[1] * b, sgn[2] * c)
        out[label] = CartesianPoint.of((w[0] * pts[0] + w[1] * pts[1] + w[2] * pts[2]) / sum(w))
    return out


_EXTERNAL_PATTERN = {
    INCENTER: (False, False, False),
    EXCENTERS[0]: (False, True, True),
    EXCENTERS[1]: (True, False, True),
    EXCENTERS[2]: (True, True, False),
}


@dataclass(frozen=True)
class TriangleSolution:
    center: BarycentricPoint
    vertices_bary: Tuple[BarycentricPoint, ...]
    vertices: Tuple[CartesianPoint, ...]
    side_lengths: Tuple[float, float, float]
    classification: str
    feet_residual: float
    center_cart: Optional[CartesianPoint] = None
    match_distance: float = math.inf
    system_residual: float = math.inf
    diagnostics: Tuple[str, ...] = ()

    @property
    def is_incenter(self) -> bool:
        return self.classification == INCENTER

    @property
    def is_excenter(self) -> bool:
        return self.classification in EXCENTERS

    @property
    def diameter(self) -> float:
        return max(self.side_lengths) if self.side_lengths else 0.0


def _invalid(center, reason: str, **kw) -> TriangleSolution:
    return TriangleSolution(
        center=center,
        vertices_bary=kw.get("vertices_bary", ()),
        vertices=kw.get("vertices", ()),
        side_lengths=kw.get("side_lengths", (0.0, 0.0, 0.0)),
        classification=INVALID,
        feet_residual=kw.get("feet_residual", math.inf),
        center_cart=kw.get("center_cart"),
        match_distance=kw.get("match_distance", math.inf),
        system_residual=kw.get("system_residual", math.inf),
        diagnostics=(reason,),
    )


def classify_point(inst: InstanceSquaredSides, point, tol: float = CLASSIFY_TOL) -> TriangleSolution:
    """Recover A'B'C' from a center ``(x : y : z)`` and name the tritangent center it is."""
    x, y, z = (float(v) for v in point)
    center = BarycentricPoint(x, y, z)
    sys_res = scaled_residual(build_printed_system(inst.__class__.numeric_from(*inst.as_floats())), (x, y, z))
    try:
        ref = embed_reference(inst)
        vb = recover_vertices(center)
        verts = tuple(bary_to_cart(ref, v) for v in vb)
        center_cart = bary_to_cart(ref, center)
    except (DegenerateTriangleError, PointAtInfinityError) as exc:
        return _invalid(center, str(exc), system_residual=sys_res)
    sides = _side_lengths(verts)
    try:
        _check_nondegenerate(verts)
        centers = tritangent_centers(verts)
    except DegenerateTriangleError as exc:
        return _invalid(center, str(exc), vertices_bary=vb, vertices=verts, side_lengths=sides, system_residual=sys_res)
    diam = max(sides)
    c0 = center_cart.as_array()
    dists = sorted((float(np.linalg.norm(c.as_array() - c0)), label) for label, c in centers.items())
    (d1, label), (d2, _) = dists[0], dists[1]
    common = dict(vertices_bary=vb, vertices=verts, side_lengths=sides, center_cart=center_cart,
                  match_distance=d1, system_residual=sys_res)
    if d1 > tol * diam:
        return _invalid(center, f"no tritangent center within {tol:g} x diameter (nearest {d1 / diam:.3g})", **common)
    if d2 < 2 * d1:
        return _invalid(center, "ambiguous tritangent match", **common)
    try:
        feet = bisector_feet(verts, _EXTERNAL_PATTERN[label])
    except (PointAtInfinityError, DegenerateTriangleError) as exc:
        return _invalid(center, str(exc), **common)
    feet_res = max(float(np.linalg.norm(f.as_array() - r.as_array())) for f, r in zip(feet, ref))
    if feet_res > tol * diam:
        return _invalid(center, f"bisector feet miss the reference vertices by {feet_res:.3g}",
                        feet_residual=feet_res, **common)
    return TriangleSolution(
        center=center,
        vertices_bary=vb,
        vertices=verts,
        side_lengths=sides,
        classification=label,
        feet_residual=feet_res,
        center_cart=center_cart,
        match_distance=d1,
        system_residual=sys_res,
    )


class RecoveryError(ArithmeticError):
    """No consistent x for a characteristic root: the elimination filter let a spurious root through."""


def _printed_x_coeffs(inst, s: float):
    a2, b2, c2 = inst.as_floats()
    # E1(x, 1, s) = lin * x + c1 ;  E2(x, 1, s) = q2 x^2 + q1 x + q0
    lin = -(c2 - b2 * s * s)
    c1 = s * ((c2 + a2 - b2) - (a2 + b2 - c2) * s)
    q2 = c2 - (b2 + c2 - a2) * s
    q1 = (a2 + b2 - c2) * s * s
    q0 = -a2 * s * s
    return lin, c1, q2, q1, q0


def recover_center_from_root(inst: InstanceSquaredSides, s, chart: str = "y") -> BarycentricPoint:
    """Center ``(x : 1 : s)`` for a characteristic root ``s``.

    x comes from the linear occurrence in E1; when its coefficient
    c2 - b2 s^2 vanishes, the quadratic E2 supplies x instead. One Newton step
    on (E1, E2) in (x, s) polishes the pair.
    """
    if chart != "y":
        return _recover_generic(inst, float(s), chart)
    s = float(s)
    forms = build_printed_system(inst.numeric_from(*inst.as_floats()))
    lin, c1, q2, q1, q0 = _printed_x_coeffs(inst, s)
    cands = []
    if abs(lin) > 1e-9 * max(abs(c1), inst.as_floats()[2]):
        cands.append(-c1 / lin)
    else:
        if q2 != 0:
            disc = q1 * q1 - 4 * q2 * q0
            if disc >= -1e-12 * max(q1 * q1, abs(4 * q2 * q0), 1e-300):
                r = math.sqrt(max(disc, 0.0))
                cands += [(-q1 + r) / (2 * q2), (-q1 - r) / (2 * q2)]
        elif q1 != 0:
            cands.append(-q0 / q1)
    best = None
    for xv in cands:
        if xv == 0:
            continue
        res = scaled_residual(forms, (xv, 1.0, s))
        if best is None or res < best[1]:
            best = (xv, res)
    if best is None:
        raise RecoveryError(f"no real x with xyz != 0 for s = {s!r}")
    x, res = best
    x, s = _newton_polish(forms, x, s)
    res = scaled_residual(forms, (x, 1.0, s))
    if res > 1e-6:
        raise RecoveryError(f"root s = {s!r} has no consistent x (residual {res:.3g})")
    return BarycentricPoint(x, 1.0, s)


def _newton_polish(forms, x: float, s: float) -> Tuple[float, float]:
    E1, E2 = forms[0], forms[1]

    def f(v):
        return np.array([float(E1.evaluate((v[0], 1.0, v[1]))), float(E2.evaluate((v[0], 1.0, v[1])))])

    v = np.array([x, s], dtype=float)
    h = 1e-7 * max(1.0, float(np.max(np.abs(v))))
    fv = f(v)
    jac = np.empty((2, 2))
    for i in range(2):
        dv = np.zeros(2)
        dv[i] = h
        jac[:, i] = (f(v + dv) - f(v - dv)) / (2 * h)
    try:
        step = np.linalg.solve(jac, fv)
    except np.linalg.LinAlgError:
        return x, s
    cand = v - step
    if np.all(np.isfinite(cand)) and np.max(np.abs(f(cand))) <= np.max(np.abs(fv)):
        return float(cand[0]), float(cand[1])
    return x, s


def _recover_generic(inst, s: float, chart: str) -> BarycentricPoint:
    from .bisector_system import solve_x_at

    forms = build_printed_system(inst.numeric_from(*inst.as_floats()))
    x, res = solve_x_at(forms, s, chart)
    if x is None or res > 1e-6:
        raise RecoveryError(f"root s = {s!r} has no consistent x in chart {chart}")
    return BarycentricPoint(x, s, 1.0) if chart == "z" else BarycentricPoint(x, 1.0, s)


def classify_root(inst: InstanceSquaredSides, s, chart: str = "y", tol: float = CLASSIFY_TOL) -> TriangleSolution:
    try:
        center = recover_center_from_root(inst, s, chart)
    except RecoveryError as exc:
        pt = (1.0, 1.0, float(s)) if chart == "y" else (1.0, float(s), 1.0)
        return _invalid(BarycentricPoint(*pt), str(exc))
    return classify_point(inst, tuple(center), tol=tol)


# ---------------------------------------------------------------------------
# forward problem


@dataclass(frozen=True)
class Similarity:
    """Map p -> R @ p + t with R orthogonal times a positive scale (reflection allowed)."""

    matrix: np.ndarray
    offset: np.ndarray

    def apply(self, p) -> CartesianPoint:
        return CartesianPoint.of(self.matrix @ np.asarray(tuple(p), dtype=float) + self.offset)

    def apply_all(self, pts) -> tuple:
        return tuple(self.apply(p) for p in pts)


@dataclass(frozen=True)
class ForwardResult:
    instance: InstanceSquaredSides
    feet: Triangle
    to_canonical: Similarity
    triangle: Triangle

    def canonical_triangle(self) -> Triangle:
        return self.to_canonical.apply_all(self.triangle)


def forward_problem(T) -> ForwardResult:
    """Bisector-feet triangle of T as an instance, plus the map into its canonical embedding."""
    T = tuple(CartesianPoint.of(tuple(v)) for v in T)
    feet = bisector_feet(T)
    FA, FB, FC = (f.as_array() for f in feet)
    a2 = float(np.sum((FB - FC) ** 2))
    b2 = float(np.sum((FC - FA) ** 2))
    c2 = float(np.sum((FA - FB) ** 2))
    inst = InstanceSquaredSides.numeric_from(a2, b2, c2)
    e1 = (FB - FA) / math.sqrt(c2)
    e2 = np.array([-e1[1], e1[0]])
    if np.dot(FC - FA, e2) < 0:
        e2 = -e2
    rot = np.vstack([e1, e2])
    sim = Similarity(rot, -rot @ FA)
    return ForwardResult(inst, feet, sim, T)
