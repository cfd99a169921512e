import random
from fractions import Fraction as F

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from bisectrix.bisector_system import (
    DegenerateInstanceError,
    InstanceSquaredSides,
    build_ground_truth_system,
    build_printed_system,
    eliminate_to_characteristic,
    outside_locus,
    rescale_to_t,
    residual,
    scaled_residual,
    solve_x_at,
)
from bisectrix.exact_core import UPoly
from bisectrix.geometry import cart_to_bary, embed_reference, forward_problem, tritangent_centers, INCENTER
from bisectrix.realroots import isolate_real_roots, refine

INST_497 = InstanceSquaredSides.exact_from(4, 9, 7)
EQUI = InstanceSquaredSides.exact_from(1, 1, 1)


def test_instance_validation():
    with pytest.raises(DegenerateInstanceError):
        InstanceSquaredSides.exact_from(1, 1, 4)
    with pytest.raises((DegenerateInstanceError, ValueError)):
        InstanceSquaredSides.exact_from(-1, 1, 1)
    assert INST_497.area16() == 2 * 36 + 2 * 63 + 2 * 28 - 16 - 81 - 49


def test_printed_e1_coefficients_497():
    E1 = build_printed_system(INST_497)[0]
    assert E1.terms == {(1, 2, 0): -7, (1, 0, 2): 9, (0, 2, 1): 2, (0, 1, 2): -6}


def test_printed_e2_coefficients_497():
    E2 = build_printed_system(INST_497)[1]
    assert E2.terms == {(2, 1, 0): 7, (0, 1, 2): -4, (1, 0, 2): 6, (2, 0, 1): -12}


def test_printed_e1_equilateral():
    E1 = build_printed_system(EQUI)[0]
    x, y, z = sp.symbols("x y z")
    expr = sum(c * x**i * y**j * z**k for (i, j, k), c in E1.terms.items())
    assert sp.expand(expr - (-x * (y**2 - z**2) + y * z * (y - z))) == 0


def test_printed_residual_examples():
    assert residual(build_printed_system(EQUI), (1, 1, 1)) == (0, 0, 0)
    assert residual(build_printed_system(INST_497), (0, 0, 0)) == (0, 0, 0)
    assert residual(build_printed_system(INST_497), (1, 1, 1))[0] == -2


def test_ground_truth_equilateral_zero_and_locus():
    gt = build_ground_truth_system(EQUI)
    assert residual(gt, (1, 1, 1)) == (0, 0, 0)
    assert outside_locus((1, 0, 0))
    assert not outside_locus((1, 2, 3))


def _sympy_form(f):
    x, y, z = sp.symbols("x y z")
    return sum(c * x**i * y**j * z**k for (i, j, k), c in f.terms.items()), (x, y, z)


@pytest.mark.parametrize("sq", [(4, 9, 7), (5, 6, 7), (25, 16, 9)])
def test_ground_truth_contains_printed_factor(sq):
    # each first-principles sextic is E_i times factors that never vanish on the solution locus
    inst = InstanceSquaredSides.exact_from(*sq)
    for e, g in zip(build_printed_system(inst), build_ground_truth_system(inst)):
        ge, xs = _sympy_form(g)
        pe, _ = _sympy_form(e)
        q, r = sp.div(sp.Poly(ge, *xs), sp.Poly(pe, *xs))
        assert r.is_zero


rational = st.fractions(min_value=-30, max_value=30, max_denominator=20)


@settings(max_examples=30, deadline=None)
@given(rational, rational, rational, rational.filter(lambda v: v != 0))
def test_homogeneity(x, y, z, lam):
    for f in build_printed_system(INST_497) + build_ground_truth_system(INST_497):
        assert f.is_homogeneous()
        assert f(lam * x, lam * y, lam * z) == lam**f.degree * f(x, y, z)


def _incenter_bary(tri):
    fr = forward_problem(tri)
    ref = embed_reference(fr.instance)
    inc = fr.to_canonical.apply(tritangent_centers(fr.triangle)[INCENTER])
    return fr.instance, tuple(cart_to_bary(ref, inc))


@pytest.mark.parametrize("seed", range(8))
def test_printed_system_vanishes_at_true_incenter(seed):
    rng = np.random.default_rng(seed)
    tri = rng.normal(size=(3, 2))
    inst, point = _incenter_bary(tri)
    assert scaled_residual(build_printed_system(inst), point) < 1e-9
    assert scaled_residual(build_ground_truth_system(inst), point) < 1e-9


def test_worked_instance_characteristic():
    # derived: the instance (4, 9, 7) gives a cubic with a single real root
    for system in ("printed", "ground-truth"):
        cp = eliminate_to_characteristic(INST_497, system)
        assert cp.poly == UPoly([14, 11, -66, 45])
        assert cp.chart == "y"


def test_right_triangle_characteristic():
    inst = InstanceSquaredSides.exact_from(25, 16, 9)
    for system in ("printed", "ground-truth"):
        assert eliminate_to_characteristic(inst, system).poly == UPoly([33, -192, 208])


def test_equilateral_branch_kept():
    for system in ("printed", "ground-truth"):
        cp = eliminate_to_characteristic(EQUI, system)
        assert cp.poly == UPoly([-1, 1])
        assert cp.poly.eval(1) == 0


def test_generic_instance_is_quartic():
    cp = eliminate_to_characteristic(InstanceSquaredSides.exact_from(5, 6, 7))
    assert cp.degree == 4


def test_elimination_needs_exact_instance():
    with pytest.raises(ValueError):
        eliminate_to_characteristic(InstanceSquaredSides.numeric_from(4.0, 9.0, 7.0))


@pytest.mark.parametrize(
    "p, k, want",
    [
        (UPoly([-3, 1]), 3, UPoly([-1, 1])),
        (UPoly([0, 0, 1]), 3, UPoly([0, 0, 1])),
        (UPoly([-190, 259, 222, 9]), F(1, 3), UPoly([-570, 259, 74, 1])),
    ],
)
def test_rescale_to_t(p, k, want):
    assert rescale_to_t(p, k) == want


def test_rescale_errors():
    with pytest.raises(ValueError):
        rescale_to_t(UPoly([1, 1]), 0)
    with pytest.raises(ValueError):
        rescale_to_t(UPoly(), 3)


@pytest.mark.parametrize("lam", [F(2), F(1, 3), F(7, 5)])
@pytest.mark.parametrize("sq", [(4, 9, 7), (5, 6, 7)])
def test_side_scaling_invariance(sq, lam):
    base = eliminate_to_characteristic(InstanceSquaredSides.exact_from(*sq)).poly
    scaled = eliminate_to_characteristic(InstanceSquaredSides.exact_from(*(lam**2 * v for v in sq))).poly
    assert scaled == base


def _solutions(inst):
    cp = eliminate_to_characteristic(inst)
    forms = build_ground_truth_system(inst.numeric_from(*inst.as_floats()))
    out = []
    for iv in isolate_real_roots(cp.poly):
        s = float(refine(iv, F(1, 10**13)).midpoint)
        x, res = solve_x_at(forms, s)
        out.append((x, 1.0, s))
    return out


def test_relabeling_equivariance():
    # swapping a and b swaps x and y: (x : 1 : s) -> (1 : x : s) = (1/x : 1 : s/x)
    sols = _solutions(InstanceSquaredSides.exact_from(4, 9, 19))
    swapped = _solutions(InstanceSquaredSides.exact_from(9, 4, 19))
    mapped = sorted((1 / x, s / x) for x, _, s in sols)
    got = sorted((x, s) for x, _, s in swapped)
    assert len(mapped) == len(got) == 3
    for (x1, s1), (x2, s2) in zip(mapped, got):
        assert x1 == pytest.approx(x2, rel=1e-9) and s1 == pytest.approx(s2, rel=1e-9)


@pytest.mark.parametrize("sq", [(4, 9, 7), (4, 9, 19), (5, 6, 7), (2, 3, 4), (10, 11, 3)])
def test_elimination_soundness(sq):
    inst = InstanceSquaredSides.exact_from(*sq)
    forms = build_printed_system(inst.numeric_from(*inst.as_floats()))
    for x, y, s in _solutions(inst):
        assert scaled_residual(forms, (x, y, s)) <= 1e-9


@pytest.mark.parametrize("seed", range(6))
def test_elimination_completeness_against_oracle(seed):
    rng = np.random.default_rng(100 + seed)
    inst, (u, v, w) = _incenter_bary(rng.normal(size=(3, 2)))
    exact = inst.to_exact()
    cp = eliminate_to_characteristic(exact)
    roots = [float(refine(iv, F(1, 10**12)).midpoint) for iv in isolate_real_roots(cp.poly)]
    assert min(abs(r - w / v) for r in roots) <= 1e-7 * max(1.0, abs(w / v))


def test_syzygy_on_common_zeros():
    rng = random.Random(5)
    for _ in range(5):
        while True:
            sq = [rng.randint(1, 30) for _ in range(3)]
            try:
                inst = InstanceSquaredSides.exact_from(*sq)
                break
            except DegenerateInstanceError:
                continue
        E1, E2, E3 = build_printed_system(inst.numeric_from(*inst.as_floats()))
        for x, y, s in _solutions(inst):
            if abs(x * y * s) > 1e-6:
                assert E3.scaled_abs((x, y, s)) <= 1e-9
