import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisectrix.exact_core import UPoly, squarefree_part
from bisectrix.realroots import (
    NotSquareFreeError,
    RootInterval,
    count_real_roots,
    isolate_real_roots,
    real_roots,
    refine,
    sign_variations_at_infinity,
    sturm_sequence,
)

CUBIC = UPoly([-570, 259, 74, 1])
t = UPoly.x()


def _total_count(p):
    chain = sturm_sequence(p)
    return sign_variations_at_infinity(chain, positive=False) - sign_variations_at_infinity(chain, positive=True)


@pytest.mark.parametrize("p, n", [(t * t - 2, 2), (t * t + 1, 0), (CUBIC, 3)])
def test_sturm_total_count(p, n):
    assert _total_count(p) == n


def test_sturm_rejects_repeated_roots():
    with pytest.raises(NotSquareFreeError):
        sturm_sequence((t - 1) ** 2)


def test_isolate_published_cubic():
    ivs = isolate_real_roots(CUBIC)
    assert len(ivs) == 3
    lo_hi = [(float(iv.lo), float(iv.hi)) for iv in ivs]
    refined = sorted(float(refine(iv, F(1, 10**6)).midpoint) for iv in ivs)
    assert -71 < refined[0] < -70 and -6 < refined[1] < -5 and 0 < refined[2] < 2
    assert all(lo < hi for lo, hi in lo_hi)


def test_isolate_no_real_roots():
    assert isolate_real_roots(t * t + 1) == []


def test_isolate_exact_rational_roots():
    ivs = isolate_real_roots(t * (t - 1) * (t + 1))
    mids = [refine(iv, F(1, 100)).midpoint for iv in ivs]
    assert [round(float(m)) for m in mids] == [-1, 0, 1]


def test_isolate_zero_raises():
    with pytest.raises(ValueError):
        isolate_real_roots(UPoly())


def test_refine_published_roots():
    ivs = isolate_real_roots(CUBIC)
    t1 = refine(ivs[2], F(1, 10**4))
    # derived by exact bisection: the positive root is 1.5237431740...
    assert abs(float(t1.midpoint) - 1.5237431741) <= 1e-4
    t2 = refine(ivs[1], F(1, 100))
    assert abs(float(t2.midpoint) - (-5.32)) <= 1e-2


def test_refine_exact_root_short_circuit():
    p = t * t - 4
    iv = RootInterval(F(1), F(3), p, -1, 1)
    r = refine(iv, F(1, 10**6))
    assert r.width <= F(1, 10**6) and r.contains(2)


def test_vieta_on_published_cubic():
    roots = [float(iv.midpoint) for iv in real_roots(CUBIC)]
    assert abs(sum(roots) - (-74)) <= 1e-6
    assert abs(np.prod(roots) - 570) <= 1e-3


def test_interval_invariant_enforced():
    with pytest.raises(ValueError):
        RootInterval(F(2), F(1), t, -1, 1)


def _sampled_sign_changes(p, bound, step=1e-3):
    xs = np.arange(-bound, bound + step, step)
    vals = np.polyval([float(c) for c in reversed(p.coeffs)], xs)
    sgn = np.sign(vals)
    return int(np.sum(sgn[:-1] * sgn[1:] < 0) + np.sum(sgn == 0))


@pytest.mark.parametrize("seed", range(15))
def test_count_matches_dense_sampling(seed):
    rng = random.Random(seed)
    roots = sorted(rng.sample(range(-400, 400), rng.randint(1, 5)))
    p = UPoly.from_roots([F(r, 100) for r in roots]) * UPoly([1, 0, 1])
    assert len(isolate_real_roots(p)) == count_real_roots(p) == _sampled_sign_changes(p, 5) == len(roots)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-8, 8), min_size=2, max_size=7).filter(lambda c: c[-1] != 0))
def test_refined_intervals_bracket(coeffs):
    p = squarefree_part(UPoly(coeffs))
    for iv in isolate_real_roots(p):
        r = refine(iv, F(1, 10**9))
        assert r.width <= F(1, 10**9)
        if not r.is_exact:
            assert p.sign_at(r.lo) * p.sign_at(r.hi) < 0
        else:
            assert p.eval(r.lo) == 0
        assert count_real_roots(p, iv.lo, iv.hi) == 1 or iv.is_exact


def test_isolating_intervals_disjoint():
    p = UPoly.from_roots([F(1, 3), F(1, 2), F(-7, 5), F(10)])
    ivs = isolate_real_roots(p)
    for a, b in zip(ivs, ivs[1:]):
        assert a.hi <= b.lo
