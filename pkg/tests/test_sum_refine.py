import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cfineq import sum_refine
from cfineq.errors import DegenerateInput, DomainError
from cfineq.sum_refine import HolderSpec, PowerMeanSpec

positive = st.floats(min_value=1e-3, max_value=1e3)
vectors = st.lists(positive, min_size=1, max_size=24)


def triple(s):
    return s.lower, s.middle, s.upper


def test_power_mean_examples():
    assert sum_refine.power_mean((3.0, 3.0, 3.0), (1, 2, 3), 2.7) == pytest.approx(3.0, rel=1e-15)
    assert sum_refine.power_mean((1, 2, 6), (1, 1, 2), 1.0) == pytest.approx(15 / 4, rel=1e-15)
    assert sum_refine.power_mean((1, 2), (1, 1), 2.0) == pytest.approx(math.sqrt(2.5), rel=1e-15)


def test_power_mean_sandwich_example():
    s, ctx = sum_refine.power_mean_sandwich(PowerMeanSpec((1, 2), (1, 1), 1, 2))
    # frozen from the 256-bit oracle
    assert ctx.A == pytest.approx(0.0711512473537885, rel=1e-12)
    assert (ctx.m, ctx.M) == pytest.approx((0.4, 1.6), rel=1e-15)
    assert triple(s) == pytest.approx((0.044469529596117836, 0.08113883008418966,
                                       0.17787811838447135), rel=1e-12)


def test_power_mean_equal_exponents_and_values():
    s, ctx = sum_refine.power_mean_sandwich(PowerMeanSpec((1, 5), (1, 1), 2, 2))
    assert triple(s) == (0.0, 0.0, 0.0) and ctx.A == 0.0
    s, _ = sum_refine.power_mean_sandwich(PowerMeanSpec((4, 4, 4), (1, 2, 3), 1, 3))
    assert triple(s) == (0.0, 0.0, 0.0)


def test_holder_examples():
    s, ctx = sum_refine.holder_sandwich(HolderSpec((1, 2), (2, 1), 2, 2))
    assert triple(s) == pytest.approx((0.5625, 1.0, 2.25), rel=1e-15)
    assert (ctx.A, ctx.m, ctx.M) == pytest.approx((0.45, 0.2, 0.8), rel=1e-15)
    s, ctx = sum_refine.holder_sandwich(HolderSpec((3,), (7,), 3))
    assert triple(s) == (0.0, 0.0, 0.0) and ctx.A == 0.0
    s, _ = sum_refine.holder_sandwich(HolderSpec((1, 2), (1, 2), 2, 2))
    assert triple(s) == (0.0, 0.0, 0.0)


def test_holder_conjugate_default_and_validation():
    assert HolderSpec((1,), (1,), 3).q == pytest.approx(1.5)
    with pytest.raises(DomainError):
        HolderSpec((1, 2), (1, 2), 3, 2)
    with pytest.raises(DomainError):
        HolderSpec((1, 2), (1, 2), 1.0)
    with pytest.raises(DomainError):
        HolderSpec((1, 2), (1,), 2)
    with pytest.raises(DomainError):
        HolderSpec((1, 0), (1, 2), 2)


def test_cauchy_examples():
    s, ctx = sum_refine.cauchy_sandwich((1, 2), (2, 1))
    assert s.middle == 9.0
    assert (s.lower, s.upper) == pytest.approx((4.81640625, 23.0625), rel=1e-15)
    s, _ = sum_refine.cauchy_sandwich((1, 2, 3), (2.5, 5, 7.5))
    assert triple(s) == (0.0, 0.0, 0.0)
    s, _ = sum_refine.cauchy_sandwich((4,), (9,))
    assert triple(s) == (0.0, 0.0, 0.0)


def test_bergstrom_examples():
    s, ctx = sum_refine.bergstrom_sandwich((1, 2), (1, 1))
    assert s.middle == 0.5
    assert ctx.A == pytest.approx(math.sqrt(10) / 8 * 0.18, rel=1e-14)
    assert (s.lower, s.upper) == pytest.approx((0.27077225570170704, 1.130549960306828), rel=1e-12)
    t, _ = sum_refine.bergstrom_sandwich((-1, 2), (1, 1))
    assert triple(t) == triple(s)
    z, _ = sum_refine.bergstrom_sandwich((2, 4, 6), (1, 2, 3))
    assert triple(z) == (0.0, 0.0, 0.0)


def test_bergstrom_zero_entries():
    s, ctx = sum_refine.bergstrom_sandwich((0.0, 2.0), (1.0, 1.0))
    assert ctx.m == 0.0 and s.upper == math.inf and s.ok
    with pytest.raises(DegenerateInput) as info:
        sum_refine.bergstrom_sandwich((0.0, 0.0), (1.0, 1.0))
    zero, _ = info.value.result
    assert triple(zero) == (0.0, 0.0, 0.0)


def test_holder_extreme_exponent_stays_finite():
    s, ctx = sum_refine.holder_sandwich(HolderSpec((0.001, 1000.0), (0.001, 5.0), 1.0001))
    assert s.ok and math.isfinite(s.middle)


@given(vectors, st.data(), st.floats(min_value=0.01, max_value=8.0),
       st.floats(min_value=0.0, max_value=8.0))
def test_power_mean_monotone_and_sandwich(values, data, r, ds):
    weights = data.draw(st.lists(st.floats(min_value=0.01, max_value=100.0),
                                 min_size=len(values), max_size=len(values)))
    s = min(r + ds, 8.0)
    mr = sum_refine.power_mean(values, weights, r)
    ms = sum_refine.power_mean(values, weights, s)
    assert mr <= ms * (1 + 1e-12)
    sand, _ = sum_refine.power_mean_sandwich(PowerMeanSpec(values, weights, r, s))
    assert sand.ok


@given(vectors, st.data(), st.floats(min_value=1.01, max_value=20.0))
def test_holder_cauchy_contain(avec, data, p):
    bvec = data.draw(st.lists(positive, min_size=len(avec), max_size=len(avec)))
    hs, _ = sum_refine.holder_sandwich(HolderSpec(avec, bvec, p))
    assert hs.ok
    cs, _ = sum_refine.cauchy_sandwich(avec, bvec)
    assert cs.ok


@given(st.lists(st.floats(min_value=-1e3, max_value=1e3), min_size=1, max_size=24), st.data())
def test_bergstrom_contains(xvec, data):
    avec = data.draw(st.lists(positive, min_size=len(xvec), max_size=len(xvec)))
    try:
        s, _ = sum_refine.bergstrom_sandwich(xvec, avec)
    except DegenerateInput:
        assert all(x == 0 for x in xvec)
        return
    assert s.ok


@given(vectors, st.data(), st.floats(min_value=1e-2, max_value=1e2))
def test_cauchy_scale_invariance_of_equality(avec, data, c):
    s, _ = sum_refine.cauchy_sandwich(avec, [c * a for a in avec])
    assert s.ok
    assert abs(s.middle) <= s.tol * 10
