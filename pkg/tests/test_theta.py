import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from epzeta import theta
from epzeta.errors import DomainError


def _direct_theta3(t, n=30):
    k = np.arange(-n, n + 1)
    return np.exp(-math.pi * k * k * t).sum()


def test_theta3_values():
    assert theta.theta3(1.0) == pytest.approx(1.086434811213308, rel=1e-15)
    assert theta.theta3(1.0) == pytest.approx(_direct_theta3(1.0), rel=1e-15)
    assert theta.theta3(0.25) == pytest.approx(2.0 * theta.theta3(4.0), rel=1e-15)
    # 2 e^{-30 pi} ~ 1e-41: the correction vanishes in double precision
    assert theta.theta3(30.0) == 1.0
    assert 2 * math.exp(-30 * math.pi) < 1e-40


def test_theta4_values(mp):
    assert theta.theta4(1.0) == pytest.approx(float(mp.jtheta(4, 0, mp.exp(-mp.pi))), rel=1e-15)
    assert theta.theta4(30.0) == 1.0
    # theta3(q) = [theta3(q^{1/4}) + theta4(q^{1/4})] / 2 at q = e^{-pi}
    assert theta.theta3(1.0) == pytest.approx(0.5 * (theta.theta3(0.25) + theta.theta4(0.25)), rel=1e-14)
    for t in (0.05, 0.2, 0.7, 3.0):
        ref = float(mp.jtheta(4, 0, mp.exp(-mp.pi * t)))
        assert theta.theta4(t) == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize("f", [theta.theta3, theta.theta4])
def test_domain(f):
    with pytest.raises(DomainError):
        f(0.0)
    with pytest.raises(DomainError):
        f(-1.0)


def test_modular_identity():
    t = np.random.default_rng(3).uniform(0.01, 100, 100)
    lhs = theta.theta3(t) * np.sqrt(t)
    rhs = theta.theta3(1.0 / t)
    assert np.max(np.abs(lhs / rhs - 1)) < 1e-13


def test_theta_diff_examples():
    assert theta.theta_diff(0.3, 0.0) == 0.0
    t, d = 0.05, 3.0
    lead = 2 * d * t ** (-1.5) * math.exp(-math.pi / t)
    assert theta.theta_diff(t, d) / lead == pytest.approx(1.0, abs=1e-8)
    a = theta.theta_diff(0.5, 7.3, "direct")
    b = theta.theta_diff(0.5, 7.3, "modular")
    assert abs(a / b - 1) < 1e-13


@given(st.floats(0.2, 5.0), st.floats(0.1, 30.0))
def test_regimes_agree(t, d):
    a = theta.theta_diff(t, d, "direct")
    b = theta.theta_diff(t, d, "modular")
    # the direct form subtracts two numbers of size t^{-d/2}
    assert abs(a - b) <= 1e-13 * abs(b) + 4e-16 * (1 + d) * t ** (-0.5 * d)


@given(st.floats(1e-3, 1.0), st.floats(1e-3, 200.0))
def test_positive_and_log_consistent(t, d):
    logmag, sign = theta.log_theta_diff(t, d)
    assert sign == 1.0
    assert np.isfinite(logmag)
    if -700 < logmag < 700:
        v = theta.theta_diff(t, d)
        assert v > 0
        assert math.log(v) == pytest.approx(float(logmag), abs=1e-12 * max(1.0, abs(logmag)))


def test_large_d_no_overflow():
    logmag, _ = theta.log_theta_diff(np.array([1e-3, 0.01]), 200.0)
    assert np.all(np.isfinite(logmag))


def test_truncation_is_below_rounding():
    # the first omitted term relative to the retained ones at the switch point
    n = theta._N_TERMS + 1
    assert 2 * math.exp(-math.pi * n * n) < np.finfo(float).eps * 1e-50
    x = np.array([1.0, 1.5, 7.0])
    more = 2.0 * np.exp(-math.pi * np.multiply.outer(x, np.arange(1, n + 1) ** 2)).sum(axis=-1)
    assert np.array_equal(theta._tail_sum(x), more)


def test_dd_matches_finite_difference():
    t = np.array([0.03, 0.2, 0.6, 1.0])
    assert np.allclose(theta.theta_diff_dd(t, 0.0), np.log(theta.theta3(t) * np.sqrt(t)), rtol=1e-13)
    h = 1e-5
    for d in (1.5, 6.0):
        fd = (theta.theta_diff(t, d + h) - theta.theta_diff(t, d - h)) / (2 * h)
        assert np.allclose(theta.theta_diff_dd(t, d), fd, rtol=1e-8, atol=0)
