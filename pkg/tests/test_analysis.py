import math

import numpy as np
import pytest

from epzeta import analysis, specfun
from epzeta.errors import DomainError
from epzeta.quadrature import completed_contour
from epzeta.zeros import find_critical_zeros, scale
from epzeta.zeta import completed_epstein

C = specfun.CONSTANTS


def test_d0_sum_rules_at_small_d():
    assert abs(analysis.sum_rule_rhs(1e-6, 1)) < 1e-5
    assert abs(analysis.sum_rule_rhs(1e-6, 3)) < 1e-5
    closed = analysis.d0_sum_rule_closed_form()
    assert analysis.sum_rule_rhs(1e-6, 2) == pytest.approx(closed, abs=1e-6)


def test_d0_sum_rule_exact_limit():
    closed = analysis.d0_sum_rule_closed_form()
    assert closed == pytest.approx(0.5 * C.euler_gamma0 ** 2 - math.pi ** 2 / 16 + math.log(2) ** 2
                                   + C.stieltjes_gamma1, abs=1e-16)
    assert analysis.sum_rule_limit_d0(2) == pytest.approx(closed, abs=1e-12)
    assert analysis.sum_rule_limit_d0(1) == analysis.sum_rule_limit_d0(3) == 0.0


def test_sum_rule_domain():
    with pytest.raises(DomainError):
        analysis.sum_rule_rhs(0.0, 1)
    with pytest.raises(DomainError):
        analysis.sum_rule_rhs(2.0, 4)


def test_d0_partial_sums_lattice():
    target = -0.5 + math.log(2) ** 2
    errs = [abs(analysis.d0_partial_sums(2, 1, k, part="lattice") - target) for k in (10, 100, 1000, 100000)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 2e-7


@pytest.mark.parametrize("n", [1, 7, 100])
def test_d0_partial_sums_order1_pairs_cancel(n):
    assert abs(analysis.d0_partial_sums(1, n, n)) < 1e-15
    assert abs(analysis.d0_partial_sums(3, n, n)) < 1e-15


def test_d0_partial_sums_riemann_tail():
    g = specfun.riemann_zeta_zeros(1000)
    target = 0.5 * C.euler_gamma0 ** 2 + 0.5 - math.pi ** 2 / 16 + C.stieltjes_gamma1
    partial = analysis.d0_partial_sums(2, 1000, 1, part="riemann").real
    tail = analysis.riemann_tail_order2(g[-1])
    assert abs(partial + tail - target) < 0.02 * abs(tail)
    # the full truncated spectrum reproduces the sum rule once the tail is added back
    full = analysis.d0_partial_sums(2, 1000, 100000).real
    assert abs(full + tail - analysis.d0_sum_rule_closed_form()) < 3e-5


def test_d0_partial_sums_guards():
    with pytest.raises(DomainError):
        analysis.d0_partial_sums(2, 0, 10)
    with pytest.raises(DomainError):
        analysis.d0_partial_sums(4, 10, 10)


def test_sum_rule_monotone_d2():
    target = analysis.sum_rule_rhs(2.0, 1)
    zeros = find_critical_zeros(2.0, 0.5, 45.0)
    assert all(z.kind == "critical" for z in zeros)
    cutoffs = [15, 25, 35, 45]
    sums = [analysis.critical_partial_sum([z for z in zeros if z.rho_y <= y], 1).real for y in cutoffs]
    assert all(b > a for a, b in zip(sums, sums[1:]))
    gaps = [target - v for v in sums]
    assert all(g > 0 for g in gaps)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_sum_rule_report():
    r = analysis.sum_rule_report(2.0, 2, y_max=30.0)
    assert r.pairing == "conjugate_pairs" and r.order == 2
    assert r.zeros_used == 2 * len(find_critical_zeros(2.0, 0.01, 30.0))
    assert abs(r.partial_sum.imag) < 1e-15


def test_equidistant_levels():
    lv = analysis.equidistant_levels(50.0, 5)
    assert lv[0] == pytest.approx(math.pi / math.log(50 / (4 * math.pi)), rel=1e-15)
    assert lv[0] == pytest.approx(2.2748, abs=1e-4)
    assert np.allclose(np.diff(lv), 2 * math.pi / math.log(50 / (4 * math.pi)), rtol=1e-14)
    with pytest.raises(DomainError):
        analysis.equidistant_levels(4 * math.pi, 3)


def test_level_spacing_improves_with_d():
    def spacing_error(d):
        y = [z.rho_y for z in find_critical_zeros(d, 0.01, 20.0)][:4]
        lv = analysis.equidistant_levels(d, 1)
        return abs(np.mean(np.diff(y)) / (lv[1] - lv[0]) - 1)

    e50, e80 = spacing_error(50.0), spacing_error(80.0)
    assert e50 < 0.10
    assert e80 < e50


def test_dc_star():
    assert analysis.find_dc_star() == pytest.approx(9.2455524667456, abs=1e-8)


@pytest.mark.parametrize("d,x", [(10.0, 2.17985543147), (12.0, 0.7951625733), (20.0, 0.0127182144)])
def test_real_pair(d, x):
    a, b = analysis.real_pair(d)
    assert a + b == d
    assert a == pytest.approx(x, abs=1e-8)
    for r in (a, b):
        assert abs(completed_epstein(r, d).value) < 1e-10


def test_real_pair_absent_below_dc():
    with pytest.raises(DomainError):
        analysis.real_pair(8.0)


def test_rhoasym():
    assert analysis.rhoasym_prediction(2.0) == pytest.approx(0.5 * math.pi, rel=1e-15)
    ratio = analysis.real_pair(20.0)[0] / analysis.rhoasym_prediction(20.0)
    assert 0.98 <= ratio <= 1.05
    with pytest.raises(DomainError):
        analysis.rhoasym_prediction(0.0)
