import math

import numpy as np
import pytest
from scipy.optimize import brentq

from epzeta import specfun
from epzeta.errors import DomainError, PoleError
from epzeta.quadrature import completed_contour
from epzeta.zeros import (CRITICAL, OFF_CRITICAL, SOLVER_TOL, TABLE1_BY_LABEL, classify_edge,
                          critical_derivatives, critical_residual, critical_side_prediction,
                          edge_coefficients, find_critical_zeros, find_edge, newton_complex,
                          normalized_critical, offcritical_residual, offcritical_side_prediction,
                          scale, singular_prediction, solve_offcritical)

K4 = 2 * math.pi / math.log(2)


@pytest.fixture(scope="module")
def edge_1a():
    return find_edge(0.22, 18.0)


def test_critical_residual():
    assert abs(critical_residual(K4, 4.0)) < 1e-10
    assert abs(critical_residual(14.134725141, 1.0)) < 1e-9
    for y in (3.0, 17.5, 33.3):
        assert critical_residual(-y, 2.7) == pytest.approx(critical_residual(y, 2.7), rel=1e-13)


def test_zeros_d4():
    zs = find_critical_zeros(4.0, 5.0, 40.0)
    assert [round(z.rho_y / K4, 12) for z in zs] == [1, 2, 3, 4]
    for k, z in enumerate(zs, 1):
        assert abs(z.rho_y - k * K4) < 1e-9
        assert z.kind == CRITICAL and z.rho_x == 2.0


def _beta_zeros(t_max):
    """Zeros of beta on Re x = 1/2 from the sign of its real completed form."""
    def r(t):
        phase = specfun.loggamma(0.5 * (1.5 + 1j * t)).imag - 0.5 * t * math.log(math.pi / 4)
        return (np.exp(1j * phase) * specfun.dirichlet_beta(0.5 + 1j * t)).real

    grid = np.arange(0.5, t_max, 0.02)
    vals = [r(t) for t in grid]
    return [brentq(r, a, b, xtol=1e-14) for a, b, va, vb in zip(grid, grid[1:], vals, vals[1:]) if va * vb < 0]


def test_zeros_d2_factorwise():
    zs = [z.rho_y for z in find_critical_zeros(2.0, 1.0, 30.0)]
    riemann = [2 * g for g in specfun.riemann_zeta_zeros(3) if 2 * g <= 30]
    beta = [2 * t for t in _beta_zeros(15.0)]
    expected = sorted(riemann + beta)
    assert len(zs) == len(expected)
    assert np.allclose(zs, expected, atol=1e-9)


def test_no_critical_zeros_small_d():
    assert find_critical_zeros(0.05, 1.0, 15.0) == []


def test_scan_domain():
    with pytest.raises(DomainError):
        find_critical_zeros(2.0, 0.0, 10.0)
    with pytest.raises(DomainError):
        find_critical_zeros(2.0, 5.0, 60.0)


def test_offcritical_residual_parity():
    d, y = 3.0, 27.0
    n = scale(d, y)
    re0, im0 = offcritical_residual(0.0, y, d)
    assert abs(im0) < 1e-14 * n
    assert re0 == pytest.approx(critical_residual(y, d), abs=1e-14 * n)
    a = offcritical_residual(0.4, y, d)
    b = offcritical_residual(-0.4, y, d)
    c = offcritical_residual(0.4, -y, d)
    assert b[0] == pytest.approx(a[0], abs=1e-13 * n) and b[1] == pytest.approx(-a[1], abs=1e-13 * n)
    assert c[0] == pytest.approx(a[0], abs=1e-13 * n) and c[1] == pytest.approx(-a[1], abs=1e-13 * n)
    with pytest.raises(PoleError):
        offcritical_residual(-1.5, 0.0, 3.0)


def test_golden_offcritical_d3():
    re, im = offcritical_residual(0.111189793551259 - 1.5, 27.0278811412527548, 3.0)
    assert math.hypot(re, im) / scale(3.0, 27.03) < 1e-9
    z = solve_offcritical((-1.39, 27.0), 3.0)
    assert z.kind == OFF_CRITICAL
    assert z.rho_x == pytest.approx(0.111189793551259, abs=1e-10)
    assert z.rho_y == pytest.approx(27.0278811412527548, abs=1e-10)


def test_golden_offcritical_d5():
    z = solve_offcritical((-2.5, 28.6), 5.0)
    assert z.rho_x == pytest.approx(-0.00717997528701, abs=1e-10)
    assert z.rho_y == pytest.approx(28.5599914110240345, abs=1e-10)
    partner = z.conjugate_partner()
    assert partner.rho_x == pytest.approx(5.00717997528701, abs=1e-10)
    re, im = offcritical_residual(partner.delta_rho_x, partner.rho_y, 5.0)
    assert math.hypot(re, im) / scale(5.0, z.rho_y) < 10 * SOLVER_TOL


def test_offcritical_line_d4():
    z = solve_offcritical((-1.0, 28.3), 4.0)
    assert z.rho_x == pytest.approx(1.0, abs=1e-10)
    assert z.rho_y == pytest.approx(2 * 14.134725141734693, abs=1e-9)


def test_newton_returns_from_perturbation():
    d = 3.0
    s0 = complex(0.111189793551259, 27.0278811412527548)
    for ds in (1e-3, -1e-3j, 7e-4 + 7e-4j):
        s, r = newton_complex(s0 + ds, d)
        assert abs(s - s0) < 1e-10 and r < SOLVER_TOL


@pytest.mark.parametrize("d", [1.0, 2.5, 4.0, 7.3])
def test_records_satisfy_equation(d):
    for z in find_critical_zeros(d, 1.0, 45.0):
        f = completed_contour(complex(z.rho_x, z.rho_y), d)[0]
        assert abs(f) / scale(d, z.rho_y) < 10 * SOLVER_TOL


@pytest.mark.parametrize("guess,label,half_d,rho_y", [
    ((0.22, 18.0), "1a", 0.10846187908294, 18.06404476224324),
    ((2.3, 27.0), "2b", 1.13615655471973, 27.06485479190591),
    ((9.2, 0.5), "1b", 4.62277623337280, 0.0),
])
def test_find_edge_examples(guess, label, half_d, rho_y):
    e = find_edge(*guess)
    assert e.label == label
    assert e.half_d == pytest.approx(half_d, abs=1e-8)
    assert e.rho_y_star == pytest.approx(rho_y, abs=1e-8)
    assert e.orientation == TABLE1_BY_LABEL[label].orientation


@pytest.mark.parametrize("label", ["1a", "2b", "4a"])
def test_edge_consistency(label):
    row = TABLE1_BY_LABEL[label]
    e = find_edge(2 * row.half_d, row.rho_y)
    n = scale(e.d_star, e.rho_y_star)
    assert abs(critical_residual(e.rho_y_star, e.d_star)) / n < 1e-10
    h = 1e-4
    f = [critical_residual(e.rho_y_star + k * h, e.d_star) for k in (-2, -1, 1, 2)]
    fd = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
    assert abs(fd) / n < 1e-9
    assert classify_edge(e) == row.orientation
    if row.orientation == "left":
        assert -e.alpha / e.gamma > 0


def test_edge_1a_coefficients(edge_1a):
    assert edge_1a.sqrt_ratio == pytest.approx(4.24563, abs=5e-5)
    assert -edge_1a.linear_coefficient == pytest.approx(0.344516, abs=5e-5)
    # the integral and contour routes agree
    a = edge_coefficients(edge_1a, method="integral")
    b = edge_coefficients(edge_1a, method="contour")
    assert np.allclose(a, b, rtol=1e-5)
    with pytest.raises(DomainError):
        edge_coefficients(edge_1a, method="bogus")


def test_singular_prediction(edge_1a):
    at = singular_prediction(edge_1a, edge_1a.d_star)
    assert at.rho_y == (edge_1a.rho_y_star, edge_1a.rho_y_star)
    p = offcritical_side_prediction(edge_1a, edge_1a.d_star - 1e-4)
    assert p.delta_rho_x[0] == pytest.approx(4.24563e-2, rel=1e-3)
    assert p.delta_rho_x[1] == -p.delta_rho_x[0]
    assert p.rho_y[0] - edge_1a.rho_y_star == pytest.approx(0.344516e-4, rel=1e-3)
    c = critical_side_prediction(edge_1a, edge_1a.d_star + 1e-4)
    assert c.rho_y[0] > edge_1a.rho_y_star > c.rho_y[1]
    with pytest.raises(DomainError):
        critical_side_prediction(edge_1a, edge_1a.d_star - 1e-4)
    with pytest.raises(DomainError):
        offcritical_side_prediction(edge_1a, edge_1a.d_star + 1e-4)


def test_critical_side_matches_solver(edge_1a):
    d = edge_1a.d_star + 1e-5
    pred = critical_side_prediction(edge_1a, d)
    zs = find_critical_zeros(d, 17.9, 18.2, step=0.002)
    assert len(zs) == 2
    for z, y in zip(zs, sorted(pred.rho_y)):
        assert abs(z.rho_y - y) < 1e-6


def test_normalized_critical_derivative():
    y, d = 20.0, 3.3
    g = critical_derivatives(y, d, (0, 1))
    h = 1e-5
    fd = (critical_residual(y + h, d) - critical_residual(y - h, d)) / (2 * h)
    assert g[1] == pytest.approx(fd, rel=1e-7)
    assert normalized_critical(y, d) == pytest.approx(g[0] / scale(d, y), rel=1e-14)
