import math

import numpy as np
import pytest

from epzeta import theta
from epzeta.errors import ConvergenceError, DomainError
from epzeta.quadrature import (DEFAULT_SPEC, MellinKernel, QuadratureSpec, adaptive_gk15,
                               completed_contour, integrate)


def test_critical_line_kernel_d4():
    y = 2 * math.pi / math.log(2)
    k = MellinKernel(p=1.0, d=4.0, trig="cos", omega=y)
    assert integrate(k).real == pytest.approx(4.0 / (4.0 + y * y), abs=1e-11)


def test_linearity():
    k = MellinKernel(p=0.7 + 2j, d=3.1, trig="cos", omega=5.0)
    assert integrate(k.scaled(2.0)) == pytest.approx(2.0 * integrate(k), abs=1e-14)


def test_midpoint_oracle():
    n = 10 ** 6
    t = (np.arange(n) + 0.5) / n
    mid = theta.theta_diff(t, 2.0).sum() / n
    assert integrate(MellinKernel(p=1.0, d=2.0)).real == pytest.approx(mid, abs=1e-8)


def _random_kernels(count, seed=11):
    rng = np.random.default_rng(seed)
    modes = ["none", "cos", "sin", "cosh", "sinh", "cos_cosh", "sin_sinh", "sin_sinhc"]
    for _ in range(count):
        yield MellinKernel(p=complex(rng.uniform(-1, 4), rng.uniform(-20, 20)),
                           d=float(rng.uniform(0.1, 12)), trig=modes[rng.integers(len(modes))],
                           omega=float(rng.uniform(0, 40)), kappa=float(rng.uniform(0, 3)),
                           log_power=int(rng.integers(4)))


def test_tolerance_honesty():
    for k in _random_kernels(30):
        spec = QuadratureSpec(abs_tol=1e-10, rel_tol=1e-10)
        a = integrate(k, spec)
        b = integrate(k, QuadratureSpec(abs_tol=5e-11, rel_tol=1e-10))
        assert abs(a - b) < spec.abs_tol


def test_truncation_safety():
    for k in _random_kernels(10, seed=5):
        v, _, u_max = integrate(k, DEFAULT_SPEC, full_output=True)
        w = integrate(k, QuadratureSpec(u_max_override=2 * u_max))
        assert abs(v - w) < DEFAULT_SPEC.abs_tol / 10


def test_conjugation():
    for k in _random_kernels(10, seed=9):
        assert integrate(k.conjugate()) == pytest.approx(integrate(k).conjugate(), abs=1e-15)


def test_nonconvergence_reported():
    with pytest.raises(ConvergenceError):
        adaptive_gk15(lambda u: np.abs(u - 0.3) ** -0.9, 0.0, 1.0, 1e-15, 1e-15, 3)


def test_kernel_validation():
    with pytest.raises(DomainError):
        MellinKernel(p=1.0, d=1.0, log_power=4)
    with pytest.raises(DomainError):
        MellinKernel(p=1.0, d=-1.0)
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=0.0)


@pytest.mark.parametrize("s,d", [(1.5 + 12j, 2.0), (2 + 20j, 4.0), (0.7 + 33j, 1.0), (5 - 41j, 8.0), (1 + 44j, 2.0)])
def test_contour_against_mpmath(mp, s, d):
    """The rotated ray agrees with F computed from high-precision zeta values."""
    from epzeta.zeta import gamma_scale

    s_mp = mp.mpc(s.real, s.imag)
    x = s_mp / 2
    z, beta = mp.zeta, lambda v: mp.dirichlet(v, [0, 1, 0, -1])
    zeta_d = {1.0: lambda: z(s_mp),
              2.0: lambda: 2 * z(x) * beta(x),
              4.0: lambda: 4 * (1 - 2 ** (2 - s_mp)) * z(x) * z(x - 1),
              8.0: lambda: 8 * (1 - 2 ** (1 - x) + 4 ** (2 - x)) * z(x) * z(x - 3)}[d]()
    ref = mp.pi ** (-x) * mp.gamma(x) * zeta_d
    f = completed_contour(s, d)[0]
    assert abs(f - complex(ref)) / gamma_scale(s) < 1e-12


def test_contour_derivatives_match_differences():
    s, d = 2.0 + 27.0j, 4.5
    f0, f1, f2 = completed_contour(s, d, (0, 1, 2))
    h = 1e-4
    fp, fm = completed_contour(s + h, d)[0], completed_contour(s - h, d)[0]
    assert abs((fp - fm) / (2 * h) - f1) < 1e-7 * abs(f1)
    assert abs((fp - 2 * f0 + fm) / h ** 2 - f2) < 1e-4 * abs(f2)
