"""Sum rules over zeros, the d -> 0 and d -> infinity limits, and the real zero pair."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import specfun
from .errors import DomainError
from .quadrature import DEFAULT_SPEC, MellinKernel, integrate
from .zeros import find_critical_zeros
from .zeta import completed_epstein

LN2 = specfun.CONSTANTS.ln2


@dataclass(frozen=True)
class SumRuleReport:
    d: float
    order: int
    integral_value: float
    partial_sum: complex
    zeros_used: int
    pairing: str = "conjugate_pairs"


def _I(d, p=0.0, log_power=0, spec=DEFAULT_SPEC, base="diff"):
    return integrate(MellinKernel(p=p, d=d, log_power=log_power, base=base), spec).real


def sum_rule_rhs(d, order, spec=DEFAULT_SPEC):
    """Right-hand side of the sum rule for ``sum_rho rho^{-order}``, order 1..3."""
    if not d > 0:
        raise DomainError("sum rules need d > 0")
    if order not in (1, 2, 3):
        raise DomainError("order must be 1, 2 or 3")
    h = 0.5 * d
    s1 = 0.5 * (_I(d, 0.0, spec=spec) + _I(d, h, spec=spec))
    if order == 1:
        return s1
    j2 = (2.0 * (_I(d, 0.0, spec=spec) + _I(d, h, spec=spec))
          - d * (_I(d, 0.0, 1, spec) - _I(d, h, 1, spec)))
    s2 = s1 ** 2 - j2 / (2.0 * d)
    if order == 2:
        return s2
    j3 = (4.0 * (_I(d, 0.0, 1, spec) - _I(d, h, 1, spec))
          - d * (_I(d, 0.0, 2, spec) + _I(d, h, 2, spec)))
    return -0.5 * s1 ** 3 + 1.5 * s1 * s2 - 3.0 * j3 / (16.0 * d)


def sum_rule_limit_d0(order, spec=DEFAULT_SPEC):
    """Exact d -> 0 limit of the sum rules.

    Orders 1 and 3 vanish; order 2 is ``-2 int_0^1 dt/t log(theta3 sqrt t)``,
    obtained from the d-derivative kernel at d = 0.
    """
    if order not in (1, 2, 3):
        raise DomainError("order must be 1, 2 or 3")
    if order == 2:
        return -2.0 * _I(0.0, 0.0, 0, spec, base="ddiff")
    return 0.0


def d0_sum_rule_closed_form():
    """``gamma0^2/2 - pi^2/16 + (ln 2)^2 + gamma1``."""
    c = specfun.CONSTANTS
    return 0.5 * c.euler_gamma0 ** 2 - c.pi ** 2 / 16.0 + c.ln2 ** 2 + c.stieltjes_gamma1


def riemann_tail_order2(t_cut):
    """Counting-density estimate of sum_{gamma > T} Re(1/rho^2) for zeta zeros."""
    return -(math.log(t_cut / (2.0 * math.pi)) + 1.0) / (2.0 * math.pi * t_cut)


def d0_partial_sums(order, n_riemann_zeros, n_lattice_k, part="both"):
    """Truncated ``sum 1/rho^order`` over the zero spectrum of the d -> 0 limit.

    The spectrum is ``2 z_n`` and ``2 (z_n - 1)`` for the Riemann zeros z_n,
    plus ``+-2 + 4 pi i k / ln 2`` for k != 0. Every zero enters together with
    its complex conjugate.
    """
    if order not in (1, 2, 3):
        raise DomainError("order must be 1, 2 or 3")
    if part not in ("both", "riemann", "lattice"):
        raise DomainError(f"unknown part {part!r}")
    total = 0.0j
    if part in ("both", "riemann"):
        if n_riemann_zeros < 1:
            raise DomainError("n_riemann_zeros must be >= 1")
        g = specfun.riemann_zeta_zeros(int(n_riemann_zeros))
        z = 0.5 + 1j * g
        zeros = np.concatenate([2 * z, 2 * (z - 1.0)])
        total += np.sum(zeros ** (-order) + np.conj(zeros) ** (-order))
    if part in ("both", "lattice"):
        if n_lattice_k < 1:
            raise DomainError("n_lattice_k must be >= 1")
        k = np.arange(1, int(n_lattice_k) + 1)
        w = 4j * math.pi * k / LN2
        zeros = np.concatenate([2.0 + w, -2.0 + w])
        total += np.sum(zeros ** (-order) + np.conj(zeros) ** (-order))
    return complex(total)


def critical_partial_sum(zeros, order):
    """``sum 1/rho^order`` over the given zeros and their complex conjugates."""
    rho = np.array([complex(z.rho_x, z.rho_y) for z in zeros])
    return complex(np.sum(rho ** (-order) + np.conj(rho) ** (-order)))


def sum_rule_report(d, order, y_max=45.0, spec=DEFAULT_SPEC, n_riemann=1000, n_lattice=10000):
    """Sum-rule integral next to the partial sum over the zeros that are known.

    For d > 0 the partial sum runs over critical zeros with rho_y <= y_max;
    d = 0 uses the exact spectrum of the limit.
    """
    if d == 0:
        part = d0_partial_sums(order, n_riemann, n_lattice)
        return SumRuleReport(0.0, order, sum_rule_limit_d0(order, spec), part,
                             4 * (n_riemann + n_lattice))
    zeros = find_critical_zeros(d, 0.01, y_max, spec)
    return SumRuleReport(float(d), order, sum_rule_rhs(d, order, spec),
                         critical_partial_sum(zeros, order), 2 * len(zeros))


def equidistant_levels(d, n_max):
    """Large-d critical levels ``(2n+1) pi / ln(d / 4 pi)``, n = 0..n_max."""
    if not d > 4.0 * math.pi:
        raise DomainError("equidistant levels need d > 4 pi")
    lg = math.log(d / (4.0 * math.pi))
    return [(2 * n + 1) * math.pi / lg for n in range(n_max + 1)]


def _g_real_axis(d, spec=DEFAULT_SPEC):
    """Critical-line function at rho_y = 0."""
    return -4.0 / d + integrate(MellinKernel(p=0.25 * d, d=d), spec).real


def find_dc_star(spec=DEFAULT_SPEC):
    """Dimension at which the first critical curve reaches the real axis."""
    return brentq(_g_real_axis, 8.0, 11.0, args=(spec,), xtol=1e-14, rtol=4 * np.finfo(float).eps)


def real_pair(d, spec=DEFAULT_SPEC):
    """The pair of real zeros (rho_x, d - rho_x) that exists for d > d_c*."""
    if not d > 0:
        raise DomainError("d must be positive")

    def f(x):
        return completed_epstein(x, d, spec).value.real

    hi = 0.5 * d
    if f(hi) <= 0.0:
        raise DomainError(f"no real zero pair at d={d} (need d > d_c*)")
    lo = min(1e-3, 0.25 * hi)
    while f(lo) >= 0.0:
        lo *= 0.1
        if lo < 1e-300:
            raise DomainError(f"no sign change for the real pair at d={d}")
    x = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return x, d - x


def rhoasym_prediction(d):
    """Large-d estimate ``(1/2) pi^{d/2} / Gamma(d/2 + 1)`` of the small real zero."""
    if not d > 0:
        raise DomainError("d must be positive")
    return 0.5 * math.exp(0.5 * d * math.log(math.pi) - math.lgamma(0.5 * d + 1.0))
