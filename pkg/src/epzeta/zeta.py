"""Epstein zeta function of the hypercubic lattice for continuous dimension.

Everything for general (s, d) goes through the completed function

    F(s, d) = -1/s - 1/(d-s) + 1/2 int_0^1 dt/t (t^{s/2} + t^{(d-s)/2}) D(t, d),

with D the regularised theta difference, and ``zeta_d(s) = pi^{s/2} F / Gamma(s/2)``.
The remaining functions are independent oracles: closed forms for even d,
direct lattice sums, the binomial theta3/theta4 representation and the
d -> 0 limit.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from . import specfun
from .errors import ConvergenceError, DomainError, PoleError
from .quadrature import (DEFAULT_SPEC, MellinKernel, adaptive_gk15, completed_contour,
                         contour_angle, integrate)

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class CompletedValue:
    """F(s, d) with an error estimate and the contour angle used (0 = real axis)."""

    value: complex
    error: float
    shift: float


def _check_dimension(d):
    if not (math.isfinite(d) and d > 0.0):
        raise DomainError(f"dimension must be positive and finite, got {d}")


def gamma_scale(s):
    """``|pi^{-s/2} Gamma(s/2)|``, the natural size of F near s."""
    s = complex(s)
    if s == 0:
        return math.inf
    return math.exp(-0.5 * s.real * math.log(math.pi) + specfun.loggamma(0.5 * s).real)


def completed_epstein(s, d, spec=DEFAULT_SPEC):
    s = complex(s)
    _check_dimension(d)
    if s == 0 or s == d:
        raise PoleError(f"F(s, d) has a pole at s={s} (d={d})")
    c = contour_angle(s.imag, d)
    explicit = -1.0 / s - 1.0 / (d - s)
    if c == 0.0:
        v1, e1, _ = integrate(MellinKernel(p=0.5 * s, d=d), spec, full_output=True)
        v2, e2, _ = integrate(MellinKernel(p=0.5 * (d - s), d=d), spec, full_output=True)
        value = explicit + 0.5 * (v1 + v2)
        err = 0.5 * (e1 + e2) + 8 * _EPS * abs(explicit)
        return CompletedValue(complex(value), float(err), 0.0)
    value = completed_contour(s, d, (0,), c)[0]
    # rounding of terms of size ~ e^{-c Im(s)/2} / |s| dominates
    err = 64 * _EPS * math.exp(-0.5 * abs(c * s.imag)) * (1.0 + 4.0 / abs(s))
    return CompletedValue(complex(value), float(max(err, spec.abs_tol)), c)


def epstein_zeta(s, d, spec=DEFAULT_SPEC):
    """``zeta_d(s) = (1/2) sum' |n|^{-s}`` continued to the whole plane."""
    s = complex(s)
    _check_dimension(d)
    if s == d:
        raise PoleError(f"Epstein zeta has a pole at s=d={d}")
    if s == 0:
        return -0.5 + 0.0j
    rg = specfun.rgamma(0.5 * s)
    if rg == 0:
        return 0.0j  # trivial zeros at s = -2n
    f = completed_epstein(s, d, spec).value
    return complex(np.exp(0.5 * s * math.log(math.pi)) * f * rg)


def closed_form(s, d):
    """Epstein zeta for d in {2, 4, 6, 8} via Riemann zeta and Dirichlet beta."""
    s = complex(s)
    x = 0.5 * s
    z, b = specfun.riemann_zeta, specfun.dirichlet_beta
    if d == 2:
        return 2.0 * z(x) * b(x)
    if d == 4:
        if x == 1:
            raise PoleError("closed form for d=4 has a pole at s=2")
        return 4.0 * (1.0 - 2.0 ** (2.0 - s)) * z(x) * z(x - 1.0)
    if d == 6:
        return 8.0 * b(x) * z(x - 2.0) - 2.0 * b(x - 2.0) * z(x)
    if d == 8:
        return 8.0 * (1.0 - 2.0 ** (1.0 - x) + 4.0 ** (2.0 - x)) * z(x) * z(x - 3.0)
    raise DomainError(f"no closed form for d={d}; supported: 2, 4, 6, 8")


def d0_limit(s):
    """``lim_{d->0} zeta_d(s)/d``, written as eta(s/2) times the odd-integer zeta at s/2+1."""
    s = complex(s)
    if s == 0:
        raise PoleError("the d -> 0 limit has a pole at s=0")
    return specfun.dirichlet_eta(0.5 * s) * specfun._lambda_odd(0.5 * s + 1.0)


def _shell_counts(d, kmax):
    """r_d(k) = number of integer vectors with squared norm k, k <= kmax."""
    c1 = np.zeros(kmax + 1)
    n = np.arange(0, math.isqrt(kmax) + 1)
    c1[n * n] = 2.0
    c1[0] = 1.0
    out = c1.copy()
    for _ in range(d - 1):
        out = np.rint(fftconvolve(out, c1)[:kmax + 1])
    return out


def lattice_sum_oracle(s, d, radius_cutoff):
    """Truncated ``(1/2) sum'_{|n| <= R} |n|^{-s}`` and a bound on the omitted tail.

    Returns ``(value, tail_bound)``.
    """
    s = complex(s)
    if d not in (1, 2, 3, 4):
        raise DomainError("lattice_sum_oracle supports d in {1, 2, 3, 4}")
    if s.real <= d:
        raise DomainError(f"lattice sum diverges for Re s <= d (s={s}, d={d})")
    if radius_cutoff < 10:
        raise DomainError("radius_cutoff must be >= 10")
    R = float(radius_cutoff)
    sigma = s.real
    if d == 1:
        n = np.arange(1, int(R) + 1, dtype=float)
        value = np.sum(np.exp(-s * np.log(n)))
        tail = (math.floor(R) + 0.5 - 0.5) ** (1.0 - sigma) / (sigma - 1.0)
        return complex(value), float(tail)
    kmax = int(math.floor(R * R))
    counts = _shell_counts(d, kmax)
    k = np.arange(1, kmax + 1, dtype=float)
    value = 0.5 * np.sum(counts[1:] * np.exp(-0.5 * s * np.log(k)))
    h = 0.5 * math.sqrt(d)
    kappa = (R - h) / (R - 2 * h)
    area = 2.0 * math.pi ** (0.5 * d) / math.gamma(0.5 * d)
    tail = 0.5 * area * kappa ** (d - 1) * (R - 2 * h) ** (d - sigma) / (sigma - d)
    return complex(value), float(tail)


def _bracket_large_t(v, d):
    """[2 theta3(e^{-4t})]^d - theta3(e^{-t})^d - 2^d + 1 at t = e^v >= 1."""
    t = np.exp(v)
    n = np.arange(1, 9, dtype=float)
    y = 2.0 * np.exp(-np.multiply.outer(t, n * n)).sum(axis=-1)
    y4 = 2.0 * np.exp(-4.0 * np.multiply.outer(t, n * n)).sum(axis=-1)
    return 2.0 ** d * np.expm1(d * np.log1p(y4)) - np.expm1(d * np.log1p(y))


def _bracket_small_t(u, d):
    """Bracket plus (2^d - 1) at t = e^{-u} <= 1, via the modular transform."""
    t = np.exp(-u)
    n = np.arange(1, 9, dtype=float)
    xa = 2.0 * np.exp(-0.25 * math.pi ** 2 * np.multiply.outer(1.0 / t, n * n)).sum(axis=-1)
    xb = 2.0 * np.exp(-math.pi ** 2 * np.multiply.outer(1.0 / t, n * n)).sum(axis=-1)
    la, lb = d * np.log1p(xa), d * np.log1p(xb)
    # e^{la} - e^{lb} = e^{lb} expm1(la - lb)
    return (math.pi / t) ** (0.5 * d) * np.exp(lb) * np.expm1(la - lb)


def binomial_representation(s, d, spec=DEFAULT_SPEC):
    """Epstein zeta from the theta3/theta4 binomial integral over (0, inf), 0 < Re s."""
    s = complex(s)
    if not (isinstance(d, (int, np.integer)) and d >= 1):
        raise DomainError("binomial representation needs an integer d >= 1")
    if s.real <= 0.0:
        raise ConvergenceError("binomial representation converges only for Re s > 0")
    denom = 2.0 ** (d - s) - 1.0
    if abs(denom) < 1e-8:
        raise PoleError(f"prefactor 1/(2^(d-s)-1) is singular at s={s}")
    half = 0.5 * s
    # (0, 1]: t = e^{-u}; the constant -(2^d - 1) is integrated exactly
    u_hi = 0.0
    while 0.25 * math.pi ** 2 * math.exp(u_hi) - (0.5 * d - half.real) * u_hi < 45.0:
        u_hi += 0.05
    lo_val, lo_err, _ = adaptive_gk15(
        lambda u: np.exp(-half * u) * _bracket_small_t(u, d), 0.0, u_hi,
        spec.abs_tol, spec.rel_tol, spec.max_refinements)
    v_hi = 0.0
    while math.exp(v_hi) - half.real * v_hi < 45.0 + math.log(2.0 * d + 1):
        v_hi += 0.05
    hi_val, hi_err, _ = adaptive_gk15(
        lambda v: np.exp(half * v) * _bracket_large_t(v, d), 0.0, v_hi,
        spec.abs_tol, spec.rel_tol, spec.max_refinements,
        min(0.1, 2.0 / (abs(half.imag) + 1.0)))
    integral = lo_val - (2.0 ** d - 1.0) / half + hi_val
    return complex(integral * specfun.rgamma(half) / (2.0 * denom))
