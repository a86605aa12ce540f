"""Jacobi theta values at nome exp(-pi t) and the regularised difference.

The difference ``theta3(e^{-pi t})^d - t^{-d/2}`` is what the Mellin
integrals actually consume. Below ``t = 1`` it is evaluated through the
modular transform so that the leading power cancels analytically.
"""

import math

import numpy as np

from .errors import DomainError

T_SWITCH = 1.0
_N_TERMS = 8  # q <= e^{-pi}: q^{64} is far below double precision


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0.0)) or np.any(~np.isfinite(t)):
        raise DomainError("theta functions need finite t > 0")
    return t


def _check_d(d):
    if not (math.isfinite(d) and d >= 0.0):
        raise DomainError(f"dimension must be finite and >= 0, got {d}")


def _tail_sum(x, offset=0.0):
    """``2 * sum_{n>=1} exp(-pi (n + offset)^2 x)`` for x >= 1 (array)."""
    n = np.arange(1, _N_TERMS + 1, dtype=float) - offset
    return 2.0 * np.exp(-math.pi * np.multiply.outer(x, n * n)).sum(axis=-1)


def _log_tail_sum(x):
    """``log(2 sum_{n>=1} exp(-pi n^2 x))`` without underflow, x >= 1."""
    n2m1 = np.arange(1, _N_TERMS + 1, dtype=float) ** 2 - 1.0
    rest = np.exp(-math.pi * np.multiply.outer(x, n2m1)).sum(axis=-1)
    return math.log(2.0) - math.pi * x + np.log(rest)


def theta3(t):
    """``theta3(exp(-pi t)) = sum_n exp(-pi n^2 t)`` for t > 0."""
    t = _check_t(t)
    small = t < T_SWITCH
    x = np.where(small, 1.0 / t, t)
    val = 1.0 + _tail_sum(x)
    out = np.where(small, val / np.sqrt(t), val)
    return out[()] if out.ndim == 0 else out


def theta4(t):
    """``theta4(exp(-pi t)) = sum_n (-1)^n exp(-pi n^2 t)`` for t > 0.

    For small t the modular image ``t^{-1/2} theta2(e^{-pi/t})`` is used,
    which is exponentially small and positive.
    """
    t = _check_t(t)
    small = t < T_SWITCH
    x = np.where(small, 1.0 / t, t)
    n = np.arange(1, _N_TERMS + 1, dtype=float)
    signs = (-1.0) ** n
    direct = 1.0 + 2.0 * (signs * np.exp(-math.pi * np.multiply.outer(x, n * n))).sum(axis=-1)
    # theta2(e^{-pi x}) = 2 sum_{n>=0} exp(-pi (n+1/2)^2 x)
    m = np.arange(0, _N_TERMS, dtype=float) + 0.5
    dual = 2.0 * np.exp(-math.pi * np.multiply.outer(x, m * m)).sum(axis=-1) / np.sqrt(t)
    out = np.where(small, dual, direct)
    return out[()] if out.ndim == 0 else out


def theta_diff(t, d, regime="auto"):
    """``theta3(e^{-pi t})^d - t^{-d/2}``.

    ``regime`` may force ``"direct"`` (power difference) or ``"modular"``
    (``t^{-d/2} expm1(d log1p(x))`` with x the dual tail sum); ``"auto"``
    switches at t = 1.
    """
    t = _check_t(t)
    _check_d(d)
    if regime not in ("auto", "direct", "modular"):
        raise DomainError(f"unknown regime {regime!r}")
    logt = np.log(t)
    if regime == "direct":
        use_mod = np.zeros(t.shape, dtype=bool)
    elif regime == "modular":
        use_mod = np.ones(t.shape, dtype=bool)
    else:
        use_mod = t < T_SWITCH
    out = np.empty(t.shape)
    if np.any(use_mod):
        tm = t[use_mod]
        x = _tail_sum(1.0 / tm)
        out[use_mod] = np.exp(-0.5 * d * logt[use_mod]) * np.expm1(d * np.log1p(x))
    if np.any(~use_mod):
        td = t[~use_mod]
        y = _tail_sum(td)
        out[~use_mod] = np.exp(d * np.log1p(y)) - np.exp(-0.5 * d * logt[~use_mod])
    return out[()] if out.ndim == 0 else out


def log_theta_diff_u(u, d):
    """Log of the difference on the substituted axis ``t = e^{-u}``, u >= 0.

    Returns ``(logmag, sign)``. The difference is positive for d > 0 and
    identically zero for d = 0 (logmag = -inf, sign = 0).
    """
    u = np.asarray(u, dtype=float)
    _check_d(d)
    if np.any(u < 0.0):
        raise DomainError("log_theta_diff_u needs u >= 0 (t <= 1)")
    if d == 0.0:
        return np.full(u.shape, -np.inf), np.zeros(u.shape)
    x_arg = np.exp(u)
    logx = _log_tail_sum(x_arg)
    x = np.exp(logx)
    dl = d * np.log1p(x)
    tiny = x < 1e-8
    with np.errstate(divide="ignore"):
        big_part = np.log(np.where(tiny, 1.0, np.expm1(dl)))
    # expm1(d log1p x) = d x (1 + (d-1) x / 2 + ...)
    small_part = math.log(d) + logx + np.log1p(0.5 * (d - 1.0) * x)
    logmag = 0.5 * d * u + np.where(tiny, small_part, big_part)
    return logmag, np.ones(u.shape)


def log_theta_diff(t, d):
    """``(log|theta_diff|, sign)`` for 0 < t <= 1, safe for large d."""
    t = _check_t(t)
    if np.any(t > 1.0):
        raise DomainError("log_theta_diff is defined for 0 < t <= 1")
    return log_theta_diff_u(-np.log(t), d)


def theta_diff_dd(t, d):
    """Derivative of ``theta3^d - t^{-d/2}`` with respect to d, for 0 < t <= 1.

    Written as ``t^{-d/2} [-(ln t)/2 expm1(d L) + (1+x)^d L]`` with
    ``L = log1p(x)``, which stays finite as t -> 0 and at d = 0 reduces to
    ``log(theta3 sqrt(t))``.
    """
    t = _check_t(t)
    _check_d(d)
    x = _tail_sum(1.0 / t)
    L = np.log1p(x)
    logt = np.log(t)
    out = np.exp(-0.5 * d * logt) * (-0.5 * logt * np.expm1(d * L) + np.exp(d * L) * L)
    return out[()] if out.ndim == 0 else out


# --- complex nome (used by the shifted Mellin contour) -----------------------------

def log_theta3_complex(q, n_terms):
    """Continuous ``log theta3(q)`` for complex |q| < 1.

    Uses the Jacobi product, ``theta3 = prod (1-q^{2j})(1+q^{2j-1})^2``,
    rewritten as ``-2 sum_j (-1)^j atanh(q^j)``; summing logs avoids the
    branch jumps of taking the log of the series.
    """
    q = np.asarray(q, dtype=complex)
    out = np.zeros(q.shape, dtype=complex)
    qj = np.ones(q.shape, dtype=complex)
    for j in range(1, n_terms + 1):
        qj = qj * q
        out += (2.0 if j % 2 else -2.0) * np.arctanh(qj)
    return out
