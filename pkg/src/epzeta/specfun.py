"""Scalar special functions: complex Gamma, Riemann/Hurwitz zeta, Dirichlet beta.

All functions take Python/numpy complex scalars. The vectorised helpers
prefixed with an underscore accept numpy arrays and are used by the zero
scans.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from scipy.special import zeta as _real_zeta

from .errors import ConvergenceError, DomainError, PoleError


@dataclass(frozen=True)
class NamedConstants:
    euler_gamma0: float
    stieltjes_gamma1: float
    ln2: float
    pi: float
    catalan: float


# gamma1 = -0.07281584548367672486058637587490131913773633833...
# (evaluated once with mpmath.stieltjes(1) at 50 digits).
CONSTANTS = NamedConstants(
    euler_gamma0=0.57721566490153286060651209008240243,
    stieltjes_gamma1=-0.07281584548367672486058637587490131,
    ln2=0.69314718055994530941723212145817657,
    pi=math.pi,
    catalan=0.91596559417721901505460351493238411,
)

# Lanczos approximation, g = 607/128, 15 terms (Godfrey).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = np.array([
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _is_nonpositive_integer(s):
    s = complex(s)
    return s.imag == 0.0 and s.real <= 0.0 and s.real == math.floor(s.real)


def _log_sin(z):
    """log(sin z) up to a multiple of 2*pi*i; safe for large |Im z|."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    big = np.abs(z.imag) > 20.0
    small = ~big
    out[small] = np.log(np.sin(z[small]))
    zb = z[big]
    # sin z = -(e^{-iz}/(2i)) (1 - e^{2iz}) for Im z > 0, mirrored below
    out_b = np.empty_like(zb)
    up = zb.imag > 0
    zu, zd = zb[up], zb[~up]
    out_b[up] = -1j * zu + np.log((np.exp(2j * zu) - 1.0) / 2j)
    out_b[~up] = 1j * zd + np.log((1.0 - np.exp(-2j * zd)) / 2j)
    out[big] = out_b
    return out


def _loggamma_right(z):
    """Lanczos log-gamma for Re z >= 0.5 (vectorised)."""
    zm = z - 1.0
    acc = np.full(zm.shape, _LANCZOS_C[0], dtype=complex)
    for k in range(1, len(_LANCZOS_C)):
        acc = acc + _LANCZOS_C[k] / (zm + k)
    tmp = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(tmp) - tmp + np.log(acc)


def _loggamma(z):
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    right = z.real >= 0.5
    out[right] = _loggamma_right(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        out[left] = math.log(math.pi) - _log_sin(math.pi * zl) - _loggamma_right(1.0 - zl)
    return out


def loggamma(s):
    """Complex log-Gamma.

    The real part is ``log|Gamma(s)|``; the imaginary part is only defined
    modulo ``2*pi``.
    """
    if _is_nonpositive_integer(s):
        raise PoleError(f"Gamma has a pole at s={s}")
    return complex(_loggamma(np.array([s]))[0])


def complex_gamma(s):
    """Gamma function for complex argument, relative error ~1e-14 for |s| <= 100."""
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise PoleError(f"Gamma has a pole at s={s}")
    if s.real >= 0.5:
        return complex(np.exp(_loggamma_right(np.array([s]))[0]))
    # reflection keeps the left half-plane on the Lanczos region
    s1 = 1.0 - s
    if abs(s.imag) < 20.0:
        g1 = np.exp(_loggamma_right(np.array([s1]))[0])
        return complex(math.pi / (np.sin(math.pi * s) * g1))
    return complex(np.exp(_loggamma(np.array([s]))[0]))


def rgamma(s):
    """Reciprocal Gamma, entire; exactly zero at the poles of Gamma."""
    s = complex(s)
    if _is_nonpositive_integer(s):
        return 0.0j
    if s.real >= 0.5:
        return complex(np.exp(-_loggamma_right(np.array([s]))[0]))
    if abs(s.imag) < 20.0:
        g1 = np.exp(_loggamma_right(np.array([1.0 - s]))[0])
        return complex(np.sin(math.pi * s) * g1 / math.pi)
    return complex(np.exp(-_loggamma(np.array([s]))[0]))


# --- Euler-Maclaurin Hurwitz zeta -------------------------------------------

def _b2k_over_fact(kmax):
    # B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}
    out = []
    for k in range(1, kmax + 1):
        z2k = float(_real_zeta(2.0 * k))
        out.append((-1) ** (k + 1) * 2.0 * z2k / (2.0 * math.pi) ** (2 * k))
    return np.array(out)


_EM_KMAX = 40
_B2K = _b2k_over_fact(_EM_KMAX)


def _hurwitz_em(s, a, n_terms=None):
    """Euler-Maclaurin Hurwitz zeta for an array of s (s != 1)."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    smax = float(np.max(np.abs(s))) if s.size else 0.0
    if n_terms is None:
        n_terms = int(max(12, math.ceil(0.5 * (smax + 2.0 * 20) - a)))
    n = np.arange(n_terms, dtype=float) + a
    logn = np.log(n)
    total = np.zeros(s.shape, dtype=complex)
    chunk = max(1, 4_000_000 // max(1, n_terms))
    for i in range(0, s.size, chunk):
        ss = s[i:i + chunk]
        total[i:i + chunk] = np.exp(-np.outer(ss, logn)).sum(axis=1)
    x = n_terms + a
    lx = math.log(x)
    xs = np.exp(-s * lx)
    total = total + x * xs / (s - 1.0) + 0.5 * xs
    poch = s.copy()
    xpow = xs / x
    for k in range(1, _EM_KMAX + 1):
        term = _B2K[k - 1] * poch * xpow
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        xpow = xpow / (x * x)
    return total


def hurwitz_zeta(s, a):
    """Hurwitz zeta ``sum_{n>=0} (n+a)^{-s}`` by Euler-Maclaurin summation."""
    s = complex(s)
    a = float(a)
    if a <= 0.0:
        raise DomainError(f"hurwitz_zeta needs a > 0, got a={a}")
    if s == 1.0:
        raise PoleError("Hurwitz zeta has a pole at s=1")
    return complex(_hurwitz_em(np.array([s]), a)[0])


# --- Riemann zeta ----------------------------------------------------------------

@lru_cache(maxsize=64)
def _borwein_coeffs(n):
    d = np.empty(n + 1)
    term = 1.0 / n
    acc = term
    d[0] = n * acc
    for i in range(1, n + 1):
        term *= 4.0 * (n + i - 1) * (n - i + 1) / ((2 * i) * (2 * i - 1))
        acc += term
        d[i] = n * acc
    # (d_k - d_n)/d_n with alternating sign, k = 0..n-1
    k = np.arange(n)
    return ((-1.0) ** k) * (d[:n] - d[n]) / d[n]


def _eta_borwein(s):
    t = abs(s.imag)
    n = int(math.ceil((37.0 + 0.5 * math.pi * t + math.log1p(2.0 * t)) / 1.7627)) + 4
    coef = _borwein_coeffs(n)
    k1 = np.arange(1, n + 1, dtype=float)
    return complex(-np.sum(coef * np.exp(-s * np.log(k1))))


def dirichlet_eta(s):
    """Alternating zeta ``sum (-1)^{n+1} n^{-s}``, entire."""
    s = complex(s)
    if s.real > 0.0 and abs(s.imag) <= 120.0:
        return _eta_borwein(s)
    if s == 1.0:
        return math.log(2.0)
    return (1.0 - 2.0 ** (1.0 - s)) * riemann_zeta(s)


def riemann_zeta(s):
    """Riemann zeta with analytic continuation to the whole plane."""
    s = complex(s)
    if s == 1.0:
        raise PoleError("Riemann zeta has a pole at s=1")
    if s.real < 0.0:
        s1 = 1.0 - s
        if s.imag == 0.0 and s.real == math.floor(s.real) and int(s.real) % 2 == 0:
            return 0.0j  # trivial zeros
        logfac = (s * math.log(2.0) + (s - 1.0) * math.log(math.pi)
                  + _log_sin(np.array([0.5 * math.pi * s]))[0]
                  + _loggamma(np.array([s1]))[0])
        return complex(np.exp(logfac) * riemann_zeta(s1))
    denom = 1.0 - 2.0 ** (1.0 - s)
    if abs(denom) < 0.1 or abs(s.imag) > 120.0:
        return complex(_hurwitz_em(np.array([s]), 1.0)[0])
    return _eta_borwein(s) / denom


def _lambda_odd(s):
    """``(1 - 2^{-s}) zeta(s)``, the sum over odd integers."""
    s = complex(s)
    if s == 1.0:
        raise PoleError("odd-integer zeta sum has a pole at s=1")
    return (1.0 - 2.0 ** (-s)) * riemann_zeta(s)


def dirichlet_beta(s):
    """Dirichlet beta ``4^{-s} [zeta(s,1/4) - zeta(s,3/4)]``, entire."""
    s = complex(s)
    if s.real < 0.0:
        # beta(s) = (2/pi)^{1-s} cos(pi s/2) Gamma(1-s) beta(1-s)
        s1 = 1.0 - s
        if s.imag == 0.0 and s.real == math.floor(s.real) and int(s.real) % 2 == 1:
            return 0.0j  # trivial zeros at negative odd integers
        logfac = (s1 * math.log(2.0 / math.pi)
                  + _log_sin(np.array([0.5 * math.pi * s + 0.5 * math.pi]))[0]
                  + _loggamma(np.array([s1]))[0])
        return complex(np.exp(logfac) * dirichlet_beta(s1))
    smax = abs(s)
    n_terms = int(max(12, math.ceil(0.5 * (smax + 40.0))))
    a, b = 0.25, 0.75
    n = np.arange(n_terms, dtype=float)
    diff = np.sum(np.exp(-s * np.log(n + a)) - np.exp(-s * np.log(n + b)))
    xa, xb = n_terms + a, n_terms + b
    # pole terms combined so that s=1 is regular
    lr = math.log(xa / xb)
    z = (1.0 - s) * lr
    exprel = np.expm1(z) / z if abs(z) > 1e-8 else 1.0 + z / 2.0 + z * z / 6.0
    diff += -np.exp((1.0 - s) * math.log(xb)) * lr * exprel
    xsa, xsb = np.exp(-s * math.log(xa)), np.exp(-s * math.log(xb))
    diff += 0.5 * (xsa - xsb)
    poch = s
    pa, pb = xsa / xa, xsb / xb
    for k in range(1, _EM_KMAX + 1):
        term = _B2K[k - 1] * poch * (pa - pb)
        diff += term
        if abs(term) <= 1e-17 * max(abs(diff), 1e-300):
            break
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        pa, pb = pa / (xa * xa), pb / (xb * xb)
    return complex(np.exp(-s * math.log(4.0)) * diff)


# --- Hardy Z and Riemann zeros -----------------------------------------------------

def riemann_siegel_theta(t):
    t = np.asarray(t, dtype=float)
    return _loggamma(0.25 + 0.5j * t).imag - 0.5 * t * math.log(math.pi)


def hardy_z(t):
    """Hardy's real function ``Z(t) = exp(i theta(t)) zeta(1/2 + i t)``."""
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    z = _hurwitz_em(0.5 + 1j * t, 1.0)
    out = (np.exp(1j * riemann_siegel_theta(t)) * z).real
    return float(out[0]) if scalar else out


@lru_cache(maxsize=4)
def riemann_zeta_zeros(count, step=0.05):
    """Ordinates of the first ``count`` zeros of zeta on the critical line.

    Found by a sign-change scan of Hardy's Z function followed by Brent
    refinement. The scan is checked against the Riemann-von Mangoldt
    counting function; a mismatch raises ``ConvergenceError``.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    # invert N(T) ~ theta(T)/pi + 1 for the scan limit
    t_end = 20.0
    while riemann_siegel_theta(t_end) / math.pi + 1.0 < count + 1.5:
        t_end *= 1.2
    grid = np.arange(10.0, t_end + step, step)
    vals = np.empty_like(grid)
    block = 4000
    for i in range(0, grid.size, block):
        vals[i:i + block] = hardy_z(grid[i:i + block])
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    f = lambda x: hardy_z(x)
    zeros = [brentq(f, grid[i], grid[i + 1], xtol=1e-13) for i in idx]
    zeros = np.array(zeros[:count])
    if zeros.size < count:
        raise ConvergenceError(f"scan found only {zeros.size} zeros below {t_end}")
    # N(gamma_k) = k - 1/2 up to S(t), which stays well below 1 here
    expected = riemann_siegel_theta(zeros) / math.pi + 1.0
    drift = np.abs(expected - (np.arange(1, count + 1) - 0.5))
    if np.max(drift) > 1.5:
        raise ConvergenceError("zero scan missed a close pair; reduce the step")
    return zeros
