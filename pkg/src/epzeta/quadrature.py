"""Mellin-type integrals over (0, 1] and a rotated-contour evaluator.

Real-axis integrals ``int_0^1 dt/t t^p w(t) D(t)`` are computed on the
substituted axis ``u = -ln t`` with adaptive Gauss-Kronrod panels, where D is
either the theta difference or its d-derivative.

For the completed function at large imaginary part the real-axis integrand
oscillates with amplitude far above the result, so ``shifted_mellin``
evaluates the same quantity along the ray ``t = e^{w + ic}`` instead.
"""

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError
from .theta import _log_tail_sum, log_theta3_complex, log_theta_diff_u

# 15-point Kronrod / 7-point Gauss nodes and weights (QUADPACK qk15).
_XK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
GK_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
GK_WEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]])
_G_WEIGHTS = np.zeros(15)
_G_WEIGHTS[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])

PANEL_CEILING = 0.1

TRIG_MODES = ("none", "cos", "sin", "cosh", "sinh", "cos_cosh", "sin_sinh", "sin_sinhc")


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    max_refinements: int = 60
    u_max_override: float = None

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_refinements < 1:
            raise DomainError("max_refinements must be >= 1")


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class MellinKernel:
    """Integrand ``coeff * t^p * w(t) * (ln t)^log_power * D(t) / t``.

    ``trig`` selects w(t) from products of ``cos/sin(omega ln t / 2)`` and
    ``cosh/sinh(kappa ln t / 2)``; ``sin_sinhc`` divides the sinh factor by
    kappa (regular at kappa = 0). ``base`` is ``"diff"`` for the theta
    difference or ``"ddiff"`` for its derivative in d.
    """

    p: complex
    d: float
    trig: str = "none"
    omega: float = 0.0
    kappa: float = 0.0
    log_power: int = 0
    base: str = "diff"
    coeff: complex = 1.0

    def __post_init__(self):
        if self.trig not in TRIG_MODES:
            raise DomainError(f"unknown trig mode {self.trig!r}")
        if self.log_power not in (0, 1, 2, 3):
            raise DomainError("log_power must be 0..3")
        if self.base not in ("diff", "ddiff"):
            raise DomainError(f"unknown base {self.base!r}")
        if not (math.isfinite(self.d) and self.d >= 0.0):
            raise DomainError("kernel dimension must be finite and >= 0")

    def conjugate(self):
        return replace(self, p=complex(self.p).conjugate(),
                       coeff=complex(self.coeff).conjugate())

    def scaled(self, factor):
        return replace(self, coeff=complex(self.coeff) * factor)


def _weight(kernel, u):
    # every weight is a function of ln t = -u
    lt = -u
    a = 0.5 * kernel.omega * lt
    b = 0.5 * kernel.kappa * lt
    mode = kernel.trig
    if mode == "none":
        w = np.ones_like(u)
    elif mode == "cos":
        w = np.cos(a)
    elif mode == "sin":
        w = np.sin(a)
    elif mode == "cosh":
        w = np.cosh(b)
    elif mode == "sinh":
        w = np.sinh(b)
    elif mode == "cos_cosh":
        w = np.cos(a) * np.cosh(b)
    elif mode == "sin_sinh":
        w = np.sin(a) * np.sinh(b)
    else:
        if kernel.kappa == 0.0:
            w = np.sin(a) * 0.5 * lt
        else:
            w = np.sin(a) * np.sinh(b) / kernel.kappa
    if kernel.log_power:
        w = w * lt ** kernel.log_power
    return w


def _log_base(kernel, u):
    d = kernel.d
    if kernel.base == "diff":
        return log_theta_diff_u(u, d)[0]
    # d-derivative: e^{du/2} [ (u/2) expm1(dL) + e^{dL} L ], L = log1p(x)
    logx = _log_tail_sum(np.exp(u))
    x = np.exp(logx)
    L = np.log1p(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        logL = logx + np.log(np.where(x > 0, L / np.where(x > 0, x, 1.0), 1.0))
    dl = d * L
    exprel = np.where(np.abs(dl) > 1e-12, np.expm1(dl) / np.where(dl != 0, dl, 1.0), 1.0 + 0.5 * dl)
    inner = 0.5 * u * d * exprel + np.exp(dl)
    return 0.5 * d * u + logL + np.log(inner)


def kernel_values(kernel, u):
    """Integrand on the u axis (already including the dt/t Jacobian)."""
    u = np.asarray(u, dtype=float)
    p = complex(kernel.p)
    logb = _log_base(kernel, u)
    with np.errstate(under="ignore"):
        mag = np.exp(logb - p.real * u)
    return complex(kernel.coeff) * mag * np.exp(-1j * p.imag * u) * _weight(kernel, u)


def _log_bound(kernel, u):
    d = kernel.d
    slope = 0.5 * d - complex(kernel.p).real + 0.5 * abs(kernel.kappa)
    lb = slope * u + math.log(2.0 * max(d, 1.0) + 2.0) - math.pi * np.exp(u)
    lb += kernel.log_power * np.log1p(u) + np.log1p(0.5 * d * u)
    return lb + math.log(max(abs(complex(kernel.coeff)), 1e-300))


def truncation_point(kernel, abs_tol):
    """Smallest u beyond which the integrand stays below abs_tol / 1e3."""
    grid = np.linspace(0.0, 12.0, 2401)
    lb = _log_bound(kernel, grid)
    target = math.log(abs_tol) - math.log(1e3)
    above = np.nonzero(lb > target)[0]
    if above.size == 0:
        return 0.5
    return float(grid[min(above[-1] + 1, grid.size - 1)])


def _gk15_panels(f, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = mid[:, None] + half[:, None] * GK_NODES[None, :]
    vals = f(nodes.ravel()).reshape(nodes.shape)
    k = (vals * GK_WEIGHTS).sum(axis=1) * half
    g = (vals * _G_WEIGHTS).sum(axis=1) * half
    return k, np.abs(k - g)


def adaptive_gk15(f, a, b, abs_tol=1e-13, rel_tol=1e-12, max_refinements=60,
                  max_width=PANEL_CEILING):
    """Globally adaptive Gauss-Kronrod 15 on [a, b] for a vectorised f.

    Panels start no wider than ``max_width``; every round bisects the
    panels whose error exceeds their share of the tolerance. Returns
    ``(value, error_estimate, n_panels)``.
    """
    if not b > a:
        return 0.0j, 0.0, 0
    n0 = max(1, int(math.ceil((b - a) / max_width)))
    edges = np.linspace(a, b, n0 + 1)
    lo, hi = edges[:-1], edges[1:]
    total = 0.0j
    err_done = 0.0
    panels = 0
    length = b - a
    for _ in range(max_refinements):
        k, e = _gk15_panels(f, lo, hi)
        panels += lo.size
        running = total + k.sum()
        tol = max(abs_tol, rel_tol * abs(running))
        ok = e <= tol * (hi - lo) / length
        total += k[ok].sum()
        err_done += e[ok].sum()
        if ok.all():
            return complex(total), float(err_done), panels
        lo_bad, hi_bad = lo[~ok], hi[~ok]
        mid = 0.5 * (lo_bad + hi_bad)
        lo = np.concatenate([lo_bad, mid])
        hi = np.concatenate([mid, hi_bad])
    raise ConvergenceError(
        f"adaptive quadrature did not converge in {max_refinements} refinements")


def integrate(kernel, spec=DEFAULT_SPEC, full_output=False):
    """``int_0^1 dt/t t^p w(t) D(t)`` for the given kernel.

    With ``full_output`` returns ``(value, error_estimate, u_max)``.
    """
    if kernel.d == 0.0 and kernel.base == "diff":
        return (0.0j, 0.0, 0.0) if full_output else 0.0j
    u_max = spec.u_max_override if spec.u_max_override else truncation_point(kernel, spec.abs_tol)
    rate = 0.5 * abs(kernel.omega) + abs(complex(kernel.p).imag) + 1.0
    width = min(PANEL_CEILING, 2.0 / rate)
    val, err, _ = adaptive_gk15(lambda u: kernel_values(kernel, u), 0.0, u_max,
                                spec.abs_tol, spec.rel_tol, spec.max_refinements, width)
    if full_output:
        return val, err, u_max
    return val


# --- rotated contour -----------------------------------------------------------------

def contour_angle(im_s, d=None):
    """Rotation angle c of the Mellin ray for an argument with imaginary part im_s.

    Steps are discrete so that node sets can be cached; c = 0 (real axis)
    for small |Im s|. In high dimension |theta3^d| grows quickly near the
    imaginary axis, so the ray is kept further away from it.
    """
    y = abs(im_s)
    if y < 10.0:
        return 0.0
    if y < 16.0:
        delta = 1.0
    elif y < 25.0:
        delta = 0.6
    elif y < 35.0:
        delta = 0.4
    else:
        delta = 0.3
    if d is not None and d > 40.0:
        delta = max(delta, 0.6 if d <= 60.0 else 1.0)
    return math.copysign(0.5 * math.pi - delta, im_s)


@lru_cache(maxsize=256)
def _contour_grid(c, im_bucket, re_bucket):
    """Nodes, weights and log theta3 along w + ic for w in [0, w_max]."""
    cc = math.cos(c)
    sc = abs(math.sin(c))
    im_b = 5.0 * im_bucket
    re_b = 5.0 * re_bucket
    # cut where e^{Re(sigma) w/2} * 2d e^{-pi e^w cos c} < e^{-40}
    w = 0.0
    while 0.5 * re_b * w - math.pi * math.exp(w) * cc + 6.0 > -40.0:
        w += 0.01
    w_max = w
    pts = [0.0]
    w = 0.0
    while w < w_max:
        rate = 0.5 * im_b + math.pi * math.exp(w) * max(sc, 0.05) + 0.5 * re_b + 1.0
        w = min(w + min(PANEL_CEILING, 2.0 / rate), w_max)
        pts.append(w)
    pts = np.array(pts)
    a, b = pts[:-1], pts[1:]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    nodes = (mid[:, None] + half[:, None] * GK_NODES[None, :]).ravel()
    weights = (half[:, None] * GK_WEIGHTS[None, :]).ravel()
    z = nodes + 1j * c
    q = np.exp(-math.pi * np.exp(z))
    if c == 0.0:
        n = np.arange(1, 9, dtype=float)
        logt = np.log1p(2.0 * np.exp(-math.pi * np.multiply.outer(np.exp(nodes), n * n)).sum(axis=1))
        logt = logt.astype(complex)
    else:
        n_terms = int(math.ceil(40.0 / (math.pi * cc))) + 2
        logt = log_theta3_complex(q, n_terms)
    z.setflags(write=False)
    weights.setflags(write=False)
    logt.setflags(write=False)
    return z, weights, logt


def _grid_for(sigmas, c):
    im_b = int(math.ceil(max(abs(complex(s).imag) for s in sigmas) / 5.0))
    re_b = int(math.ceil(max(max(complex(s).real, 0.0) for s in sigmas) / 5.0))
    return _contour_grid(float(c), im_b, re_b)


def _explicit_derivs(sigma, c, orders):
    """k-th sigma-derivatives of ``-2 e^{ic sigma/2} / sigma``."""
    a = 0.5j * c
    e = np.exp(a * sigma)
    out = []
    for k in orders:
        acc = 0.0j
        for j in range(k + 1):
            acc += math.comb(k, j) * a ** (k - j) * (-1) ** j * math.factorial(j) / sigma ** (j + 1)
        out.append(-2.0 * e * acc)
    return out


def completed_contour(s, d, orders=(0,), c=None):
    """s-derivatives of the completed function via the rotated Mellin ray.

    Returns a list of ``F^{(k)}(s)`` for k in ``orders``.
    """
    s = complex(s)
    if c is None:
        c = contour_angle(s.imag, d)
    s2 = d - s
    z, wts, logt = _grid_for((s, s2), c)
    base = wts * np.expm1(d * logt)
    zc = z.conjugate()
    basec = wts * np.expm1(d * logt.conjugate())
    e1 = np.exp(0.5 * s * z)
    e2 = np.exp(0.5 * s2 * zc)
    ex1 = _explicit_derivs(s, c, orders)
    ex2 = _explicit_derivs(s2, -c, orders)
    out = []
    for i, k in enumerate(orders):
        m1 = np.sum(base * e1 * (0.5 * z) ** k)
        m2 = np.sum(basec * e2 * (0.5 * zc) ** k)
        out.append(0.5 * ((ex1[i] + m1) + (-1) ** k * (ex2[i] + m2)))
    return out
