"""Critical zeros, off-critical zeros and edge (fold) points of zero curves.

On the critical line s = d/2 + i y the completed function is real; we call
it G(d, y). All solver tolerances refer to G (or F) divided by
``N(d, y) = |pi^{-s/2} Gamma(s/2)|``, which keeps the residual scale-free as
F decays like exp(-pi y / 4).
"""

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .errors import (ConvergenceError, DegenerateFoldError, DomainError,
                     InconsistentProbeError, PoleError)
from .quadrature import DEFAULT_SPEC, MellinKernel, completed_contour, integrate
from .zeta import gamma_scale

CRITICAL = "critical"
OFF_CRITICAL = "off_critical"
REAL_OFF_CRITICAL = "real_off_critical"

SOLVER_TOL = 1e-11
SCAN_STEP = 0.05
FD_STEP_D = 1e-5


class ResolutionWarning(UserWarning):
    """Two critical zeros may lie closer together than the scan step."""


@dataclass(frozen=True)
class ZeroRecord:
    d: float
    rho_x: float
    rho_y: float
    kind: str
    residual: float

    @property
    def delta_rho_x(self):
        return self.rho_x - 0.5 * self.d

    def conjugate_partner(self):
        """The mirror zero at d - rho_x (itself for critical zeros)."""
        return replace(self, rho_x=self.d - self.rho_x)


@dataclass(frozen=True)
class EdgePoint:
    d_star: float
    rho_y_star: float
    orientation: str = ""
    alpha: float = float("nan")
    beta: float = float("nan")
    gamma: float = float("nan")
    delta: float = float("nan")
    label: str = ""
    residual: float = 0.0

    @property
    def half_d(self):
        return 0.5 * self.d_star

    @property
    def sqrt_ratio(self):
        """sqrt(-alpha/gamma) when positive, else nan."""
        r = -self.alpha / self.gamma
        return math.sqrt(r) if r > 0 else float("nan")

    @property
    def linear_coefficient(self):
        """(beta - alpha delta / gamma) / (2 gamma)."""
        return (self.beta - self.alpha * self.delta / self.gamma) / (2.0 * self.gamma)


@dataclass(frozen=True)
class Table1Row:
    label: str
    orientation: str
    half_d: float
    rho_y: float


TABLE1 = (
    Table1Row("1a", "left", 0.10846187908294, 18.06404476224324),
    Table1Row("1b", "right", 4.62277623337280, 0.0),
    Table1Row("2a", "left", 0.029260757098957, 28.25989865119296),
    Table1Row("2b", "right", 1.13615655471973, 27.06485479190591),
    Table1Row("3a", "left", 0.076684964492103, 36.29956597219118),
    Table1Row("3b", "right", 0.17608667918405, 38.97086173076263),
    Table1Row("3c", "left", 0.023788974966443, 42.00296457563092),
    Table1Row("3d", "right", 0.69958436750509, 42.29187347594789),
    Table1Row("3e", "left", 0.28286847694364, 39.08036320922192),
    Table1Row("4a", "left", 0.94484709689530, 42.43883096807280),
    Table1Row("4b", "right", 1.87159485174678, 42.20920217767993),
)
TABLE1_BY_LABEL = {row.label: row for row in TABLE1}


def table1_label(d_star, rho_y_star, tol=1e-4):
    """Registry label of a Table 1 edge within ``tol`` in (d/2, rho_y), else ''."""
    for row in TABLE1:
        if abs(0.5 * d_star - row.half_d) < tol and abs(abs(rho_y_star) - row.rho_y) < tol:
            return row.label
    return ""


# --- critical-line function ------------------------------------------------------

def _check_d(d):
    if not (math.isfinite(d) and d > 0.0):
        raise DomainError(f"dimension must be positive, got {d}")


def scale(d, rho_y):
    """Normalization N(d, y) = |pi^{-s/2} Gamma(s/2)| at s = d/2 + i y."""
    return gamma_scale(complex(0.5 * d, rho_y))


def critical_derivatives(rho_y, d, orders=(0,)):
    """``d^k G / d y^k`` at (d, y) for k in orders (unnormalized)."""
    s = complex(0.5 * d, rho_y)
    vals = completed_contour(s, d, tuple(orders))
    return [((1j) ** k * v).real for k, v in zip(orders, vals)]


def critical_residual(rho_y, d, spec=DEFAULT_SPEC):
    """G(d, y): the completed function on the critical line (real)."""
    _check_d(d)
    return critical_derivatives(rho_y, d, (0,))[0]


def normalized_critical(rho_y, d):
    return critical_residual(rho_y, d) / scale(d, rho_y)


def find_critical_zeros(d, y_min, y_max, spec=DEFAULT_SPEC, step=SCAN_STEP):
    """All critical zeros with y_min <= rho_y <= y_max found by a sign-change scan."""
    _check_d(d)
    if not (0.0 < y_min < y_max <= 50.0):
        raise DomainError("need 0 < y_min < y_max <= 50")
    n = int(math.ceil((y_max - y_min) / step))
    grid = np.linspace(y_min, y_max, n + 1)
    vals = np.array([normalized_critical(y, d) for y in grid])
    out = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]:
        if vals[i] == 0.0:
            y = grid[i]
        elif vals[i + 1] == 0.0:
            continue
        else:
            y = brentq(normalized_critical, grid[i], grid[i + 1], args=(d,), xtol=1e-15, rtol=1e-15)
        res = abs(normalized_critical(y, d))
        if res > SOLVER_TOL:
            raise ConvergenceError(f"critical zero near y={y} has residual {res:.2e}")
        out.append(ZeroRecord(d, 0.5 * d, float(y), CRITICAL, float(res)))
    # a same-sign local extremum close to zero can hide a pair of zeros
    for i in range(1, n):
        v0, v1, v2 = vals[i - 1], vals[i], vals[i + 1]
        extremum = (abs(v1) < abs(v0)) and (abs(v1) < abs(v2))
        if extremum and np.sign(v0) == np.sign(v1) == np.sign(v2):
            curvature = abs(v0 - 2 * v1 + v2)
            if abs(v1) < 0.5 * curvature:
                warnings.warn(
                    f"possible unresolved zero pair near rho_y={grid[i]:.3f} at d={d}; "
                    "reduce the scan step", ResolutionWarning, stacklevel=2)
    return out


# --- off-critical zeros -------------------------------------------------------------

def offcritical_residual(delta_rho_x, rho_y, d, spec=DEFAULT_SPEC):
    """(Re F, Im F) at s = d/2 + delta_rho_x + i rho_y."""
    _check_d(d)
    s = complex(0.5 * d + delta_rho_x, rho_y)
    if s == 0 or s == d:
        raise PoleError(f"pole of the explicit terms at s={s}")
    f = completed_contour(s, d, (0,))[0]
    return f.real, f.imag


def _classify(d, s, res):
    dx = s.real - 0.5 * d
    y = abs(s.imag)
    if abs(dx) < 1e-9:
        return ZeroRecord(d, 0.5 * d, y, CRITICAL, res)
    kind = REAL_OFF_CRITICAL if y < 1e-12 else OFF_CRITICAL
    return ZeroRecord(d, s.real, 0.0 if kind == REAL_OFF_CRITICAL else y, kind, res)


def newton_complex(s0, d, tol=SOLVER_TOL, max_iter=50, norm_y=None):
    """Damped Newton for F(s, d) = 0 in the complex s plane.

    Returns ``(s, normalized_residual)``. The residual is |F| divided by the
    critical-line scale at the starting height.
    """
    s = complex(s0)
    nrm = scale(d, abs(s.imag) if norm_y is None else norm_y)
    f, fp = completed_contour(s, d, (0, 1))
    r = abs(f) / nrm
    for _ in range(max_iter):
        if fp == 0:
            break
        step = -f / fp
        lam = 1.0
        while True:
            s_new = s + lam * step
            f_new, fp_new = completed_contour(s_new, d, (0, 1))
            r_new = abs(f_new) / nrm
            if r_new < r or lam < 1e-4:
                break
            lam *= 0.5
        s, f, fp = s_new, f_new, fp_new
        done = abs(lam * step) < 1e-14 * max(1.0, abs(s)) or r_new < 1e-15
        r = r_new
        if done or (r < tol and abs(lam * step) < 1e-12):
            break
    if not r < tol:
        raise ConvergenceError(f"Newton did not converge from {s0} (residual {r:.2e})")
    return s, r


def solve_offcritical(guess, d, spec=DEFAULT_SPEC, tol=SOLVER_TOL):
    """Zero of (Re F, Im F) near ``guess = (delta_rho_x, rho_y)``."""
    _check_d(d)
    dx, y = guess
    s, r = newton_complex(complex(0.5 * d + dx, y), d, tol)
    return _classify(d, s, float(r))


# --- edge points ----------------------------------------------------------------------

def _edge_system(d, y):
    g0, g1, g2 = critical_derivatives(y, d, (0, 1, 2))
    return g0, g1, g2


def find_edge(guess_d, guess_rho_y, spec=DEFAULT_SPEC, tol=SOLVER_TOL, max_iter=50,
              with_coefficients=True):
    """Fold of a critical curve: G = dG/dy = 0 solved by Newton in (d, y)."""
    d, y = float(guess_d), float(guess_rho_y)
    _check_d(d)
    h = FD_STEP_D
    res = math.inf
    for _ in range(max_iter):
        g0, g1, g2 = _edge_system(d, y)
        p0, p1 = critical_derivatives(y, d + h, (0, 1))
        m0, m1 = critical_derivatives(y, d - h, (0, 1))
        jac = np.array([[(p0 - m0) / (2 * h), g1], [(p1 - m1) / (2 * h), g2]])
        nrm = scale(d, y)
        res = math.hypot(g0, g1) / nrm
        try:
            step = np.linalg.solve(jac, -np.array([g0, g1]))
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError("singular edge Jacobian") from exc
        lam = 1.0
        while lam > 1e-3:
            dn, yn = d + lam * step[0], y + lam * step[1]
            if dn > 0:
                a0, a1 = critical_derivatives(yn, dn, (0, 1))
                if math.hypot(a0, a1) / scale(dn, yn) < max(res, 1e-15) or lam < 0.1:
                    break
            lam *= 0.5
        d, y = d + lam * step[0], y + lam * step[1]
        if abs(lam * step[0]) < 1e-14 and abs(lam * step[1]) < 1e-13:
            break
    a0, a1 = critical_derivatives(y, d, (0, 1))
    res = math.hypot(a0, a1) / scale(d, y)
    if not res < tol:
        raise ConvergenceError(f"edge Newton did not converge (residual {res:.2e})")
    if abs(y) < 1e-9:
        y = 0.0
    edge = EdgePoint(d, abs(y), label=table1_label(d, y), residual=float(res))
    if with_coefficients:
        a, b, g, dl = edge_coefficients(edge, spec)
        if abs(g) / scale(d, y) < 1e-8:
            raise DegenerateFoldError(f"gamma vanishes at the fold d*={d}, y*={y}")
        edge = replace(edge, alpha=a, beta=b, gamma=g, delta=dl)
        edge = replace(edge, orientation=classify_edge(edge, 1e-3, spec))
    return edge


def _coefficients_integral(d, y, spec):
    a2 = (0.5 * d) ** 2
    den = a2 + y * y
    p = 0.25 * d

    def k(**kw):
        return integrate(MellinKernel(p=p, d=d, omega=y, **kw), spec).real

    alpha = (a2 - y * y) / den ** 2 + k(trig="cos", log_power=1, coeff=0.25) \
        + k(trig="cos", base="ddiff")
    beta = 2 * y * (3 * a2 - y * y) / den ** 3 + k(trig="sin", log_power=2, coeff=0.125) \
        + k(trig="sin", log_power=1, base="ddiff", coeff=0.5)
    gamma = d * (a2 - 3 * y * y) / den ** 3 - k(trig="cos", log_power=2, coeff=0.125)
    delta = 4 * d * y * (a2 - y * y) / den ** 4 - k(trig="sin", log_power=3, coeff=1.0 / 48)
    return alpha, beta, gamma, delta


def _coefficients_contour(d, y):
    h = 1e-4
    g = critical_derivatives(y, d, (0, 1, 2, 3))
    p = critical_derivatives(y, d + h, (0, 1))
    m = critical_derivatives(y, d - h, (0, 1))
    alpha = (p[0] - m[0]) / (2 * h)
    beta = -(p[1] - m[1]) / (2 * h)
    return alpha, beta, 0.5 * g[2], -g[3] / 6.0


def edge_coefficients(edge, spec=DEFAULT_SPEC, method="auto"):
    """Expansion coefficients (alpha, beta, gamma, delta) at an edge point.

    ``method="integral"`` evaluates the coefficient integrals on the real
    axis (accurate while rho_y* stays below ~25); ``"contour"`` uses
    derivatives of G along the rotated contour. ``"auto"`` picks by rho_y*.
    """
    d, y = edge.d_star, edge.rho_y_star
    if method == "auto":
        method = "integral" if abs(y) < 25.0 else "contour"
    if method == "integral":
        return _coefficients_integral(d, y, spec)
    if method == "contour":
        return _coefficients_contour(d, y)
    raise DomainError(f"unknown method {method!r}")


def _solve_d_on_curve(y, d0, max_iter=40):
    d = d0
    h = FD_STEP_D
    for _ in range(max_iter):
        g = critical_derivatives(y, d, (0,))[0]
        gp = (critical_derivatives(y, d + h, (0,))[0] - critical_derivatives(y, d - h, (0,))[0]) / (2 * h)
        step = -g / gp
        d += step
        if abs(step) < 1e-15 * max(1.0, abs(d)):
            break
    return d


def classify_edge(edge, probe=1e-3, spec=DEFAULT_SPEC):
    """'left' if the curve bends towards larger d around the fold, 'right' otherwise."""
    if not (0.0 < probe <= 1e-3):
        raise DomainError("probe must lie in (0, 1e-3]")
    d0, y0 = edge.d_star, edge.rho_y_star
    shifts = [_solve_d_on_curve(y0 + sgn * probe, d0) - d0 for sgn in (1.0, -1.0)]
    if all(v > 0 for v in shifts):
        return "left"
    if all(v < 0 for v in shifts):
        return "right"
    raise InconsistentProbeError(f"probes disagree at edge d*={d0}: shifts {shifts}")


@dataclass(frozen=True)
class SingularPrediction:
    """Leading-order branches next to an edge.

    On the critical side ``rho_y`` holds the two branch heights; on the
    off-critical side ``delta_rho_x`` holds the pair (+, -) and ``rho_y`` the
    common height.
    """

    side: str
    d: float
    rho_y: tuple
    delta_rho_x: tuple = field(default=(0.0, 0.0))


def singular_prediction(edge, d):
    dd = d - edge.d_star
    ratio = -edge.alpha / edge.gamma
    lin = edge.linear_coefficient * dd
    y0 = edge.rho_y_star
    if dd == 0.0:
        return SingularPrediction("edge", d, (y0, y0))
    if ratio * dd > 0:
        r = math.sqrt(ratio * dd)
        return SingularPrediction(CRITICAL, d, (y0 + r + lin, y0 - r + lin))
    r = math.sqrt(-ratio * dd)
    return SingularPrediction(OFF_CRITICAL, d, (y0 + lin,), (r, -r))


def critical_side_prediction(edge, d):
    pred = singular_prediction(edge, d)
    if pred.side == OFF_CRITICAL:
        raise DomainError("critical branches are imaginary on this side of the edge")
    return pred


def offcritical_side_prediction(edge, d):
    pred = singular_prediction(edge, d)
    if pred.side == CRITICAL:
        raise DomainError("off-critical branches are imaginary on this side of the edge")
    return pred
