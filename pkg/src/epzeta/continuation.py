"""Tracing zero curves in the (d, rho) plane.

Critical curves G(d, y) = 0 are followed by pseudo-arclength continuation so
that folds (edge points) are passed without trouble. Off-critical tails are
followed in d, starting from the singular expansion at an edge; near their
far end they may run into another edge, where the off-critical pair merges
back onto the critical line.
"""

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConvergenceError, DomainError, StepCollapseError
from .quadrature import DEFAULT_SPEC
from .zeros import (CRITICAL, SOLVER_TOL, EdgePoint, ZeroRecord, critical_derivatives,
                    find_edge, newton_complex, scale, singular_prediction, table1_label,
                    _classify)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TraceConfig:
    initial_step: float = 0.02
    min_step: float = 1e-6
    max_step: float = 0.1
    max_points: int = 5000
    stop_d_low: float = 1e-3
    stop_d_high: float = 12.0

    def __post_init__(self):
        if not (0 < self.min_step <= self.initial_step <= self.max_step):
            raise DomainError("need 0 < min_step <= initial_step <= max_step")
        if self.max_points < 2:
            raise DomainError("max_points must be >= 2")


@dataclass
class CurveSegment:
    label: str
    points: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    d_range: tuple = (math.nan, math.nan)
    termination: str = ""

    def finish(self, reason):
        ds = [p.d for p in self.points]
        self.d_range = (min(ds), max(ds)) if ds else (math.nan, math.nan)
        self.termination = reason
        return self

    def as_arrays(self):
        return (np.array([p.d for p in self.points]),
                np.array([p.rho_x for p in self.points]),
                np.array([p.rho_y for p in self.points]))


# --- critical curves -----------------------------------------------------------------

def _grad(d, y, h=1e-5):
    """G/N and its gradient (d, y) at a point; N is frozen at the point."""
    g0, g1 = critical_derivatives(y, d, (0, 1))
    gp = critical_derivatives(y, d + h, (0,))[0]
    gm = critical_derivatives(y, d - h, (0,))[0]
    n = scale(d, y)
    return g0 / n, np.array([(gp - gm) / (2 * h), g1]) / n


def _tangent(grad, prev=None, d_sign=None):
    t = np.array([-grad[1], grad[0]])
    t /= np.linalg.norm(t)
    if prev is not None and np.dot(t, prev) < 0:
        t = -t
    elif prev is None and d_sign is not None and t[0] * d_sign < 0:
        t = -t
    return t


def _correct(x_pred, t, tol=SOLVER_TOL * 0.1, max_iter=8):
    """Newton on {G/N = 0, t . (x - x_pred) = 0}."""
    x = x_pred.copy()
    for _ in range(max_iter):
        if x[0] <= 0:
            return None
        z, g = _grad(x[0], x[1])
        jac = np.array([g, t])
        rhs = -np.array([z, np.dot(t, x - x_pred)])
        try:
            dx = np.linalg.solve(jac, rhs)
        except np.linalg.LinAlgError:
            return None
        x = x + dx
        if np.linalg.norm(dx) < 1e-13 * max(1.0, np.linalg.norm(x)):
            break
    if x[0] <= 0:
        return None
    z, g = _grad(x[0], x[1])
    if abs(z) > SOLVER_TOL:
        return None
    return x, g, abs(z)


def trace_critical_curve(seed, cfg=TraceConfig(), spec=DEFAULT_SPEC, direction=-1.0,
                         label=None):
    """Follow the critical curve through ``seed`` by pseudo-arclength continuation.

    ``direction`` gives the sign of the initial d-motion. Stops on closure,
    on leaving [stop_d_low, stop_d_high], at max_points, or where the curve
    reaches the real axis (rho_y = 0), which is polished as an edge.
    """
    if seed.kind != CRITICAL:
        raise DomainError("seed must be a critical zero")
    x = np.array([seed.d, seed.rho_y], dtype=float)
    z, g = _grad(*x)
    if abs(z) > SOLVER_TOL:
        raise DomainError(f"seed is not a zero (normalized residual {abs(z):.2e})")
    t = _tangent(g, d_sign=direction)
    start, t_start = x.copy(), t.copy()
    seg = CurveSegment(label or "")
    seg.points.append(ZeroRecord(x[0], 0.5 * x[0], x[1], CRITICAL, abs(z)))
    h = cfg.initial_step
    successes = 0
    travelled = 0.0
    while len(seg.points) < cfg.max_points:
        out = _correct(x + h * t, t)
        if out is None or np.linalg.norm(out[0] - x) > 2.0 * h:
            h *= 0.5
            successes = 0
            if h < cfg.min_step:
                raise StepCollapseError(f"step collapsed at d={x[0]:.6g}, y={x[1]:.6g}")
            continue
        x_new, g_new, res = out
        if x_new[1] < 0.0:
            # crossed the real axis: the curve ends on a rho_y = 0 edge
            edge = find_edge(x[0], 0.0, spec)
            seg.edges.append(edge)
            seg.points.append(ZeroRecord(edge.d_star, 0.5 * edge.d_star, 0.0, CRITICAL, edge.residual))
            return seg.finish("real_axis")
        if not (cfg.stop_d_low <= x_new[0] <= cfg.stop_d_high):
            return seg.finish("d_range")
        t_new = _tangent(g_new, prev=t)
        travelled += np.linalg.norm(x_new - x)
        x, t = x_new, t_new
        seg.points.append(ZeroRecord(x[0], 0.5 * x[0], x[1], CRITICAL, res))
        if travelled > 4 * cfg.max_step and np.linalg.norm(x - start) < h and np.dot(t, t_start) > 0:
            seg.points.append(seg.points[0])
            return seg.finish("closed")
        successes += 1
        if successes >= 3:
            h = min(h * 1.3, cfg.max_step)
            successes = 0
        # do not let the predictor jump over the starting point of a loop
        gap = np.linalg.norm(x - start)
        if travelled > 4 * cfg.max_step and gap < 2 * h:
            h = max(min(h, 0.5 * gap), cfg.min_step)
    return seg.finish("max_points")


def detect_edges(curve, spec=DEFAULT_SPEC):
    """Folds along a traced curve: reversals of the d-direction, polished by find_edge."""
    d, _, y = curve.as_arrays()
    found = [e for e in curve.edges]
    step = np.diff(d)
    for i in range(1, len(step)):
        if step[i - 1] * step[i] < 0:
            j = i if abs(step[i - 1]) < abs(step[i]) else i
            edge = find_edge(d[j], y[j], spec)
            if not any(abs(edge.d_star - e.d_star) < 1e-7 and abs(edge.rho_y_star - e.rho_y_star) < 1e-7
                       for e in found):
                found.append(edge)
    return found


# --- off-critical tails ------------------------------------------------------------------

START_OFFSET = 1e-4


def _extrapolate(ds, vals, d_new, order=2):
    k = min(len(ds), order + 1)
    if k == 1:
        return vals[-1]
    coef = np.polyfit(np.array(ds[-k:]) - ds[-1], np.array(vals[-k:]), k - 1)
    return np.polyval(coef, d_new - ds[-1])


def _tail_direction(edge):
    """+1 if off-critical zeros exist for d > d*, -1 otherwise."""
    probe = singular_prediction(edge, edge.d_star + 1e-6)
    return 1.0 if probe.side != CRITICAL else -1.0


def trace_offcritical_tail(edge, branch="plus", cfg=TraceConfig(), spec=DEFAULT_SPEC,
                           d_stop=None, label=None):
    """Follow the off-critical zeros born at ``edge``.

    ``branch`` selects the sign of rho_x - d/2. The tail is parametrised by
    d, which is stepped away from the edge; the predictor extrapolates
    (delta_rho_x^2, rho_y), both regular functions of d even next to an
    edge. If the extrapolated delta_rho_x^2 would change sign, the tail is
    about to merge back onto the critical line: that edge is polished,
    attached to the segment, and tracing stops.
    """
    if branch not in ("plus", "minus"):
        raise DomainError("branch must be 'plus' or 'minus'")
    sgn = 1.0 if branch == "plus" else -1.0
    direction = _tail_direction(edge)
    if d_stop is None:
        d_stop = cfg.stop_d_high if direction > 0 else cfg.stop_d_low
    seg = CurveSegment(label or f"{edge.label or 'edge'}-{branch}-tail")
    seg.edges.append(edge)

    d = edge.d_star + direction * START_OFFSET
    pred = singular_prediction(edge, d)
    dx0 = sgn * abs(pred.delta_rho_x[0])
    s, res = newton_complex(complex(0.5 * d + dx0, pred.rho_y[0]), d)
    rec = _classify(d, s, float(res))
    if rec.kind == CRITICAL or (rec.rho_x - 0.5 * d) * sgn <= 0:
        raise ConvergenceError("first tail point fell back onto the critical line")
    seg.points.append(rec)

    ds, x2s, ys = [d], [(rec.rho_x - 0.5 * d) ** 2], [rec.rho_y]
    h = max(START_OFFSET, cfg.min_step)
    successes = 0
    while len(seg.points) < cfg.max_points:
        if (d_stop - d) * direction <= 1e-15:
            return seg.finish("d_range")
        d_new = d + direction * h
        if (d_stop - d_new) * direction < 0:
            d_new = d_stop
        x2_pred = _extrapolate(ds, x2s, d_new)
        if x2_pred <= 0.0 and len(ds) >= 3:
            # reconnection ahead: locate where delta_rho_x^2 reaches zero
            coef = np.polyfit(np.array(ds[-3:]) - ds[-1], np.array(x2s[-3:]), 1)
            d_cross = ds[-1] - coef[1] / coef[0]
            y_cross = _extrapolate(ds, ys, d_cross)
            if abs(d_cross - d) < 0.05 and math.sqrt(x2s[-1]) < 0.1:
                terminal = find_edge(d_cross, y_cross, spec)
                seg.edges.append(terminal)
                return seg.finish("reconnected")
            h *= 0.5
            if h < cfg.min_step:
                raise StepCollapseError(f"tail step collapsed near d={d:.6g}")
            continue
        y_pred = _extrapolate(ds, ys, d_new)
        if len(ds) < 3:
            early = singular_prediction(edge, d_new)
            x2_pred, y_pred = early.delta_rho_x[0] ** 2, early.rho_y[0]
        dx_pred = sgn * math.sqrt(max(x2_pred, 0.0))
        try:
            s, res = newton_complex(complex(0.5 * d_new + dx_pred, y_pred), d_new)
            rec = _classify(d_new, s, float(res))
        except ConvergenceError:
            rec = None
        moved = None if rec is None else math.hypot(rec.rho_x - (0.5 * d_new + dx_pred), rec.rho_y - y_pred)
        jump = None if rec is None else math.hypot(rec.rho_x - seg.points[-1].rho_x,
                                                   rec.rho_y - seg.points[-1].rho_y)
        ok = (rec is not None and rec.kind != CRITICAL
              and (rec.rho_x - 0.5 * d_new) * sgn > 0
              and moved < 0.25 * max(jump, 1e-3) + 1e-6
              and jump <= 2.0 * cfg.max_step)
        if not ok:
            h *= 0.5
            successes = 0
            if h < cfg.min_step:
                raise StepCollapseError(f"tail step collapsed near d={d:.6g}")
            continue
        d = d_new
        seg.points.append(rec)
        ds.append(d)
        x2s.append((rec.rho_x - 0.5 * d) ** 2)
        ys.append(rec.rho_y)
        successes += 1
        # grow by the geometric law near the edge, capped by the motion per step
        if successes >= 3 or jump < 0.3 * cfg.max_step:
            h = min(h * 1.3, cfg.max_step, max(h, 2.0 * h * cfg.max_step / max(jump, 1e-12)))
            successes = 0
    return seg.finish("max_points")


def trace_full_curve(seed, cfg=TraceConfig(), spec=DEFAULT_SPEC, label=None):
    """Trace through ``seed`` in both directions and join the halves.

    A closed curve comes back from the first direction; otherwise the
    second half is traced with the opposite orientation, reversed and
    prepended.
    """
    first = trace_critical_curve(seed, cfg, spec, direction=-1.0)
    if first.termination == "closed":
        first.label = label or first.label
        first.edges = detect_edges(first, spec)
        return first
    second = trace_critical_curve(seed, cfg, spec, direction=1.0)
    seg = CurveSegment(label or "")
    seg.points = list(reversed(second.points)) + first.points[1:]
    seg.edges = []
    seg.finish(f"{second.termination}|{first.termination}")
    for e in second.edges + first.edges:
        seg.edges.append(e)
    seg.edges = detect_edges(seg, spec)
    return seg
