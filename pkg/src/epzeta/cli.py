"""Command-line front end.

Every subcommand writes CSV (default) or JSON to ``--output`` or stdout.
Errors are reported on stderr as one JSON object ``{"error": code, "message": ...}``
and map to exit status 2 (domain or pole), 3 (no convergence) or 4 (I/O).

The environment variables ``EPZETA_ABS_TOL`` and ``EPZETA_REL_TOL`` override the
default quadrature tolerances; explicit ``--abs-tol``/``--rel-tol`` win over both.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import analysis
from .continuation import TraceConfig, trace_critical_curve, trace_full_curve, trace_offcritical_tail
from .errors import DomainError, EpsteinError, PersistenceError
from .io import ZeroDatabase, format_number, to_csv
from .quadrature import QuadratureSpec
from .zeros import TABLE1, TABLE1_BY_LABEL, find_critical_zeros, find_edge
from .zeta import closed_form, completed_epstein, epstein_zeta, lattice_sum_oracle

ENV_ABS_TOL = "EPZETA_ABS_TOL"
ENV_REL_TOL = "EPZETA_REL_TOL"


@dataclass
class RunConfig:
    command: str
    spec: QuadratureSpec
    output_format: str = "csv"
    output_path: str = ""
    options: dict = field(default_factory=dict)


def _env_float(name):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        val = float(raw)
    except ValueError:
        raise DomainError(f"{name}={raw!r} is not a number") from None
    return val


def build_spec(abs_tol=None, rel_tol=None):
    base = QuadratureSpec()
    a = abs_tol if abs_tol is not None else _env_float(ENV_ABS_TOL)
    r = rel_tol if rel_tol is not None else _env_float(ENV_REL_TOL)
    a = base.abs_tol if a is None else a
    r = base.rel_tol if r is None else r
    if not (a > 0 and r > 0):
        raise DomainError("tolerances must be positive")
    return QuadratureSpec(abs_tol=a, rel_tol=r)


def _complex_arg(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _emit(cfg, text):
    if not cfg.output_path:
        sys.stdout.write(text)
        return
    try:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise PersistenceError(f"cannot write {cfg.output_path}: {exc}") from exc


def _table(rows, columns, fmt):
    """Render a list of dicts as CSV or JSON."""
    if fmt == "json":
        return json.dumps({"format": 1, "rows": rows}, indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_number(row[c]) if isinstance(row[c], float) else row[c] for c in columns])
    return buf.getvalue()


def _database(cfg, zeros=(), segments=()):
    db = ZeroDatabase(list(zeros), list(segments), {"command": cfg.command, **cfg.options})
    return to_csv(db.zeros, db.segments) if cfg.output_format == "csv" else db.to_json() + "\n"


# --- commands ---------------------------------------------------------------

def cmd_eval(cfg):
    s, d = cfg.options["s"], cfg.options["d"]
    z = epstein_zeta(s, d, cfg.spec)
    row = {"s_re": s.real, "s_im": s.imag, "d": d, "zeta_re": z.real, "zeta_im": z.imag}
    cols = ["s_re", "s_im", "d", "zeta_re", "zeta_im"]
    if s != 0:
        f = completed_epstein(s, d, cfg.spec)
        row.update(F_re=f.value.real, F_im=f.value.imag, F_err=f.error)
        cols += ["F_re", "F_im", "F_err"]
    if cfg.options.get("oracle"):
        ref, bound, name = None, 0.0, ""
        if d in (2, 4, 6, 8):
            ref, name = closed_form(s, int(d)), "closed_form"
        elif d in (1, 3) and s.real >= d + 2:
            ref, bound = lattice_sum_oracle(s, int(d), 200)
            name = "lattice_sum"
        if ref is None:
            raise DomainError(f"no oracle available at d={d}, s={s}")
        row.update(oracle=name, oracle_diff=abs(z - ref), oracle_bound=bound)
        cols += ["oracle", "oracle_diff", "oracle_bound"]
    return _table([row], cols, cfg.output_format)


def _zeros_for(args):
    d, y_min, y_max, spec = args
    return find_critical_zeros(d, y_min, y_max, spec)


def cmd_zeros(cfg):
    o = cfg.options
    ds = o["d_list"] or [o["d"]]
    jobs = [(d, o["ymin"], o["ymax"], cfg.spec) for d in ds]
    if o["workers"] > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(o["workers"]) as ex:
            results = list(ex.map(_zeros_for, jobs))
    else:
        results = [_zeros_for(j) for j in jobs]
    zeros = sorted((z for r in results for z in r), key=lambda z: (z.d, z.rho_y))
    return _database(cfg, zeros)


_EDGE_COLUMNS = ["label", "orientation", "d_star", "half_d", "rho_y", "alpha", "beta",
                 "gamma", "delta", "residual"]


def _edge_row(e):
    return {"label": e.label, "orientation": e.orientation, "d_star": e.d_star,
            "half_d": e.half_d, "rho_y": e.rho_y_star, "alpha": e.alpha, "beta": e.beta,
            "gamma": e.gamma, "delta": e.delta, "residual": e.residual}


def cmd_edges(cfg):
    seeds = [(2 * r.half_d, r.rho_y) for r in TABLE1] if cfg.options["table1"] else []
    seeds += [tuple(p) for p in cfg.options["seed"] or []]
    if not seeds:
        raise DomainError("edges needs --table1 or at least one --seed D Y")
    rows = [_edge_row(find_edge(d, y, cfg.spec)) for d, y in seeds]
    return _table(rows, _EDGE_COLUMNS, cfg.output_format)


def _nearest_zero(d, y):
    zs = find_critical_zeros(d, max(y - 0.5, 1e-3), y + 0.5)
    if not zs:
        raise DomainError(f"no critical zero within 0.5 of rho_y={y} at d={d}")
    return min(zs, key=lambda z: abs(z.rho_y - y))


def _trace_config(o):
    return TraceConfig(max_points=o["max_points"], stop_d_low=o["d_min"], stop_d_high=o["d_max"])


def cmd_trace(cfg):
    o = cfg.options
    seed = _nearest_zero(o["d"], o["y"])
    tc = _trace_config(o)
    label = o["label"] or f"curve@{format_number(seed.d)},{format_number(seed.rho_y)}"
    if o["direction"] == "both":
        seg = trace_full_curve(seed, tc, cfg.spec, label)
    else:
        sign = 1.0 if o["direction"] == "up" else -1.0
        seg = trace_critical_curve(seed, tc, cfg.spec, sign, label)
    return _database(cfg, segments=[seg])


def _edge_for_label(label, spec):
    row = TABLE1_BY_LABEL.get(label)
    if row is None:
        raise DomainError(f"unknown edge label {label!r}; known: {', '.join(TABLE1_BY_LABEL)}")
    return find_edge(2 * row.half_d, row.rho_y, spec)


def cmd_tails(cfg):
    o = cfg.options
    if o["edge"]:
        edge = _edge_for_label(o["edge"], cfg.spec)
    elif o["seed"]:
        edge = find_edge(o["seed"][0], o["seed"][1], cfg.spec)
    else:
        raise DomainError("tails needs --edge LABEL or --seed D Y")
    tc = _trace_config(o)
    segs = [trace_offcritical_tail(edge, b, tc, cfg.spec, d_stop=o["d_stop"]) for b in ("plus", "minus")]
    if not cfg.output_path:
        return _database(cfg, segments=segs)
    root, ext = os.path.splitext(cfg.output_path)
    ext = ext or (".csv" if cfg.output_format == "csv" else ".json")
    for seg in segs:
        branch = seg.label.rsplit("-", 2)[-2]
        sub = RunConfig(cfg.command, cfg.spec, cfg.output_format, f"{root}-{branch}{ext}", cfg.options)
        _emit(sub, _database(sub, segments=[seg]))
    return None


def cmd_sumrules(cfg):
    o = cfg.options
    rows = []
    for k in (1, 2, 3):
        r = analysis.sum_rule_report(o["d"], k, o["ymax"], cfg.spec, o["n_riemann"], o["n_lattice"])
        rows.append({"d": r.d, "order": r.order, "integral": float(r.integral_value),
                     "partial_re": r.partial_sum.real, "partial_im": r.partial_sum.imag,
                     "zeros_used": r.zeros_used, "pairing": r.pairing})
    return _table(rows, ["d", "order", "integral", "partial_re", "partial_im", "zeros_used", "pairing"],
                  cfg.output_format)


def cmd_asympt(cfg):
    o = cfg.options
    d = o["d"]
    rows = []
    if d > 4 * math.pi:
        levels = analysis.equidistant_levels(d, o["n"] - 1)
        zeros = find_critical_zeros(d, 0.01, min(50.0, levels[-1] + 5.0), cfg.spec)
        for n, level in enumerate(levels):
            y = zeros[n].rho_y if n < len(zeros) else math.nan
            rows.append({"quantity": f"level_{n}", "computed": y, "prediction": level})
    if d > analysis.find_dc_star(cfg.spec):
        x, _ = analysis.real_pair(d, cfg.spec)
        rows.append({"quantity": "real_pair", "computed": x,
                     "prediction": analysis.rhoasym_prediction(d)})
    if not rows:
        raise DomainError("asympt needs d > 4 pi or d above the real-axis dimension")
    for r in rows:
        r["ratio"] = r["computed"] / r["prediction"]
    return _table(rows, ["quantity", "computed", "prediction", "ratio"], cfg.output_format)


COMMANDS = {"eval": cmd_eval, "zeros": cmd_zeros, "edges": cmd_edges, "trace": cmd_trace,
            "tails": cmd_tails, "sumrules": cmd_sumrules, "asympt": cmd_asympt}


def build_parser():
    p = argparse.ArgumentParser(prog="epzeta", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--abs-tol", type=float, default=None)
    common.add_argument("--rel-tol", type=float, default=None)
    common.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv")
    common.add_argument("-o", "--output", dest="output_path", default="")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate the Epstein zeta function")
    e.add_argument("--s", type=_complex_arg, required=True)
    e.add_argument("--d", type=float, required=True)
    e.add_argument("--oracle", action="store_true", help="compare with a closed form or lattice sum")

    z = sub.add_parser("zeros", parents=[common], help="critical zeros up to a height")
    z.add_argument("--d", type=float)
    z.add_argument("--d-list", type=float, nargs="+")
    z.add_argument("--ymin", type=float, default=0.01)
    z.add_argument("--ymax", type=float, default=40.0)
    z.add_argument("--workers", type=int, default=1)

    ed = sub.add_parser("edges", parents=[common], help="edge points with expansion coefficients")
    ed.add_argument("--table1", action="store_true", help="the eleven reference edges")
    ed.add_argument("--seed", type=float, nargs=2, action="append", metavar=("D", "Y"))

    trace_opts = argparse.ArgumentParser(add_help=False)
    trace_opts.add_argument("--max-points", type=int, default=5000)
    trace_opts.add_argument("--d-min", type=float, default=1e-3)
    trace_opts.add_argument("--d-max", type=float, default=12.0)

    t = sub.add_parser("trace", parents=[common, trace_opts], help="follow a critical curve")
    t.add_argument("--d", type=float, required=True)
    t.add_argument("--y", type=float, required=True, help="approximate rho_y of the seed zero")
    t.add_argument("--direction", choices=("up", "down", "both"), default="both")
    t.add_argument("--label", default="")

    tl = sub.add_parser("tails", parents=[common, trace_opts], help="off-critical tails of an edge")
    tl.add_argument("--edge", help="reference label such as 1a")
    tl.add_argument("--seed", type=float, nargs=2, metavar=("D", "Y"))
    tl.add_argument("--d-stop", type=float, default=None)

    sr = sub.add_parser("sumrules", parents=[common], help="sum rules against zero sums")
    sr.add_argument("--d", type=float, required=True, help="0 selects the d -> 0 limit")
    sr.add_argument("--ymax", type=float, default=45.0)
    sr.add_argument("--n-riemann", type=int, default=1000)
    sr.add_argument("--n-lattice", type=int, default=10000)

    a = sub.add_parser("asympt", parents=[common], help="large-d predictions against computed values")
    a.add_argument("--d", type=float, required=True)
    a.add_argument("--n", type=int, default=3)
    return p


def parse_config(argv=None):
    ns = build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(ns).items()
            if k not in ("command", "abs_tol", "rel_tol", "output_format", "output_path")}
    if ns.command == "zeros" and ns.d is None and not ns.d_list:
        raise DomainError("zeros needs --d or --d-list")
    return RunConfig(ns.command, build_spec(ns.abs_tol, ns.rel_tol), ns.output_format,
                     ns.output_path, opts)


def _report(exc):
    sys.stderr.write(json.dumps({"error": exc.code, "message": str(exc)}) + "\n")
    return exc.exit_code


def main(argv=None):
    try:
        cfg = parse_config(argv)
        text = COMMANDS[cfg.command](cfg)
        if text is not None:
            _emit(cfg, text)
    except EpsteinError as exc:
        return _report(exc)
    except OSError as exc:
        return _report(PersistenceError(str(exc)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
