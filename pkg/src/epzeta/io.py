"""Reading and writing zero tables as CSV and versioned JSON."""

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .continuation import CurveSegment
from .errors import PersistenceError
from .quadrature import completed_contour
from .zeros import SOLVER_TOL, ZeroRecord, scale

FORMAT_VERSION = 1
COLUMNS = ("d", "rho_x", "rho_y", "kind", "residual", "curve_label")


def format_number(x):
    """Shortest round-trip decimal of ``x`` after rounding to 15 significant digits."""
    x = float(x)
    if not math.isfinite(x):
        return repr(x)
    return repr(float(f"{x:.15g}"))


def _rows(zeros=(), segments=()):
    for z in zeros:
        yield z, ""
    for seg in segments:
        for p in seg.points:
            yield p, seg.label


def to_csv(zeros=(), segments=()):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for z, label in _rows(zeros, segments):
        w.writerow([format_number(z.d), format_number(z.rho_x), format_number(z.rho_y),
                    z.kind, format_number(z.residual), label])
    return buf.getvalue()


def from_csv(text):
    """Parse CSV text into ``(zeros, segments)``; rows with a label become segments."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise PersistenceError(f"unexpected CSV header {reader.fieldnames}")
    zeros, segs = [], {}
    try:
        for row in reader:
            rec = ZeroRecord(float(row["d"]), float(row["rho_x"]), float(row["rho_y"]),
                             row["kind"], float(row["residual"]))
            label = row["curve_label"]
            if label:
                segs.setdefault(label, CurveSegment(label)).points.append(rec)
            else:
                zeros.append(rec)
    except (KeyError, ValueError) as exc:
        raise PersistenceError(f"malformed CSV row: {exc}") from exc
    return zeros, [s.finish("loaded") for s in segs.values()]


def _record_json(z, tol):
    return {"d": z.d, "rho_x": z.rho_x, "rho_y": z.rho_y, "kind": z.kind,
            "residual": z.residual, "tolerance": tol}


def _record_from_json(obj):
    return ZeroRecord(float(obj["d"]), float(obj["rho_x"]), float(obj["rho_y"]),
                      str(obj["kind"]), float(obj["residual"]))


def record_residual(z):
    """Normalized |F| at a stored zero, recomputed from scratch."""
    s = complex(z.rho_x, z.rho_y)
    f = completed_contour(s, z.d, (0,))[0]
    return abs(f) / scale(z.d, abs(z.rho_y))


@dataclass
class ZeroDatabase:
    """Zeros and traced curves together with the parameters that produced them."""

    zeros: list = field(default_factory=list)
    segments: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    tolerance: float = SOLVER_TOL

    def to_json(self):
        doc = {
            "format": FORMAT_VERSION,
            "header": {"parameters": self.parameters, "tolerance": self.tolerance},
            "zeros": [_record_json(z, self.tolerance) for z in self.zeros],
            "segments": [
                {"label": s.label, "termination": s.termination,
                 "edges": [e.label for e in s.edges],
                 "points": [_record_json(p, self.tolerance) for p in s.points]}
                for s in self.segments
            ],
        }
        return json.dumps(doc, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PersistenceError(f"not valid JSON: {exc}") from exc
        if doc.get("format") != FORMAT_VERSION:
            raise PersistenceError(f"unsupported format {doc.get('format')!r}")
        try:
            zeros = [_record_from_json(o) for o in doc["zeros"]]
            segs = []
            for o in doc["segments"]:
                seg = CurveSegment(o["label"], [_record_from_json(p) for p in o["points"]])
                segs.append(seg.finish(o.get("termination", "")))
            header = doc["header"]
            return cls(zeros, segs, dict(header.get("parameters", {})),
                       float(header.get("tolerance", SOLVER_TOL)))
        except (KeyError, TypeError, ValueError) as exc:
            raise PersistenceError(f"malformed database: {exc}") from exc

    def save(self, path, fmt=None):
        fmt = fmt or ("csv" if str(path).endswith(".csv") else "json")
        text = to_csv(self.zeros, self.segments) if fmt == "csv" else self.to_json()
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise PersistenceError(f"cannot write {path}: {exc}") from exc

    @classmethod
    def load(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise PersistenceError(f"cannot read {path}: {exc}") from exc
        if str(path).endswith(".csv"):
            zeros, segs = from_csv(text)
            return cls(zeros, segs)
        return cls.from_json(text)

    def revalidate(self, factor=10.0):
        """Records whose recomputed residual exceeds ``factor`` times what was stored.

        Stored residuals below the tolerance are compared against the tolerance
        instead, since rounding of the stored coordinates alone moves them.
        """
        bad = []
        for z, _ in _rows(self.zeros, self.segments):
            r = record_residual(z)
            if r > factor * max(z.residual, self.tolerance):
                bad.append((z, r))
        return bad
