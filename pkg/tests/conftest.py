import mpmath
import pytest
from hypothesis import settings

settings.register_profile("epzeta", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("epzeta")

mpmath.mp.dps = 30


@pytest.fixture(scope="session")
def mp():
    """High-precision reference arithmetic, used only as a test oracle."""
    return mpmath


def critical_seed_near(label, offset=1e-3):
    """A critical zero on the critical side of a reference edge, ``offset`` away in d."""
    from epzeta.zeros import TABLE1_BY_LABEL, find_edge, singular_prediction, solve_offcritical

    row = TABLE1_BY_LABEL[label]
    edge = find_edge(2 * row.half_d, row.rho_y + 1e-3)
    dd = offset if edge.orientation == "left" else -offset
    y = singular_prediction(edge, edge.d_star + dd).rho_y[0]
    return solve_offcritical((0.0, y), edge.d_star + dd)


class _CurveCache:
    def __init__(self):
        self._store = {}

    def full(self, label):
        from epzeta.continuation import TraceConfig, trace_full_curve

        if label not in self._store:
            self._store[label] = trace_full_curve(critical_seed_near(label), TraceConfig(), label=label)
        return self._store[label]


@pytest.fixture(scope="session")
def curves():
    """Full critical curves traced once per session, keyed by a reference edge label."""
    return _CurveCache()


class _TailCache:
    def __init__(self):
        self._store = {}

    def get(self, label, branch, d_stop=None):
        from epzeta.continuation import TraceConfig, trace_offcritical_tail
        from epzeta.zeros import TABLE1_BY_LABEL, find_edge

        key = (label, branch, d_stop)
        if key not in self._store:
            row = TABLE1_BY_LABEL[label]
            edge = find_edge(2 * row.half_d, row.rho_y)
            self._store[key] = trace_offcritical_tail(edge, branch, TraceConfig(), d_stop=d_stop)
        return self._store[key]


@pytest.fixture(scope="session")
def tails():
    return _TailCache()


_ACCEPTANCE = {}


@pytest.fixture(scope="session")
def criterion():
    """Record the outcome of an acceptance criterion for the end-of-run report."""

    def record(number, ok, detail):
        _ACCEPTANCE[number] = (bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
