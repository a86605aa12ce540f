"""Exception hierarchy shared by all modules.

Each exception carries the process exit status the command-line front end
reports for it.
"""


class EpsteinError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 1
    code = "error"


class DomainError(EpsteinError, ValueError):
    """An argument lies outside the domain of an operation."""

    exit_code = 2
    code = "domain"


class PoleError(DomainError):
    """The requested point is a pole of the evaluated function."""

    code = "pole"


class ConvergenceError(EpsteinError, ArithmeticError):
    """An iterative procedure failed to reach its tolerance."""

    exit_code = 3
    code = "nonconvergence"


class StepCollapseError(ConvergenceError):
    """Continuation step size fell below the configured minimum."""

    code = "step_collapse"


class DegenerateFoldError(ConvergenceError):
    """The quadratic coefficient of a fold vanishes numerically."""

    code = "degenerate_fold"


class InconsistentProbeError(ConvergenceError):
    """Edge classification probes on either side disagree."""

    code = "inconsistent_probe"


class PersistenceError(EpsteinError, OSError):
    """Reading or writing a result file failed."""

    exit_code = 4
    code = "io"
