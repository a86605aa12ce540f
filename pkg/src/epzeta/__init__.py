"""Epstein zeta function of the hypercubic lattice in continuous dimension."""

from .errors import (ConvergenceError, DegenerateFoldError, DomainError, EpsteinError,
                     InconsistentProbeError, PersistenceError, PoleError, StepCollapseError)
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .zeta import closed_form, completed_epstein, d0_limit, epstein_zeta
from .zeros import EdgePoint, ZeroRecord, find_critical_zeros, find_edge, solve_offcritical

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DegenerateFoldError", "DomainError", "EpsteinError",
    "InconsistentProbeError", "PersistenceError", "PoleError", "StepCollapseError",
    "DEFAULT_SPEC", "QuadratureSpec", "closed_form", "completed_epstein", "d0_limit",
    "epstein_zeta", "EdgePoint", "ZeroRecord", "find_critical_zeros", "find_edge",
    "solve_offcritical",
]
