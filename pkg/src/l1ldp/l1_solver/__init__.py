"""Dense simplex LP solver and l1 recovery."""

from .estimator import BasisPursuit
from .recovery import (
    LinearSystem,
    RecoveryResult,
    is_recovered,
    null_space_margin,
    null_space_success_check,
    solve_l1,
    solve_l1_nonneg,
)
from .simplex import LpProblem, LpResult, LpStatus, solve_lp, solve_standard

__all__ = [
    "BasisPursuit",
    "LinearSystem",
    "LpProblem",
    "LpResult",
    "LpStatus",
    "RecoveryResult",
    "is_recovered",
    "null_space_margin",
    "null_space_success_check",
    "solve_l1",
    "solve_l1_nonneg",
    "solve_lp",
    "solve_standard",
]
