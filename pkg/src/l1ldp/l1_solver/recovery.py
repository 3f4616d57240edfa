"""Basis pursuit by linear programming, and the exact null-space test."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import linalg as _la

from ..errors import DomainError
from ..pt_core import Mode
from .simplex import LpResult, LpStatus, SingularBasis, crash_columns, independent_columns, solve_split, solve_standard

FEAS_TOL = 1e-9
RECOVERY_TOL = 1e-6


@dataclass
class LinearSystem:
    a: np.ndarray
    y: np.ndarray
    check_rank: bool = True

    def __post_init__(self):
        self.a = np.atleast_2d(np.asarray(self.a, dtype=float))
        self.y = np.asarray(self.y, dtype=float).reshape(-1)
        m, n = self.a.shape
        if self.y.shape != (m,):
            raise DomainError(f"y has length {self.y.size}, expected {m}")
        if m > n:
            raise DomainError(f"need m <= n, got {m} x {n}")
        if not (np.all(np.isfinite(self.a)) and np.all(np.isfinite(self.y))):
            raise DomainError("system contains non-finite entries")
        if self.check_rank and m:
            _, rank = independent_columns(self.a)
            if rank < m:
                raise DomainError(f"matrix is rank deficient (rank {rank} < {m})")

    @property
    def shape(self):
        return self.a.shape


@dataclass
class RecoveryResult:
    x_hat: np.ndarray
    objective: float
    status: LpStatus
    lp: Optional[LpResult] = None

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def _wrap(lp: LpResult, x: np.ndarray, sys: LinearSystem, feas_tol: float, cost_norm) -> RecoveryResult:
    status = lp.status
    if status is LpStatus.OPTIMAL and sys.a.shape[0]:
        if float(np.max(np.abs(sys.a @ x - sys.y))) > feas_tol * max(1.0, float(np.max(np.abs(sys.y)))):
            # The final vertex drifted; treat as an artifact failure, not a recovery decision.
            status = LpStatus.ITERATION_LIMIT
    return RecoveryResult(x, float(cost_norm(x)), status, lp)


def solve_l1(sys: LinearSystem, feas_tol: float = FEAS_TOL, **kwargs) -> RecoveryResult:
    """``min ||x||_1  s.t.  A x = y`` via ``x = u - v`` with ``u, v >= 0``.

    Starts from a basis of independent columns whose signs are fixed by the
    sign of the basic solution, so it is primal feasible and phase one is
    unnecessary.
    """
    a, y = sys.a, sys.y
    m, n = a.shape
    basis = None
    if m:
        try:
            cols, lu = crash_columns(a)
            xb = _la.lu_solve(lu, y, check_finite=False)
            basis = np.where(xb >= 0.0, cols, cols + n)
        except SingularBasis:
            basis = None
    lp = solve_split(a, y, basis, **kwargs)
    x = lp.x[:n] - lp.x[n:]
    return _wrap(lp, x, sys, feas_tol, lambda v: np.sum(np.abs(v)))


def solve_l1_nonneg(sys: LinearSystem, feas_tol: float = FEAS_TOL, **kwargs) -> RecoveryResult:
    """``min 1'x  s.t.  A x = y, x >= 0`` (two-phase simplex)."""
    a, y = sys.a, sys.y
    n = a.shape[1]
    lp = solve_standard(np.ones(n), a, y, **kwargs)
    return _wrap(lp, lp.x.copy(), sys, feas_tol, lambda v: np.sum(np.abs(v)))


def is_recovered(x_hat: np.ndarray, x0: np.ndarray, tol: float = RECOVERY_TOL) -> bool:
    """Exact-recovery decision up to floating point."""
    x0 = np.asarray(x0, dtype=float)
    scale = max(1.0, float(np.max(np.abs(x0)))) if x0.size else 1.0
    return bool(np.max(np.abs(np.asarray(x_hat) - x0), initial=0.0) <= tol * scale)


def null_space_margin(a, support: Sequence[int], signs=None, mode=Mode.SIGNED, **kwargs) -> float:
    """``min sum_off |w|`` over ``{A w = 0, sum_S s_i w_i = -1}`` (``w_off >= 0`` if nonneg).

    Returns ``inf`` when no null-space vector satisfies the normalization.
    """
    mode = Mode.parse(mode)
    a = np.atleast_2d(np.asarray(a, dtype=float))
    m, n = a.shape
    support = np.asarray(support, dtype=np.intp)
    off = np.setdiff1d(np.arange(n), support)
    s = np.ones(support.size) if signs is None or mode is Mode.NONNEGATIVE else np.asarray(signs, float)
    a_off, a_s = a[:, off], a[:, support]
    k, p = support.size, off.size
    blocks = [a_off, -a_off] if mode is Mode.SIGNED else [a_off]
    n_off = len(blocks) * p
    A = np.zeros((m + 1, n_off + 2 * k))
    A[:m, :n_off] = np.hstack(blocks) if blocks else np.zeros((m, 0))
    A[:m, n_off:n_off + k] = a_s
    A[:m, n_off + k:] = -a_s
    A[m, n_off:n_off + k] = s
    A[m, n_off + k:] = -s
    b = np.zeros(m + 1)
    b[m] = -1.0
    c = np.zeros(A.shape[1])
    c[:n_off] = 1.0
    lp = solve_standard(c, A, b, **kwargs)
    if lp.status is LpStatus.INFEASIBLE:
        return np.inf
    if lp.status is not LpStatus.OPTIMAL:
        raise RuntimeError(f"null-space LP ended with status {lp.status.value}")
    return lp.objective


def null_space_success_check(
    a,
    support: Sequence[int],
    signs=None,
    mode=Mode.SIGNED,
    trials: int = 0,
    rng: Optional[np.random.Generator] = None,
) -> bool:
    """Decide the deterministic recovery condition for a fixed support and signs.

    The condition ``-sum_S s_i w_i < sum_off |w_i|`` for all nonzero null
    vectors (``w_off >= 0`` in the nonnegative case) is decided exactly by
    an LP.  With ``trials > 0`` random null vectors are tried first; any
    violation found there settles the answer early.
    """
    mode = Mode.parse(mode)
    a = np.atleast_2d(np.asarray(a, dtype=float))
    m, n = a.shape
    support = np.asarray(support, dtype=np.intp)
    if support.size and (support.min() < 0 or support.max() >= n or np.unique(support).size != support.size):
        raise DomainError("support must hold distinct column indices")
    if support.size > m:
        raise DomainError("support larger than the number of rows")
    if m >= n:
        return True
    if support.size:
        if independent_columns(a[:, support])[1] < support.size:
            return False
    else:
        return True
    s = np.ones(support.size) if signs is None or mode is Mode.NONNEGATIVE else np.sign(np.asarray(signs, float))
    off = np.setdiff1d(np.arange(n), support)
    if trials > 0:
        rng = rng if rng is not None else np.random.default_rng(0)
        basis = _la.null_space(a)
        for _ in range(trials):
            w = basis @ rng.standard_normal(basis.shape[1])
            for v in (w, -w):
                if mode is Mode.NONNEGATIVE and np.any(v[off] < 0):
                    continue
                lhs = -float(s @ v[support])
                rhs = float(np.sum(np.abs(v[off])))
                if lhs >= rhs:
                    return False
    return null_space_margin(a, support, s, mode) > 1.0 + 1e-9
