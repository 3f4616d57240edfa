"""Dense revised simplex for ``min c'x  s.t.  A x = b, x >= 0``.

The basis inverse is held explicitly and kept current by rank-one updates.
Every ``refactor_every`` pivots, and again at optimality, the residuals of
the updated inverse are measured and it is rebuilt if they have drifted.  Pricing is Dantzig's rule; after a budget of degenerate
pivots the solver switches to Bland's rule, which cannot cycle.  The
pivoting loop itself is compiled (see ``_kernel``); this module handles
phase one, right-hand-side perturbation and optimality certificates.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg as _la

from . import _kernel as K

OPT_TOL = K.OPT_TOL
PERTURBATION = 1e-7


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


_KERNEL_STATUS = {
    K.OPTIMAL: LpStatus.OPTIMAL,
    K.UNBOUNDED: LpStatus.UNBOUNDED,
    K.ITERATION_LIMIT: LpStatus.ITERATION_LIMIT,
    # A basis lost to round-off is an artifact failure, reported like a stall.
    K.SINGULAR: LpStatus.ITERATION_LIMIT,
}


class SingularBasis(ArithmeticError):
    pass


@dataclass
class LpProblem:
    """``min cost'x  s.t.  eq_matrix x = eq_rhs, x >= lower_bounds``.

    Lower bounds may be finite or ``-inf`` (free variables).
    """

    cost: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    lower_bounds: Optional[np.ndarray] = None

    def __post_init__(self):
        self.cost = np.asarray(self.cost, dtype=float).reshape(-1)
        self.eq_rhs = np.asarray(self.eq_rhs, dtype=float).reshape(-1)
        n, m = self.cost.shape[0], self.eq_rhs.shape[0]
        self.eq_matrix = np.asarray(self.eq_matrix, dtype=float).reshape(m, -1) if m else np.zeros((0, n))
        if self.lower_bounds is None:
            self.lower_bounds = np.zeros(n)
        self.lower_bounds = np.asarray(self.lower_bounds, dtype=float).reshape(-1)
        if self.eq_matrix.shape != (m, n) or self.lower_bounds.shape != (n,):
            raise ValueError(
                f"inconsistent shapes: cost {self.cost.shape}, matrix {self.eq_matrix.shape}, "
                f"rhs {self.eq_rhs.shape}, bounds {self.lower_bounds.shape}"
            )
        if np.any(np.isposinf(self.lower_bounds)) or np.any(np.isnan(self.lower_bounds)):
            raise ValueError("lower bounds must be finite or -inf")


@dataclass
class LpResult:
    status: LpStatus
    x: np.ndarray
    objective: float
    basis: np.ndarray
    duals: np.ndarray
    reduced_costs: np.ndarray
    iterations: int = 0
    phase1_iterations: int = 0
    primal_residual: float = np.nan
    x_std: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.x_std is None:
            self.x_std = self.x

    @property
    def dual_infeasibility(self) -> float:
        """Largest violation of ``reduced_costs >= 0``."""
        if self.reduced_costs.size == 0:
            return 0.0
        return float(max(0.0, -self.reduced_costs.min()))

    @property
    def complementarity(self) -> float:
        """Largest ``|x_j r_j|``, relative to ``max(1, ||x||_inf)``."""
        if self.x_std.size == 0:
            return 0.0
        scale = max(1.0, float(np.max(np.abs(self.x_std))))
        return float(np.max(np.abs(self.x_std * self.reduced_costs))) / scale


class _State:
    def __init__(self, A, b, basis, split, max_iter, bland_after, refactor_every):
        self.A = np.ascontiguousarray(A, dtype=float)
        self.b = np.ascontiguousarray(b, dtype=float)
        self.split = split
        self.m = self.A.shape[0]
        self.N = 2 * self.A.shape[1] if split else self.A.shape[1]
        self.basis = np.array(basis, dtype=np.int64)
        self.in_basis = np.zeros(self.N, dtype=np.bool_)
        self.in_basis[self.basis] = True
        self.Binv = np.zeros((self.m, self.m))
        self.xB = np.zeros(self.m)
        self.counters = np.zeros(3, dtype=np.int64)
        self.limits = (max_iter, bland_after, refactor_every)
        if not K.refactor(self.A, self.b, self.basis, split, self.Binv, self.xB):
            raise SingularBasis("basis matrix is numerically singular")

    @property
    def iterations(self):
        return int(self.counters[0])

    def raw_primal(self):
        return self.Binv @ self.b

    def run(self, c, flags=None):
        if flags is None:
            flags = np.full(self.N, K.ELIGIBLE | (K.FLIPPABLE if self.split else 0), dtype=np.int8)
        code = K.run(self.A, self.b, np.ascontiguousarray(c, dtype=float), self.basis, self.in_basis,
                     self.Binv, self.xB, self.split, flags, *self.limits, self.counters)
        return _KERNEL_STATUS[int(code)]

    def reset_rhs(self, b):
        """Switch to ``b``; True if the current basis is primal feasible for it."""
        self.b = np.ascontiguousarray(b, dtype=float)
        if not K.refactor(self.A, self.b, self.basis, self.split, self.Binv, self.xB):
            return False
        self.counters[2] = 0
        raw = self.raw_primal()
        return raw.min() >= -1e-9 * max(1.0, float(np.max(np.abs(b))))

    def primal(self, N):
        x = np.zeros(self.N)
        x[self.basis] = self.xB
        return x[:N]


def independent_columns(a: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, int]:
    """Column indices chosen by pivoted QR, and the numerical rank."""
    if a.size == 0:
        return np.arange(0), 0
    _, r, piv = _la.qr(a, mode="economic", pivoting=True, check_finite=False)
    d = np.abs(np.diag(r))
    rank = int(np.sum(d > tol * max(1.0, d[0]))) if d.size else 0
    return piv, rank


def crash_columns(a):
    """``m`` independent columns, the leading ones when well conditioned, and their LU."""
    m = a.shape[0]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", _la.LinAlgWarning)
            lu = _la.lu_factor(a[:, :m], check_finite=False)
        d = np.abs(np.diag(lu[0]))
        if d.min() > 1e-10 * max(1.0, d.max()):
            return np.arange(m), lu
    except ValueError:
        pass
    piv, rank = independent_columns(a)
    if rank < m:
        raise SingularBasis("matrix is rank deficient")
    cols = np.sort(piv[:m])
    return cols, _la.lu_factor(a[:, cols], check_finite=False)


def _perturbation(a_times, N, bscale):
    """Right-hand-side shift ``eps * A p`` for a fixed, generic positive ``p``.

    Shifting along the range of ``A`` with ``p > 0`` keeps every feasible
    problem feasible and breaks the ties behind degenerate pivots.
    """
    p = 0.5 + np.modf(np.arange(1, N + 1) * 0.6180339887498949)[0]
    shift = a_times(p)
    scale = float(np.max(np.abs(shift))) if shift.size else 0.0
    if scale == 0.0:
        return shift
    return (PERTURBATION * bscale / scale) * shift


def _limits(m, N, max_iter, bland_after):
    return (50 * (m + N) if max_iter is None else int(max_iter),
            10 * (m + N) if bland_after is None else int(bland_after))


def solve_standard(
    c,
    A,
    b,
    basis=None,
    max_iter: Optional[int] = None,
    bland_after: Optional[int] = None,
    refactor_every: int = 64,
    perturb: bool = True,
) -> LpResult:
    """Solve a standard-form LP.

    ``basis`` may name a primal-feasible starting basis, which skips phase
    one.  Defaults: iteration cap ``50 (m + N)``, Bland fallback after
    ``10 (m + N)`` degenerate pivots.  With ``perturb`` the pivots are taken
    on a slightly shifted right-hand side and the final basis is evaluated
    on the true one; if it is not primal feasible there the problem is
    re-solved without the shift.
    """
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).reshape(-1)
    m, N = A.shape
    max_iter, bland_after = _limits(m, N, max_iter, bland_after)
    if m == 0:
        status = LpStatus.UNBOUNDED if np.any(c < -OPT_TOL) else LpStatus.OPTIMAL
        return _finish(status, c, A, b, np.zeros(N), np.zeros(0, np.int64), 0, 0)

    # The shift scales with b, so scaling b scales the returned vertex.
    bscale = float(np.max(np.abs(b)))
    b_run = b + _perturbation(lambda p: A @ p, N, bscale) if perturb else b
    limits = (max_iter, bland_after, refactor_every)
    status, st, phase1 = _two_phase(c, A, b_run, basis, limits)
    if perturb and status in (LpStatus.OPTIMAL, LpStatus.INFEASIBLE):
        if status is LpStatus.OPTIMAL and st.reset_rhs(b):
            return _finish(status, c, A, b, st.primal(N), _standard_basis(st, N), st.iterations, phase1)
        retry = solve_standard(c, A, b, basis, max_iter, bland_after, refactor_every, perturb=False)
        retry.iterations += st.iterations
        return retry
    return _finish(status, c, A, b, st.primal(N), _standard_basis(st, N), st.iterations, phase1)


def _two_phase(c, A, b, basis, limits):
    m, N = A.shape
    if basis is not None:
        try:
            basis = np.asarray(basis, dtype=np.int64)
            if basis.shape != (m,) or np.unique(basis).size != m or basis.min() < 0 or basis.max() >= N:
                raise SingularBasis("starting basis must name m distinct columns")
            st = _State(A, b, basis, False, *limits)
            if st.raw_primal().min() < -1e-9 * max(1.0, float(np.max(np.abs(b)))):
                raise SingularBasis("starting basis is not primal feasible")
            return st.run(c), st, 0
        except SingularBasis:
            pass
    try:
        cols, lu = crash_columns(A)
    except SingularBasis:
        pass
    else:
        return _crash_two_phase(c, A, b, cols, lu, limits)
    # Phase one minimizes sum |r| over A x + r = b with free artificials r,
    # held in the split layout of [A, I]; the twins of x never enter.
    n1 = N + m
    A1 = np.hstack([A, np.eye(m)])
    art = np.arange(N, n1)
    st = _State(A1, b, np.where(b >= 0, art, art + n1), True, *limits)
    flags = np.zeros(2 * n1, dtype=np.int8)
    flags[:N] = K.ELIGIBLE
    flags[N:n1] = flags[n1 + N:] = K.ELIGIBLE | K.FLIPPABLE
    c1 = np.zeros(2 * n1)
    c1[N:n1] = c1[n1 + N:] = 1.0
    status = st.run(c1, flags)
    phase1 = st.iterations
    if status is not LpStatus.OPTIMAL:
        return status, st, phase1
    infeas = float(np.sum(st.xB[st.basis % n1 >= N]))
    if infeas > 1e-9 * max(1.0, float(np.max(np.abs(b)))) * max(1, m):
        return LpStatus.INFEASIBLE, st, phase1
    _drive_out_artificials(st, N)
    flags[N:n1] = flags[n1 + N:] = 0
    c2 = np.zeros(2 * n1)
    c2[:N] = c
    return st.run(c2, flags), st, phase1


def _crash_two_phase(c, A, b, cols, lu, limits):
    """Two phases from a crash basis of structural columns.

    Each column gets a negated twin of cost 1 in phase one, so the phase
    minimizes the total negative part of ``x``; any column basis is feasible
    for it after choosing signs.  Twins left basic at zero are switched back
    before phase two, where they may not enter.
    """
    m, N = A.shape
    xb = _la.lu_solve(lu, b, check_finite=False)
    st = _State(A, b, np.where(xb >= 0.0, cols, cols + N), True, *limits)
    flags = np.full(2 * N, K.ELIGIBLE | K.FLIPPABLE, dtype=np.int8)
    c1 = np.concatenate([np.zeros(N), np.ones(N)])
    status = st.run(c1, flags)
    phase1 = st.iterations
    if status is not LpStatus.OPTIMAL:
        return status, st, phase1
    neg = st.basis >= N
    if float(np.sum(st.xB[neg])) > 1e-9 * max(1.0, float(np.max(np.abs(b)))) * max(1, m):
        return LpStatus.INFEASIBLE, st, phase1
    for r in np.flatnonzero(neg):
        st.in_basis[st.basis[r]] = False
        st.basis[r] -= N
        st.in_basis[st.basis[r]] = True
        st.Binv[r] *= -1.0
        st.xB[r] = 0.0
    flags[:N] = K.ELIGIBLE
    flags[N:] = 0
    return st.run(np.concatenate([c, np.zeros(N)]), flags), st, phase1


def _standard_basis(st, N):
    """Basis in original column numbering; ``N + i`` marks artificial row ``i``."""
    if not st.split:
        return st.basis
    n1 = st.A.shape[1]
    if n1 == N:
        return st.basis % N
    return np.where(st.basis >= n1, st.basis - n1, st.basis)


def _drive_out_artificials(st, N):
    for r in range(st.m):
        if st.basis[r] % st.A.shape[1] < N:
            continue
        row = st.Binv[r] @ st.A[:, :N]
        row[st.in_basis[:N]] = 0.0
        j = int(np.argmax(np.abs(row)))
        if abs(row[j]) <= 1e-7:
            continue  # redundant row; the artificial stays basic at zero
        d = st.Binv @ st.A[:, j]
        theta = st.xB[r] / d[r]
        st.xB -= theta * d
        st.xB[r] = theta
        np.maximum(st.xB, 0.0, out=st.xB)
        K.exchange(st.Binv, r, d)
        st.in_basis[st.basis[r]] = False
        st.basis[r] = j
        st.in_basis[j] = True


def solve_split(
    a,
    b,
    basis,
    max_iter: Optional[int] = None,
    bland_after: Optional[int] = None,
    refactor_every: int = 64,
    perturb: bool = True,
) -> LpResult:
    """``min 1'(u + v)  s.t.  a (u - v) = b, u, v >= 0`` from a given basis.

    Columns of ``[a, -a]`` are generated on demand.  Any basis of this
    problem becomes primal feasible after switching the sign of its
    negative columns, so no phase one is needed.  Falls back to the
    two-phase path on the stacked matrix if ``basis`` is singular.
    """
    a = np.ascontiguousarray(a, dtype=float)
    b = np.asarray(b, dtype=float).reshape(-1)
    m, n = a.shape
    N = 2 * n
    max_iter, bland_after = _limits(m, N, max_iter, bland_after)
    c = np.ones(N)
    stacked = np.hstack([a, -a])
    if m == 0:
        return _finish(LpStatus.OPTIMAL, c, stacked, b, np.zeros(N), np.zeros(0, np.int64), 0, 0)
    bscale = float(np.max(np.abs(b)))
    b_run = b + _perturbation(lambda p: a @ (p[:n] - p[n:]), N, bscale) if perturb else b
    try:
        if basis is None:
            raise SingularBasis("no starting basis")
        basis = np.asarray(basis, dtype=np.int64)
        if basis.shape != (m,) or np.unique(basis % n).size != m:
            raise SingularBasis("unusable starting basis")
        st = _State(a, b_run, _feasible_signs(a, b_run, basis, n), True, max_iter, bland_after, refactor_every)
    except (SingularBasis, np.linalg.LinAlgError, ValueError):
        return solve_standard(c, stacked, b, max_iter=max_iter, bland_after=bland_after,
                              refactor_every=refactor_every, perturb=perturb)
    status = st.run(c)
    if perturb and status is LpStatus.OPTIMAL and not st.reset_rhs(b):
        # The shift moved the optimal vertex: repair signs and continue unshifted.
        st.basis[:] = _feasible_signs(a, b, st.basis, n)
        st.in_basis[:] = False
        st.in_basis[st.basis] = True
        st.reset_rhs(b)
        st.counters[1] = 0
        status = st.run(c)
    return _finish(status, c, stacked, b, st.primal(N), st.basis, st.iterations, 0)


def _feasible_signs(a, b, basis, n):
    """Choose column signs so the basic solution is nonnegative."""
    cols = np.asarray(basis) % n
    xb = _la.solve(a[:, cols], b, check_finite=False)
    return np.where(xb >= 0.0, cols, cols + n).astype(np.int64)


def _finish(status, c, A, b, x, basis, iterations, phase1):
    m, N = A.shape
    duals = np.zeros(m)
    rc = c.copy()
    if status is LpStatus.OPTIMAL and m:
        # Certificate from a fresh factorization; a basic artificial marks a
        # redundant row and gets zero cost.
        B = np.zeros((m, m))
        cb = np.zeros(m)
        for i, j in enumerate(basis):
            if j < N:
                B[:, i] = A[:, j]
                cb[i] = c[j]
            else:
                B[j - N, i] = 1.0
        duals = _la.solve(B.T, cb, check_finite=False)
        rc = c - A.T @ duals
    objective = float(c @ x)
    resid = float(np.max(np.abs(A @ x - b))) if m else 0.0
    return LpResult(status, x, objective, np.asarray(basis).copy(), duals, rc, int(iterations), int(phase1), resid)


def solve_lp(problem: LpProblem, **kwargs) -> LpResult:
    """Solve an ``LpProblem``; free variables are split, finite bounds shifted."""
    lb = problem.lower_bounds
    free = np.isneginf(lb)
    shift = np.where(free, 0.0, lb)
    A = problem.eq_matrix
    b = problem.eq_rhs - A @ shift
    A_std = np.hstack([A, -A[:, free]])
    c_std = np.concatenate([problem.cost, -problem.cost[free]])
    res = solve_standard(c_std, A_std, b, **kwargs)
    n = problem.cost.shape[0]
    x = res.x[:n].copy()
    x[free] -= res.x[n:]
    x += shift
    res.x_std = res.x
    res.x = x
    res.objective = float(problem.cost @ x)
    res.primal_residual = float(np.max(np.abs(A @ x - problem.eq_rhs))) if A.shape[0] else 0.0
    return res
