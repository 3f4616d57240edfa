import numpy as np
import pytest
from scipy.optimize import linprog

from l1ldp.l1_solver import LpProblem, LpStatus, solve_lp, solve_standard
from l1ldp.l1_solver.simplex import crash_columns, independent_columns


def assert_certificate(res, tol=1e-9):
    assert res.status is LpStatus.OPTIMAL
    assert res.dual_infeasibility < tol
    assert res.complementarity < tol
    assert res.primal_residual < 1e-9 * max(1.0, float(np.abs(res.x).max(initial=0)))


def test_small_lp():
    # min -x1 - x2, x1 + 2 x2 + s1 = 4, 3 x1 + x2 + s2 = 6
    A = np.array([[1.0, 2, 1, 0], [3, 1, 0, 1]])
    res = solve_standard([-1, -1, 0, 0], A, [4, 6])
    assert_certificate(res)
    assert res.x[:2] == pytest.approx([1.6, 1.2])
    assert res.objective == pytest.approx(-2.8)


def test_infeasible():
    res = solve_standard([1, 1], [[1.0, 1.0]], [-1.0])
    assert res.status is LpStatus.INFEASIBLE


def test_unbounded():
    res = solve_standard([-1, 0], [[1.0, -1.0]], [1.0])
    assert res.status is LpStatus.UNBOUNDED


def test_empty_constraints():
    assert solve_standard([1.0, 2.0], np.zeros((0, 2)), []).status is LpStatus.OPTIMAL
    assert solve_standard([-1.0, 2.0], np.zeros((0, 2)), []).status is LpStatus.UNBOUNDED


def test_redundant_rows():
    A = np.array([[1.0, 1, 1], [2, 2, 2], [1, 0, -1]])
    res = solve_standard([1, 2, 3], A, [3, 6, 0])
    assert_certificate(res)
    assert res.objective == pytest.approx(6.0)


def test_given_basis_skips_phase_one():
    A = np.array([[1.0, 2, 1, 0], [3, 1, 0, 1]])
    res = solve_standard([-1, -1, 0, 0], A, [4, 6], basis=[2, 3])
    assert res.phase1_iterations == 0
    assert res.objective == pytest.approx(-2.8)


def test_iteration_limit():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((20, 60))
    b = A @ np.abs(rng.standard_normal(60))
    res = solve_standard(rng.uniform(0, 1, 60), A, b, max_iter=3)
    assert res.status is LpStatus.ITERATION_LIMIT


def test_degenerate_cycling_example():
    # Beale's classic cycling instance in standard form
    c = [-0.75, 150, -0.02, 6, 0, 0, 0]
    A = [[0.25, -60, -0.04, 9, 1, 0, 0], [0.5, -90, -0.02, 3, 0, 1, 0], [0, 0, 1, 0, 0, 0, 1]]
    for perturb in (True, False):
        res = solve_standard(c, A, [0, 0, 1], basis=[4, 5, 6], perturb=perturb, bland_after=0)
        assert_certificate(res)
        assert res.objective == pytest.approx(-0.05)


def test_against_highs():
    rng = np.random.default_rng(42)
    for _ in range(60):
        m = int(rng.integers(1, 8))
        n = int(rng.integers(m, 16))
        A = rng.integers(-4, 5, (m, n)).astype(float)
        b = A @ rng.integers(0, 3, n).astype(float)
        c = rng.integers(-2, 6, n).astype(float)
        ref = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
        res = solve_standard(c, A, b)
        if ref.status == 0:
            assert_certificate(res)
            assert res.objective == pytest.approx(ref.fun, abs=1e-7)
        elif ref.status == 3:
            assert res.status is LpStatus.UNBOUNDED
        elif ref.status == 2:
            assert res.status is LpStatus.INFEASIBLE


def test_solve_lp_bounds():
    # min x0 + x1, x0 - x1 = 1, x0 free, x1 >= 2
    prob = LpProblem([1.0, 1.0], [[1.0, -1.0]], [1.0], [-np.inf, 2.0])
    res = solve_lp(prob)
    assert res.status is LpStatus.OPTIMAL
    assert res.x == pytest.approx([3.0, 2.0])
    assert res.objective == pytest.approx(5.0)


def test_problem_validation():
    with pytest.raises(ValueError):
        LpProblem([1.0, 1.0], [[1.0, 1.0, 1.0]], [1.0])
    with pytest.raises(ValueError):
        LpProblem([1.0], [[1.0]], [1.0], [np.inf])


def test_independent_columns():
    a = np.array([[1.0, 2, 0, 1], [0, 0, 1, 1]])
    cols, rank = independent_columns(a)
    assert rank == 2
    assert np.linalg.matrix_rank(a[:, cols[:rank]]) == 2
    cols, _ = crash_columns(a)
    assert np.linalg.matrix_rank(a[:, cols]) == 2
