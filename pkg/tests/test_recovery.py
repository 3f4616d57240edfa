import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import linalg

from l1ldp.errors import DomainError
from l1ldp.l1_solver import (LinearSystem, LpStatus, is_recovered, null_space_margin,
                             null_space_success_check, solve_l1, solve_l1_nonneg)
from l1ldp.pt_core import Mode


def planted(rng, m, n, k, nonneg=False):
    a = rng.standard_normal((m, n))
    x0 = np.zeros(n)
    idx = rng.choice(n, k, replace=False)
    mags = np.abs(rng.standard_normal(k)) + 0.5
    x0[idx] = mags if nonneg else mags * rng.choice([-1.0, 1.0], k)
    return a, x0, idx


def test_identity():
    y = np.array([1.5, -2.0, 0.0, 3.0])
    res = solve_l1(LinearSystem(np.eye(4), y))
    assert res.optimal
    assert res.x_hat == pytest.approx(y)


def test_two_vertex_tie():
    res = solve_l1(LinearSystem([[1.0, 1.0]], [1.0]))
    assert res.objective == pytest.approx(1.0)
    assert any(np.allclose(res.x_hat, v) for v in ([1, 0], [0, 1]))


def test_one_sparse_recovered():
    rng = np.random.default_rng(0)
    hits = 0
    for _ in range(50):
        a = rng.standard_normal((3, 6))
        x0 = np.zeros(6)
        x0[rng.integers(6)] = rng.choice([-1.0, 1.0])
        res = solve_l1(LinearSystem(a, a @ x0))
        ok = is_recovered(res.x_hat, x0)
        assert ok == null_space_success_check(a, np.flatnonzero(x0), np.sign(x0[x0 != 0]))
        hits += ok
    # at this tiny size the typical success rate is well below one
    assert hits > 25


def test_nonneg_identity():
    res = solve_l1_nonneg(LinearSystem(np.eye(3), [1.0, 0.0, 2.0]))
    assert res.optimal and res.x_hat == pytest.approx([1.0, 0.0, 2.0])
    assert solve_l1_nonneg(LinearSystem(np.eye(3), [1.0, -1.0, 2.0])).status is LpStatus.INFEASIBLE


def test_nonneg_one_sparse():
    rng = np.random.default_rng(1)
    for _ in range(30):
        a, x0, idx = planted(rng, 2, 4, 1, nonneg=True)
        res = solve_l1_nonneg(LinearSystem(a, a @ x0))
        assert is_recovered(res.x_hat, x0) == null_space_success_check(a, idx, mode=Mode.NONNEGATIVE)
        # randomized pre-screen gives the same decision
        assert null_space_success_check(a, idx, mode=Mode.NONNEGATIVE, trials=50) == is_recovered(res.x_hat, x0)


def test_system_validation():
    with pytest.raises(DomainError):
        LinearSystem(np.ones((3, 2)), np.ones(3))
    with pytest.raises(DomainError):
        LinearSystem(np.ones((2, 3)), np.ones(3))
    with pytest.raises(DomainError):
        LinearSystem([[1.0, 2.0], [2.0, 4.0]], [1.0, 2.0])
    with pytest.raises(DomainError):
        LinearSystem([[np.nan, 1.0]], [1.0])


def test_rank_check_can_be_skipped():
    res = solve_l1(LinearSystem([[1.0, 2.0, 0.0], [2.0, 4.0, 0.0]], [1.0, 2.0], check_rank=False))
    assert res.optimal and res.objective == pytest.approx(0.5)
    res = solve_l1(LinearSystem([[1.0, 2.0, 0.0], [2.0, 4.0, 0.0]], [1.0, 3.0], check_rank=False))
    assert res.status is LpStatus.INFEASIBLE


@pytest.mark.parametrize("nonneg", [False, True])
def test_certificates_and_feasibility(nonneg):
    rng = np.random.default_rng(2)
    solver = solve_l1_nonneg if nonneg else solve_l1
    for _ in range(20):
        a, x0, _ = planted(rng, 30, 80, 12, nonneg)
        res = solver(LinearSystem(a, a @ x0))
        assert res.optimal
        assert res.lp.dual_infeasibility < 1e-9 and res.lp.complementarity < 1e-9
        assert np.max(np.abs(a @ res.x_hat - a @ x0)) <= 1e-9 * max(1, np.abs(a @ x0).max())
        assert res.objective == pytest.approx(np.abs(res.x_hat).sum(), abs=1e-9 * 80)


@pytest.mark.parametrize("nonneg", [False, True])
def test_l1_optimal_under_null_perturbations(nonneg):
    rng = np.random.default_rng(3)
    a, x0, _ = planted(rng, 20, 50, 12, nonneg)
    res = (solve_l1_nonneg if nonneg else solve_l1)(LinearSystem(a, a @ x0))
    null = linalg.null_space(a)
    base = np.abs(res.x_hat).sum()
    for _ in range(100):
        z = null @ rng.standard_normal(null.shape[1]) * rng.uniform(1e-3, 1.0)
        x = res.x_hat + z
        if nonneg:
            if x.min() < 0:
                continue
        assert np.abs(x).sum() >= base - 1e-8


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3))
def test_scale_equivariance(seed, scale):
    rng = np.random.default_rng(seed)
    a, x0, _ = planted(rng, 15, 40, 10)
    y = a @ x0
    r1 = solve_l1(LinearSystem(a, y))
    r2 = solve_l1(LinearSystem(a, scale * y))
    assert np.allclose(r2.x_hat, scale * r1.x_hat, rtol=1e-9, atol=1e-9 * scale)


@pytest.mark.parametrize("mode", list(Mode))
def test_agrees_with_null_space_condition(mode):
    rng = np.random.default_rng(4)
    nonneg = mode is Mode.NONNEGATIVE
    disagreements = 0
    for _ in range(200):
        k = int(rng.integers(4, 14))
        a, x0, idx = planted(rng, 20, 40, k, nonneg)
        solver = solve_l1_nonneg if nonneg else solve_l1
        got = is_recovered(solver(LinearSystem(a, a @ x0)).x_hat, x0)
        want = null_space_success_check(a, idx, np.sign(x0[idx]), mode)
        disagreements += got != want
    assert disagreements == 0


def test_null_space_trivial_cases():
    a = np.random.default_rng(5).standard_normal((4, 4))
    assert null_space_success_check(a, [0, 1])
    b = np.random.default_rng(5).standard_normal((3, 6))
    assert null_space_success_check(b, [])


def test_null_space_validation():
    a = np.ones((2, 5))
    with pytest.raises(DomainError):
        null_space_success_check(a, [0, 0])
    with pytest.raises(DomainError):
        null_space_success_check(a, [0, 1, 2])
    with pytest.raises(DomainError):
        null_space_success_check(a, [7])


def test_null_space_margin_sign():
    rng = np.random.default_rng(6)
    a = rng.standard_normal((10, 20))
    assert null_space_margin(a, [0]) > 1.0
    a2 = rng.standard_normal((3, 30))
    assert null_space_margin(a2, range(3)) < 1.0


def test_is_recovered():
    x0 = np.array([0.0, 2.0, -1.0])
    assert is_recovered(x0 + 1e-7, x0)
    assert not is_recovered(x0 + 1e-4, x0)
