import math

import numpy as np
import pytest

from l1ldp import ldp_core
from l1ldp.errors import DomainError
from l1ldp.ldp_core import Tail, ZetaPoint, finite_n_bound, i_sph, optimal_point, rate, solve_beta_0, w_values, zeta, zeta_gradient
from l1ldp.pt_core import Mode, q_value, solve_alpha_w
from l1ldp.verification import w_integrals

from reference_values import FIELDS, NONNEG, NONNEG_BETA, SIGNED, SIGNED_BETA

# rates from an independent mpmath minimization of the geometric exponents
RATE_ORACLE = {
    (0.35, SIGNED_BETA, Mode.SIGNED): -0.051742330628302457,
    (0.65, SIGNED_BETA, Mode.SIGNED): -0.041828204414380586,
    (0.55, SIGNED_BETA, Mode.SIGNED): -0.0048569848384954153,
    (0.45, NONNEG_BETA, Mode.NONNEGATIVE): -0.0083720529441822949,
    (0.60, NONNEG_BETA, Mode.NONNEGATIVE): -0.029896228952504278,
}


def random_shapes(mode, count, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        alpha = float(rng.uniform(0.1, 0.9))
        lo = max(2 * alpha - 1, 0.0) if mode is Mode.NONNEGATIVE else 0.0
        beta = float(rng.uniform(lo + 0.05 * (alpha - lo), alpha - 0.05 * (alpha - lo)))
        out.append((alpha, beta))
    return out


@pytest.mark.parametrize("mode,table,beta", [(Mode.SIGNED, SIGNED, SIGNED_BETA), (Mode.NONNEGATIVE, NONNEG, NONNEG_BETA)])
def test_reference_columns(mode, table, beta):
    for alpha, row in table.items():
        sol = optimal_point(alpha, beta, mode)
        for name, expected in zip(FIELDS, row):
            assert getattr(sol, name) == pytest.approx(expected, abs=5e-4), (alpha, name)


@pytest.mark.parametrize("key", list(RATE_ORACLE))
def test_rate_oracle(key):
    assert rate(*key) == pytest.approx(RATE_ORACLE[key], abs=1e-12)


def test_beta_0_examples():
    assert solve_beta_0(0.5, SIGNED_BETA) == pytest.approx(0.1929, abs=5e-4)
    assert solve_beta_0(0.35, SIGNED_BETA) == pytest.approx(-0.6420, abs=5e-4)
    assert solve_beta_0(0.55, NONNEG_BETA, Mode.NONNEGATIVE) == pytest.approx(0.3792, abs=5e-4)


def test_beta_0_characterization():
    from l1ldp.pt_core import xi
    for alpha, beta in [(0.35, 0.19284), (0.65, 0.19284), (0.7, 0.5)]:
        b0 = solve_beta_0(alpha, beta)
        assert (alpha - beta) / (alpha - b0) * xi(alpha, b0) == pytest.approx(1.0, abs=1e-10)


def test_shape_validation():
    with pytest.raises(DomainError):
        optimal_point(0.3, 0.4)


@pytest.mark.parametrize("mode", list(Mode))
def test_tail_structure(mode):
    for alpha, beta in random_shapes(mode, 25, 1):
        sol = optimal_point(alpha, beta, mode)
        assert sol.gamma == pytest.approx(math.sqrt(alpha) / (2 * sol.a0), rel=1e-12)
        assert sol.rate <= 0.0
        if abs(sol.c3) < 1e-6:
            continue
        if sol.tail is Tail.UPPER:
            assert sol.a0 < 1 and sol.c3 > 0
        else:
            assert sol.a0 > 1 and sol.c3 < 0


@pytest.mark.parametrize("mode,beta", [(Mode.SIGNED, 0.1), (Mode.SIGNED, 0.3), (Mode.NONNEGATIVE, 0.25)])
def test_rate_zero_at_breaking_point(mode, beta):
    a_w = solve_alpha_w(beta, mode).value
    sol = optimal_point(a_w, beta, mode)
    assert abs(sol.rate) < 1e-9
    assert rate(a_w + 0.02, beta, mode) < 0 and rate(a_w - 0.02, beta, mode) < 0


@pytest.mark.parametrize("mode", list(Mode))
def test_stationarity(mode):
    for alpha, beta in random_shapes(mode, 50, 7):
        sol = optimal_point(alpha, beta, mode)
        if sol.c3 == 0.0:
            continue
        p = ZetaPoint(sol.c3, sol.nu, sol.a0)
        assert max(abs(g) for g in zeta_gradient(alpha, beta, p, mode)) < 1e-7
        assert zeta(alpha, beta, p, mode) == pytest.approx(sol.rate, abs=1e-10)


def test_gradient_at_table_point():
    sol = optimal_point(0.65, SIGNED_BETA)
    g = zeta_gradient(0.65, SIGNED_BETA, ZetaPoint(sol.c3, sol.nu, sol.a0))
    assert max(map(abs, g)) < 1e-8


@pytest.mark.parametrize("mode", list(Mode))
def test_gradient_matches_finite_differences(mode):
    rng = np.random.default_rng(3)
    h = 1e-6
    for alpha, beta in random_shapes(mode, 20, 11):
        p = ZetaPoint(float(rng.uniform(-1, 1)), float(rng.uniform(0.1, 2.0)), float(rng.uniform(0.4, 2.0)))
        g = zeta_gradient(alpha, beta, p, mode)
        coords = [p.c3, p.nu, p.a0]
        for i in range(3):
            up, dn = list(coords), list(coords)
            up[i] += h
            dn[i] -= h
            fd = (zeta(alpha, beta, ZetaPoint(*up), mode) - zeta(alpha, beta, ZetaPoint(*dn), mode)) / (2 * h)
            assert g[i] == pytest.approx(fd, rel=1e-5, abs=1e-7)


def test_local_minimum_stencil():
    sol = optimal_point(0.65, SIGNED_BETA)
    base = [sol.c3, sol.nu, sol.a0]
    for i in range(3):
        for step in (0.05, -0.05, 0.01, -0.01):
            p = list(base)
            p[i] += step
            assert zeta(0.65, SIGNED_BETA, ZetaPoint(*p)) > sol.rate


def test_zeta_degenerate_point():
    sol = optimal_point(0.5, SIGNED_BETA)
    a_w = solve_alpha_w(SIGNED_BETA).value
    value = zeta(a_w, SIGNED_BETA, ZetaPoint(0.0, sol.nu, 1.0))
    assert value == pytest.approx(0.0, abs=1e-9)


def test_zeta_point_validation():
    with pytest.raises(DomainError):
        ZetaPoint(0.1, 0.5, 1.0)
    with pytest.raises(DomainError):
        ZetaPoint(0.0, -0.1, 0.5)


def test_zeta_large_exponent():
    # the w exponentials are carried in log form, so a huge exponent stays finite
    assert math.isfinite(zeta(0.5, 0.2, ZetaPoint(0.5, 60.0, 0.01)))
    with pytest.raises(DomainError):
        zeta(0.5, 0.2, ZetaPoint(0.5, 1e200, 0.5))


def test_i_sph():
    assert i_sph(0.0, 0.5) == 0.0
    c3, alpha = 0.9203, 0.65
    gh = (c3 - math.sqrt(c3 * c3 + 2.6)) / 4
    assert i_sph(c3, alpha) == pytest.approx(gh * c3 - alpha / 2 * math.log(1 - c3 / (2 * gh)), rel=1e-13)
    with pytest.raises(DomainError):
        i_sph(-0.1, 0.5)


@pytest.mark.parametrize("alpha", [0.55, 0.65, 0.35, 0.45])
def test_i_sph_at_optimum(alpha):
    sol = optimal_point(alpha, SIGNED_BETA)
    tail = sol.tail
    value = i_sph(abs(sol.c3), alpha, tail)
    assert value == pytest.approx(-(1 - sol.a0 ** 2) * alpha / 2 + alpha * math.log(sol.a0), abs=1e-12)
    assert ldp_core._gamma_hat(sol.c3, alpha) == pytest.approx(-sol.a0 * math.sqrt(alpha) / 2, abs=1e-12)


@pytest.mark.parametrize("mode", list(Mode))
def test_w_at_optimum(mode):
    for alpha, beta in random_shapes(mode, 10, 4):
        sol = optimal_point(alpha, beta, mode)
        w1, w2 = w_values(sol.nu, sol.a0, mode)
        assert w1 == pytest.approx((1 - beta) / (1 - sol.beta_w), abs=1e-9)
        expected = (alpha - beta) * (1 - sol.beta_0) / ((alpha - sol.beta_0) * (1 - sol.beta_w))
        assert w2 == pytest.approx(expected, abs=1e-9)


def test_w_closed_forms_vs_quadrature():
    rng = np.random.default_rng(9)
    for _ in range(20):
        nu, a0 = float(rng.uniform(0.05, 3.0)), float(rng.uniform(0.3, 0.99))
        for mode in Mode:
            for c, e in zip(w_values(nu, a0, mode), w_integrals(nu, a0, mode)):
                assert c == pytest.approx(e, rel=1e-9)
        signed, nonneg = w_values(nu, a0, Mode.SIGNED), w_values(nu, a0, Mode.NONNEGATIVE)
        assert nonneg[0] == pytest.approx(0.5 * (signed[0] + 1), rel=1e-15)


def test_finite_n_bound():
    assert abs(finite_n_bound(300, 57, 150)) < 5e-3
    assert finite_n_bound(137, 26, 89) <= -0.04
    assert finite_n_bound(50, 50, 50) == 0.0
    with pytest.raises(DomainError):
        finite_n_bound(10, 5, 20)


def test_finite_n_bound_monotone_in_m():
    values = [finite_n_bound(200, 30, m) for m in range(100, 181, 10)]
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def test_finite_n_bound_dominates_rate():
    for n, k, m in [(137, 26, 89), (300, 57, 165), (150, 42, 90)]:
        mode = Mode.NONNEGATIVE if k == 42 else Mode.SIGNED
        assert finite_n_bound(n, k, m, mode) >= rate(m / n, k / n, mode) - 1e-12
