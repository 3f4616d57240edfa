"""Self-checks of the theory modules, shared by ``verify`` and the tests.

Each check returns a ``CheckResult`` with the worst observed error, so the
same battery serves as a command-line report and as test assertions.
``perturb`` adds a constant to every computed quantity before comparison;
it exists so that failure reporting can itself be tested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import hdg_core, ldp_core, special_functions as sf
from .ldp_core import Tail, ZetaPoint
from .pt_core import Mode

GRID_BETAS = {Mode.SIGNED: (0.1, 0.19284, 0.3), Mode.NONNEGATIVE: (0.15, 0.27911, 0.4)}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float
    count: int

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: worst {self.worst:.3e} (tol {self.tol:.0e}, {self.count} points)"


def _result(name, errors, tol):
    errors = [abs(e) if math.isfinite(e) else math.inf for e in errors]
    worst = max(errors, default=0.0)
    return CheckResult(name, bool(errors) and worst < tol, worst, tol, len(errors))


def theory_grid(mode, points: int = 30):
    """``points`` pairs (alpha, beta) spread over both tails."""
    mode = Mode.parse(mode)
    betas = GRID_BETAS[mode]
    per = [points // len(betas) + (1 if i < points % len(betas) else 0) for i in range(len(betas))]
    grid = []
    for beta, count in zip(betas, per):
        hi = 0.95 if mode is Mode.SIGNED else 0.5 * (1.0 + beta) - 0.02
        grid.extend((float(a), beta) for a in np.linspace(beta + 0.05, hi, count))
    return grid


def check_theory_equivalence(points=30, perturb=0.0, modes=tuple(Mode)):
    errs = []
    for mode in modes:
        for a, b in theory_grid(mode, points):
            errs.append(hdg_core.psi_net(a, b, mode).psi_net + perturb - ldp_core.rate(a, b, mode))
    return _result("net exponent equals the LDP rate", errs, 1e-9)


def check_donoho(points=30, perturb=0.0, modes=tuple(Mode)):
    errs = []
    for mode in modes:
        for a, b in theory_grid(mode, points):
            d_val, _ = hdg_core.psi_int_donoho(a, b, mode)
            errs.append(d_val + hdg_core.psi_int(a, b, mode)[0] + perturb)
    return _result("internal exponent matches s-parameterization", errs, 1e-9)


def check_tails(points=30, modes=tuple(Mode)):
    """The grid must contain points from both tails for the checks above to mean anything."""
    tails = {(mode, ldp_core.optimal_point(a, b, mode).tail) for mode in modes for a, b in theory_grid(mode, points)}
    missing = sum((mode, t) not in tails for mode in modes for t in Tail)
    return CheckResult("grid covers both tails", missing == 0, float(missing), 1.0, len(tails))


def check_stationarity(points=30, perturb=0.0, modes=tuple(Mode)):
    errs = []
    for mode in modes:
        for a, b in theory_grid(mode, points):
            sol = ldp_core.optimal_point(a, b, mode)
            if sol.c3 == 0.0:
                continue
            g = ldp_core.zeta_gradient(a, b, ZetaPoint(sol.c3, sol.nu, sol.a0), mode)
            errs.append(max(abs(v) for v in g) + perturb)
            errs.append(ldp_core.zeta(a, b, ZetaPoint(sol.c3, sol.nu, sol.a0), mode) - sol.rate + perturb)
    return _result("optimal tuple is stationary and attains the rate", errs, 1e-9)


def w_integrals(nu, a0, mode=Mode.SIGNED):
    """``(w_1 or w_{1,+}, w_2)`` from their Gaussian-integral definitions."""
    k = 0.5 * (1.0 - a0 * a0)

    def tail(h):
        return math.exp(-0.5 * h * h + k * (h - nu) ** 2)

    def phi(h):
        return math.exp(-0.5 * h * h)

    opts = dict(epsabs=0.0, epsrel=1e-13, limit=200)
    core = integrate.quad(phi, 0.0, nu, **opts)[0]
    outer = integrate.quad(tail, nu, math.inf, **opts)[0]
    norm = 1.0 / math.sqrt(2.0 * math.pi)
    if Mode.parse(mode) is Mode.NONNEGATIVE:
        w1 = norm * (integrate.quad(phi, -math.inf, 0.0, **opts)[0] + core + outer)
    else:
        w1 = 2.0 * norm * (core + outer)
    # w_2: completing the square puts the mode at h* = (1 - a0^2) nu / a0^2.
    centre = (1.0 - a0 * a0) * nu / (a0 * a0)

    def shifted(h):
        return math.exp(-0.5 * h * h + k * (h + nu) ** 2)

    w2 = norm * (integrate.quad(shifted, -math.inf, centre, **opts)[0] + integrate.quad(shifted, centre, math.inf, **opts)[0])
    return w1, w2


def check_w_closed_forms(draws=20, seed=2024, perturb=0.0):
    rng = np.random.default_rng(seed)
    errs = []
    for _ in range(draws):
        nu = float(rng.uniform(0.05, 3.0))
        a0 = float(rng.uniform(0.3, 0.99))
        for mode in Mode:
            exact = w_integrals(nu, a0, mode)
            closed = ldp_core.w_values(nu, a0, mode)
            errs.extend((c + perturb - e) / max(1.0, abs(e)) for c, e in zip(closed, exact))
    return _result("w closed forms match quadrature", errs, 1e-9)


def sandwich_grid(points=200):
    return np.geomspace(1e-3, 8.0, points)


def check_sandwiches(points=200, perturb=0.0):
    """Both tail-bound sandwiches; the reported value is the smallest slack."""
    bad = 0
    slack = math.inf
    for x in sandwich_grid(points):
        x = float(x)
        q = sf.gaussian_q(x) + perturb
        pdf = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
        lo, hi = x / (1.0 + x * x) * pdf, pdf / x
        e = sf.erfc(x) + perturb
        scale = 2.0 / math.sqrt(math.pi) * math.exp(-x * x)
        lo2, hi2 = scale / (x + math.sqrt(x * x + 2.0)), scale / (x + math.sqrt(x * x + 4.0 / math.pi))
        ok = lo < q < hi and lo2 < e <= hi2
        bad += not ok
        slack = min(slack, (q - lo) / q, (hi - q) / q, (e - lo2) / e, (hi2 - e) / e)
    return CheckResult("Gaussian tail sandwiches", bad == 0, slack, 0.0, int(points))


def check_round_trips(points=400, perturb=0.0):
    errs = []
    for p in np.linspace(-0.999999, 0.999999, points):
        errs.append(sf.erf(sf.erfinv(float(p))) + perturb - p)
    # erf flattens out, so the inverse direction is only posed well near 0;
    # further out the complementary pair carries the information.
    for x in np.linspace(-2.5, 2.5, points):
        errs.append(sf.erfinv(sf.erf(float(x))) + perturb - x)
    for x in np.linspace(0.0, 25.0, points):
        errs.append((sf.erfcinv(sf.erfc(float(x))) + perturb - x) / max(1.0, x))
    for p in np.geomspace(1e-300, 1.999999, points):
        errs.append((sf.erfc(sf.erfcinv(float(p))) + perturb - p) / p)
    return _result("erf / erfc / erfinv round trips", errs, 1e-12)


def run_all(grid=30, perturb=0.0):
    return [
        check_round_trips(perturb=perturb),
        check_sandwiches(perturb=perturb),
        check_w_closed_forms(perturb=perturb),
        check_tails(grid),
        check_stationarity(grid, perturb),
        check_theory_equivalence(grid, perturb),
        check_donoho(grid, perturb),
    ]
