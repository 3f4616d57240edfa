"""Monte-Carlo estimates of recovery failure and success probabilities.

Each trial draws a Gaussian matrix ``A`` and a ``k``-sparse ``x0`` supported
on the last ``k`` coordinates with positive entries, then asks whether
l1 minimization recovers ``x0`` from ``y = A x0``.  Trial ``t`` of a run
with seed ``s`` draws from its own Philox stream keyed by ``(s, t)``, so
counts do not depend on how trials are scheduled across workers.
"""

from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from ._validation import check_count, check_dims
from .errors import DomainError
from .l1_solver import LinearSystem, LpStatus, is_recovered, null_space_success_check, solve_l1, solve_l1_nonneg
from .pt_core import Mode

log = logging.getLogger(__name__)

TABLE2_BETA = 0.19284
TABLE4_BETA = 0.27911

# alpha -> (n, k, m)
TABLE2_SCHEDULE = {
    0.35: (100, 19, 35),
    0.40: (200, 38, 80),
    0.45: (200, 38, 90),
    0.50: (300, 57, 150),
    0.55: (300, 57, 165),
    0.60: (200, 38, 120),
    0.65: (137, 26, 89),
}
TABLE4_SCHEDULE = {
    0.40: (125, 35, 50),
    0.45: (200, 56, 90),
    0.50: (300, 84, 150),
    0.55: (300, 84, 165),
    0.60: (150, 42, 90),
}

CI_LEVEL = 0.95
_Z95 = 1.959963984540054
# -log(0.025): one-sided 97.5% Clopper-Pearson bound for a zero count is 3.689/trials.
_ZERO_COUNT = 3.6888794541139363
MAGNITUDE_FLOOR = 0.5

CORRECT, ERROR, INDETERMINATE = 0, 1, 2


class SuccessTest(enum.Enum):
    SOLVE_LP = "SolveLp"
    NULL_SPACE = "NullSpaceCondition"

    @classmethod
    def parse(cls, value) -> "SuccessTest":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "")
        for member in cls:
            if key in (member.value.lower(), member.name.lower().replace("_", "")):
                return member
        if key in ("lp", "solve"):
            return cls.SOLVE_LP
        if key in ("nullspace", "ns", "condition"):
            return cls.NULL_SPACE
        raise DomainError(f"unknown success test {value!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    k: int
    m: int
    trials: int = 10_000
    seed: int = 0
    mode: Mode = Mode.SIGNED
    success_test: SuccessTest = SuccessTest.SOLVE_LP

    def __post_init__(self):
        check_dims(self.n, self.k, self.m)
        check_count(self.trials, "trials", 1)
        check_count(self.seed, "seed")
        if self.seed >= 2**64:
            raise DomainError("seed must fit in 64 bits")
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        object.__setattr__(self, "success_test", SuccessTest.parse(self.success_test))

    @property
    def alpha(self):
        return self.m / self.n

    @property
    def beta(self):
        return self.k / self.n

    def to_dict(self):
        return {"n": self.n, "k": self.k, "m": self.m, "trials": self.trials, "seed": self.seed,
                "mode": self.mode.value, "success_test": self.success_test.value}

    @classmethod
    def from_dict(cls, d):
        keys = ("n", "k", "m", "trials", "seed", "mode", "success_test")
        return cls(**{key: d[key] for key in keys if key in d})


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(trial)])))


def sample_instance(config: ExperimentConfig, trial: int):
    """``(A, x0)`` for one trial: Gaussian ``A``, support on the last ``k`` entries."""
    rng = trial_generator(config.seed, trial)
    a = rng.standard_normal((config.m, config.n))
    x0 = np.zeros(config.n)
    x0[config.n - config.k:] = np.abs(rng.standard_normal(config.k)) + MAGNITUDE_FLOOR
    return a, x0


@dataclass
class TrialRecord:
    outcome: int
    dual_infeasibility: float = 0.0
    complementarity: float = 0.0


def run_trial(config: ExperimentConfig, trial: int) -> TrialRecord:
    a, x0 = sample_instance(config, trial)
    if config.success_test is SuccessTest.NULL_SPACE:
        support = np.arange(config.n - config.k, config.n)
        try:
            ok = null_space_success_check(a, support, np.ones(config.k), config.mode)
        except RuntimeError:
            return TrialRecord(INDETERMINATE)
        return TrialRecord(CORRECT if ok else ERROR)
    solver = solve_l1_nonneg if config.mode is Mode.NONNEGATIVE else solve_l1
    res = solver(LinearSystem(a, a @ x0, check_rank=False))
    if res.status is not LpStatus.OPTIMAL:
        return TrialRecord(INDETERMINATE)
    outcome = CORRECT if is_recovered(res.x_hat, x0) else ERROR
    return TrialRecord(outcome, res.lp.dual_infeasibility, res.lp.complementarity)


def _run_range(config, start, stop):
    recs = [run_trial(config, t) for t in range(start, stop)]
    return (np.array([r.outcome for r in recs], dtype=np.int8),
            max((r.dual_infeasibility for r in recs), default=0.0),
            max((r.complementarity for r in recs), default=0.0))


@dataclass
class TrialBatch:
    config: ExperimentConfig
    errors: int
    corrects: int
    indeterminate: int = 0
    max_dual_infeasibility: float = 0.0
    max_complementarity: float = 0.0
    outcomes: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.errors + self.corrects + self.indeterminate != self.config.trials:
            raise DomainError("counts do not add up to the number of trials")

    @property
    def decided(self):
        return self.errors + self.corrects

    @property
    def p_err(self):
        return self.errors / self.decided if self.decided else math.nan

    @property
    def p_cor(self):
        return self.corrects / self.decided if self.decided else math.nan

    @property
    def i_err_hat(self):
        return math.log(self.p_err) / self.config.n if self.errors else None

    @property
    def i_cor_hat(self):
        return math.log(self.p_cor) / self.config.n if self.corrects else None

    def to_dict(self):
        est = rate_estimate(self)
        return {
            **self.config.to_dict(),
            "errors": self.errors,
            "corrects": self.corrects,
            "indeterminate": self.indeterminate,
            "i_err_hat": self.i_err_hat,
            "i_cor_hat": self.i_cor_hat,
            "ci": {
                "level": CI_LEVEL,
                "half_width": est.ci_half_width,
                "i_err_half_width": est.err_half_width,
                "i_cor_half_width": est.cor_half_width,
                "i_err_upper_bound": est.err_bound,
                "i_cor_upper_bound": est.cor_bound,
                "p_err": self.p_err if self.decided else None,
                "p_cor": self.p_cor if self.decided else None,
                "p_half_width": _Z95 * math.sqrt(self.p_err * self.p_cor / self.decided) if self.decided else None,
            },
        }


def run_experiment(config: ExperimentConfig, workers: int = 1, keep_outcomes: bool = False) -> TrialBatch:
    """Run all trials of ``config``; results are identical for any ``workers``."""
    workers = check_count(workers, "workers", 1)
    if workers == 1 or config.trials < 2 * workers:
        parts = [_run_range(config, 0, config.trials)]
    else:
        edges = np.linspace(0, config.trials, 4 * workers + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_run_range, config, int(lo), int(hi)) for lo, hi in zip(edges[:-1], edges[1:])]
            parts = [f.result() for f in futs]
    outcomes = np.concatenate([p[0] for p in parts])
    counts = np.bincount(outcomes, minlength=3)
    if counts[INDETERMINATE]:
        log.warning("%d of %d trials indeterminate (solver limit); excluded", counts[INDETERMINATE], config.trials)
    return TrialBatch(
        config,
        errors=int(counts[ERROR]),
        corrects=int(counts[CORRECT]),
        indeterminate=int(counts[INDETERMINATE]),
        max_dual_infeasibility=max(p[1] for p in parts),
        max_complementarity=max(p[2] for p in parts),
        outcomes=outcomes if keep_outcomes else None,
    )


class RateEstimate(NamedTuple):
    i_err: Optional[float]
    i_cor: Optional[float]
    ci_half_width: Optional[float]
    err_half_width: Optional[float] = None
    cor_half_width: Optional[float] = None
    err_bound: Optional[float] = None
    cor_bound: Optional[float] = None


def _log_rate_half_width(count, total, n):
    # delta method: sd(log p) = sqrt((1 - p) / (total p))
    if count == 0:
        return None
    p = count / total
    return _Z95 * math.sqrt((1.0 - p) / (total * p)) / n


def rate_estimate(batch: TrialBatch) -> RateEstimate:
    """Point estimates ``log(p)/n`` with 95% delta-method half-widths.

    A zero count leaves its estimate undefined and reports the one-sided
    bound ``log(3.689 / trials) / n`` instead.  ``ci_half_width`` is the
    larger of the defined half-widths.
    """
    n, total = batch.config.n, batch.decided
    if total == 0:
        return RateEstimate(None, None, None)
    hw_err = _log_rate_half_width(batch.errors, total, n)
    hw_cor = _log_rate_half_width(batch.corrects, total, n)
    bound = math.log(min(1.0, _ZERO_COUNT / total)) / n
    widths = [w for w in (hw_err, hw_cor) if w is not None]
    return RateEstimate(
        batch.i_err_hat,
        batch.i_cor_hat,
        max(widths) if widths else None,
        hw_err,
        hw_cor,
        bound if batch.errors == 0 else None,
        bound if batch.corrects == 0 else None,
    )


def check_schedule_point(alpha, beta, dims):
    n, k, m = check_dims(*dims)
    if abs(m - alpha * n) > 1.0 or abs(k - beta * n) > 1.0:
        raise DomainError(f"(n={n}, k={k}, m={m}) does not match alpha={alpha}, beta={beta}")
    return n, k, m


def sweep(beta, alphas, n_schedule, trials=10_000, seed=0, mode=Mode.SIGNED,
          success_test=SuccessTest.SOLVE_LP, workers=1) -> list[TrialBatch]:
    """One batch per alpha, each with dimensions taken from ``n_schedule``."""
    out = []
    for alpha in alphas:
        if alpha not in n_schedule:
            raise DomainError(f"no dimensions scheduled for alpha={alpha}")
        n, k, m = check_schedule_point(alpha, beta, n_schedule[alpha])
        cfg = ExperimentConfig(n, k, m, trials, seed, mode, success_test)
        out.append(run_experiment(cfg, workers))
    return out


def schedule_configs(which, trials=10_000, seed=0):
    """Configs of a tabled experiment schedule: ``"T2"`` (signed) or ``"T4"`` (nonnegative)."""
    key = str(which).upper().removesuffix("SCHEDULE")
    if key == "T2":
        sched, mode = TABLE2_SCHEDULE, Mode.SIGNED
    elif key == "T4":
        sched, mode = TABLE4_SCHEDULE, Mode.NONNEGATIVE
    else:
        raise DomainError(f"unknown schedule {which!r}")
    return {a: ExperimentConfig(*dims, trials=trials, seed=seed, mode=mode) for a, dims in sched.items()}
