"""Weak phase-transition characterization for signed and nonnegative l1.

For a shape (alpha, beta) the characteristic function is

    xi_alpha(beta) = (1 - beta) * p * exp(-q**2) / (alpha * sqrt(2) * q)

with ``q = erfinv((1 - alpha) / (1 - beta))`` and ``p = sqrt(2/pi)`` in the
signed case, and ``q = erfinv(2 (1 - alpha) / (1 - beta) - 1)``,
``p = sqrt(1/(2 pi))`` in the nonnegative case.  The transition curve is the
level set ``xi = 1``.  Viewed as a function of alpha at fixed beta the same
expression is called ``psi_beta(alpha)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable

from . import special_functions as sf
from .errors import DomainError, L1LdpError
from .root_finding import DEFAULT_TOL, Bracket, find_root

_EDGE = 1e-15


class Mode(enum.Enum):
    SIGNED = "signed"
    NONNEGATIVE = "nonneg"

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, Mode):
            return value
        key = str(value).strip().lower()
        aliases = {
            "signed": cls.SIGNED, "l1": cls.SIGNED,
            "nonneg": cls.NONNEGATIVE, "nonnegative": cls.NONNEGATIVE, "nn": cls.NONNEGATIVE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise DomainError(f"unknown mode {value!r}; use 'signed' or 'nonneg'") from None


@dataclass(frozen=True)
class ProblemGeometry:
    alpha: float
    beta: float

    def __post_init__(self):
        if not 0.0 < self.beta < self.alpha < 1.0:
            raise DomainError(f"need 0 < beta < alpha < 1, got alpha={self.alpha}, beta={self.beta}")

    @classmethod
    def from_dims(cls, n: int, k: int, m: int) -> "ProblemGeometry":
        return cls(m / n, k / n)


@dataclass(frozen=True)
class PtSolution:
    value: float
    residual: float
    mode: Mode
    iterations: int = 0


def beta_lower_limit(alpha: float, mode: Mode) -> float:
    """Smallest admissible beta for the characteristic at this alpha."""
    return 0.0 if Mode.parse(mode) is Mode.SIGNED else max(2.0 * alpha - 1.0, 0.0)


def alpha_upper_limit(beta: float, mode: Mode) -> float:
    """Largest admissible alpha for the characteristic at this beta."""
    return 1.0 if Mode.parse(mode) is Mode.SIGNED else 0.5 * (1.0 + beta)


def erfinv_argument_complement(alpha: float, b: float, mode: Mode) -> float:
    """One minus the erfinv argument, computed without cancellation."""
    if Mode.parse(mode) is Mode.SIGNED:
        return (alpha - b) / (1.0 - b)
    return 2.0 * (alpha - b) / (1.0 - b)


def q_value(alpha: float, b: float, mode: Mode) -> float:
    """``erfinv`` of the mode's argument at auxiliary point ``b``."""
    if not (0.0 < alpha < 1.0 and b < 1.0):
        raise DomainError(f"need 0 < alpha < 1 and b < 1, got alpha={alpha}, b={b}")
    comp = erfinv_argument_complement(alpha, b, mode)
    if not _EDGE <= comp <= 1.0 - _EDGE:
        raise DomainError(
            f"erfinv argument {1.0 - comp!r} outside [{_EDGE}, {1 - _EDGE}] "
            f"(alpha={alpha}, b={b}, mode={Mode.parse(mode).value})"
        )
    return sf.erfcinv(comp)


def _prefactor(mode: Mode) -> float:
    if Mode.parse(mode) is Mode.SIGNED:
        return math.sqrt(2.0 / math.pi)
    return math.sqrt(1.0 / (2.0 * math.pi))


def xi(alpha: float, beta: float, mode=Mode.SIGNED) -> float:
    """Characteristic function; equals 1 exactly on the transition curve."""
    mode = Mode.parse(mode)
    q = q_value(alpha, beta, mode)
    return (1.0 - beta) * _prefactor(mode) * math.exp(-q * q) / (alpha * math.sqrt(2.0) * q)


def psi(beta: float, alpha: float, mode=Mode.SIGNED) -> float:
    """The characteristic read as a function of alpha at fixed beta."""
    return xi(alpha, beta, mode)


def solve_beta_w(alpha: float, mode=Mode.SIGNED, tol: float = DEFAULT_TOL) -> PtSolution:
    """Weak threshold beta_w(alpha): the unique root of xi_alpha(beta) = 1."""
    mode = Mode.parse(mode)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    eps = 1e-12 * alpha
    lo = beta_lower_limit(alpha, mode) + eps
    hi = alpha - eps

    def f(b):
        return xi(alpha, b, mode) - 1.0

    res = find_root(f, Bracket.from_function(f, lo, hi), tol)
    return PtSolution(res.root, res.residual, mode, res.iterations)


def solve_alpha_w(beta: float, mode=Mode.SIGNED, tol: float = DEFAULT_TOL) -> PtSolution:
    """Breaking point alpha_w(beta): the unique root of psi_beta(alpha) = 1."""
    mode = Mode.parse(mode)
    if not 0.0 < beta < 1.0:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    top = alpha_upper_limit(beta, mode)
    eps = 1e-12 * (top - beta)
    lo, hi = beta + eps, top - eps

    def f(a):
        return psi(beta, a, mode) - 1.0

    res = find_root(f, Bracket.from_function(f, lo, hi), tol)
    return PtSolution(res.root, res.residual, mode, res.iterations)


@dataclass
class PtCurve:
    mode: Mode
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def pt_curve(mode, grid: Iterable[float]) -> PtCurve:
    """Solve beta_w on every grid point; failures are collected, not raised."""
    mode = Mode.parse(mode)
    curve = PtCurve(mode)
    for a in sorted(float(a) for a in grid):
        try:
            curve.rows.append((a, solve_beta_w(a, mode).value))
        except L1LdpError as exc:
            curve.failures.append((a, str(exc)))
    return curve
