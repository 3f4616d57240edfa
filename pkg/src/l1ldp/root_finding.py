"""Bracketed root finding and bounded scalar minimization.

Thin, typed wrappers over SciPy's Brent implementations that add bracket
validation, residual reporting and this package's error types.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize as _opt

from .errors import BracketError, ConvergenceError

DEFAULT_TOL = 1e-11
DEFAULT_MAXITER = 200
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise BracketError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if not (math.isfinite(self.f_lo) and math.isfinite(self.f_hi)):
            raise BracketError("function values at the bracket ends must be finite")
        if (self.f_lo > 0 and self.f_hi > 0) or (self.f_lo < 0 and self.f_hi < 0):
            raise BracketError(
                f"no sign change on [{self.lo}, {self.hi}]: f = ({self.f_lo}, {self.f_hi})"
            )

    @classmethod
    def from_function(cls, f: Callable[[float], float], lo: float, hi: float) -> "Bracket":
        return cls(lo, hi, float(f(lo)), float(f(hi)))


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int


def find_root(
    f: Callable[[float], float],
    bracket: Bracket,
    tol: float = DEFAULT_TOL,
    maxiter: int = DEFAULT_MAXITER,
) -> RootResult:
    """Brent's method on a validated sign-change bracket."""
    if bracket.f_lo == 0.0:
        return RootResult(bracket.lo, 0.0, 0)
    if bracket.f_hi == 0.0:
        return RootResult(bracket.hi, 0.0, 0)
    try:
        x, info = _opt.brentq(
            f, bracket.lo, bracket.hi, xtol=tol * 1e-3, rtol=4 * _EPS,
            maxiter=maxiter, full_output=True, disp=False,
        )
    except ValueError as exc:
        raise BracketError(str(exc)) from exc
    if not info.converged:
        raise ConvergenceError(f"root finder stopped after {info.iterations} iterations")
    return RootResult(float(x), float(f(x)), int(info.iterations))


def minimize_scalar(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    maxiter: int = 500,
) -> tuple[float, float]:
    """Bounded golden-section/parabolic search for a unimodal ``f``."""
    if not lo < hi:
        raise BracketError(f"need lo < hi, got [{lo}, {hi}]")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = _opt.minimize_scalar(
            f, bounds=(lo, hi), method="bounded",
            options={"xatol": tol, "maxiter": maxiter},
        )
    if not res.success:
        raise ConvergenceError(f"minimizer failed: {res.message}")
    x, fx = _polish(f, float(res.x), float(res.fun), lo, hi)
    return x, fx


def _polish(f, x, fx, lo, hi):
    # Golden-section alone resolves a flat minimum only to ~sqrt(eps); a
    # symmetric three-point parabola fitted at a wider step does better.
    for h in (1e-4, 1e-5):
        h *= max(1.0, abs(x))
        if x - h <= lo or x + h >= hi:
            break
        fm, fp = f(x - h), f(x + h)
        curv = fp - 2.0 * fx + fm
        if not curv > 0.0:
            break
        step = 0.5 * h * (fm - fp) / curv
        if abs(step) >= h:
            break
        xn = x + step
        fn = f(xn)
        if fn <= fx + 1e-15 * max(1.0, abs(fx)):
            x, fx = xn, fn
    return x, fx
