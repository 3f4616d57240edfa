"""Scalar error-function family used by the analytical formulas.

``erf``/``erfc`` come from the C math library, which evaluates the
complement directly (no ``1 - erf`` cancellation).  ``erfinv`` starts from
the SciPy inverse and is polished by one Newton step on ``erf``/``erfc`` so
the round trip holds to about one ulp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special as _sp

from .errors import DomainError

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


@dataclass(frozen=True)
class Accuracy:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-12

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")


DEFAULT_ACCURACY = Accuracy()


def _finite(x, name="x"):
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x


def erf(x: float) -> float:
    return math.erf(_finite(x))


def erfc(x: float) -> float:
    return math.erfc(_finite(x))


def erfcx(x: float) -> float:
    """Scaled complement ``exp(x**2) * erfc(x)``; finite for large ``x``."""
    return float(_sp.erfcx(_finite(x)))


def erfinv(p: float) -> float:
    p = _finite(p, "p")
    if not -1.0 < p < 1.0:
        raise DomainError(f"erfinv needs |p| < 1, got {p!r}")
    if p == 0.0:
        return 0.0
    if p < 0.0:
        return -erfinv(-p)
    x = float(_sp.erfinv(p))
    # Newton on the better conditioned residual.
    if p > 0.5:
        r = (1.0 - p) - math.erfc(x)
        dx = -r / (_TWO_OVER_SQRT_PI * math.exp(-x * x))
    else:
        r = math.erf(x) - p
        dx = -r / (_TWO_OVER_SQRT_PI * math.exp(-x * x))
    return x + dx


def erfcinv(p: float) -> float:
    """Inverse of ``erfc`` on (0, 2), accurate when ``p`` is tiny."""
    p = _finite(p, "p")
    if not 0.0 < p < 2.0:
        raise DomainError(f"erfcinv needs 0 < p < 2, got {p!r}")
    if p >= 0.5:
        return erfinv(1.0 - p)
    x = float(_sp.erfcinv(p))
    r = math.erfc(x) - p
    return x + r / (_TWO_OVER_SQRT_PI * math.exp(-x * x))


def gaussian_pdf(x: float) -> float:
    x = _finite(x)
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def gaussian_q(x: float) -> float:
    """Standard normal upper tail probability ``P(N(0,1) > x)``."""
    return 0.5 * math.erfc(_finite(x) / math.sqrt(2.0))
