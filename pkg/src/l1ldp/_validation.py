"""Argument checks shared by the public entry points."""

from __future__ import annotations

import math
import numbers

from .errors import DomainError


def check_count(value, name, minimum=0):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_fraction(value, name, open_interval=True):
    """A real in (0, 1), or [0, 1] when ``open_interval`` is False."""
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {v}")
    ok = 0.0 < v < 1.0 if open_interval else 0.0 <= v <= 1.0
    if not ok:
        raise DomainError(f"{name} must lie in {'(0, 1)' if open_interval else '[0, 1]'}, got {v}")
    return v


def check_dims(n, k, m):
    n = check_count(n, "n", 1)
    k = check_count(k, "k")
    m = check_count(m, "m")
    if not k <= m <= n:
        raise DomainError(f"need k <= m <= n, got n={n}, k={k}, m={m}")
    return n, k, m
