"""High-dimensional-geometry exponents: an independent route to the rate.

The net exponent is ``psi_com + psi_int - psi_ext`` where the internal and
external exponents are one-dimensional minimizations over ``y >= 0``.  The
minimizers have closed forms (``y_int = q_0``, ``y_ext = q_w``); the numeric
minimizations are kept available as oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import special_functions as sf
from .errors import DomainError
from .ldp_core import solve_q0
from .pt_core import Mode, q_value, solve_beta_w
from .root_finding import Bracket, find_root, minimize_scalar

Y_LO, Y_HI = 1e-8, 6.0
_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class HdgDecomposition:
    psi_com: float
    psi_int: float
    psi_ext: float
    psi_net: float
    y_int: float
    y_ext: float
    mode: Mode


def _check(alpha, beta):
    if not 0.0 < beta < alpha < 1.0:
        raise DomainError(f"need 0 < beta < alpha < 1, got alpha={alpha}, beta={beta}")


def _log_erfc(y):
    return math.log(sf.erfcx(y)) - y * y


def psi_com(alpha: float, beta: float, mode=Mode.SIGNED) -> float:
    _check(alpha, beta)
    d = alpha - beta
    value = -d * math.log(d / (1.0 - beta)) - (1.0 - alpha) * math.log((1.0 - alpha) / (1.0 - beta))
    if Mode.parse(mode) is Mode.SIGNED:
        value += d * _LOG2
    return value


def internal_objective(alpha: float, beta: float):
    """``y -> alpha y^2 + (alpha - beta) log erfc(y)``; convex on y > 0."""
    d = alpha - beta
    return lambda y: alpha * y * y + d * _log_erfc(y)


def external_objective(alpha: float, mode=Mode.SIGNED):
    if Mode.parse(mode) is Mode.SIGNED:
        return lambda y: alpha * y * y - (1.0 - alpha) * math.log(sf.erf(y))
    return lambda y: alpha * y * y - (1.0 - alpha) * (math.log1p(sf.erf(y)) - _LOG2)


def psi_int(alpha: float, beta: float, mode=Mode.SIGNED, numeric: bool = False) -> tuple[float, float]:
    """Internal exponent and its minimizer y_int.  Same in both modes."""
    _check(alpha, beta)
    obj = internal_objective(alpha, beta)
    if numeric:
        y, v = minimize_scalar(obj, Y_LO, Y_HI, tol=1e-12)
    else:
        y = solve_q0(alpha, beta)
        v = obj(y)
    return v - (alpha - beta) * _LOG2, y


def psi_ext(alpha: float, mode=Mode.SIGNED, numeric: bool = False) -> tuple[float, float]:
    """External exponent and its minimizer y_ext = erfinv at beta_w."""
    mode = Mode.parse(mode)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    obj = external_objective(alpha, mode)
    if numeric:
        return tuple(reversed(minimize_scalar(obj, Y_LO, Y_HI, tol=1e-12)))
    beta_w = solve_beta_w(alpha, mode).value
    y = q_value(alpha, beta_w, mode)
    # Expanded form, identical in both modes once erf(y) is substituted.
    v = alpha * y * y - (1.0 - alpha) * math.log((1.0 - alpha) / (1.0 - beta_w))
    return v, y


def psi_net(alpha: float, beta: float, mode=Mode.SIGNED) -> HdgDecomposition:
    mode = Mode.parse(mode)
    com = psi_com(alpha, beta, mode)
    i_val, y_int = psi_int(alpha, beta, mode)
    e_val, y_ext = psi_ext(alpha, mode)
    return HdgDecomposition(com, i_val, e_val, com + i_val - e_val, y_int, y_ext, mode)


def solve_s(alpha: float, beta: float) -> float:
    """Solve ``erfc(s/sqrt2)/2 = ((alpha-beta)/alpha) exp(-s^2/2) / (s sqrt(2 pi))``.

    Solved directly in s (both sides scaled by exp(s^2/2)), independently of
    the q-space solver; the root equals ``sqrt(2) q_0``.
    """
    _check(alpha, beta)
    ratio = (alpha - beta) / alpha

    def f(s):
        return 0.5 * sf.erfcx(s / math.sqrt(2.0)) - ratio / (s * math.sqrt(2.0 * math.pi))

    return find_root(f, Bracket.from_function(f, Y_LO, Y_HI * math.sqrt(2.0)), tol=1e-14).root


def psi_int_donoho(alpha: float, beta: float, mode=Mode.SIGNED, s: float | None = None) -> tuple[float, float]:
    """Internal-angle exponent in the s-parameterization; equals ``-psi_int``."""
    mode = Mode.parse(mode)
    _check(alpha, beta)
    if s is None:
        s = solve_s(alpha, beta)
    d = alpha - beta
    inner = -0.5 * (beta / d) * s * s - 0.5 * math.log(2.0 / math.pi) + math.log(alpha * s / d)
    if mode is Mode.SIGNED:
        return d * inner + d * _LOG2, s
    return d * (inner + _LOG2), s
