"""Large-deviation rate of l1 recovery around the weak transition.

Everything is expressed through two scalars: ``q_w``, the erfinv value at the
transition point beta_w(alpha), and ``q_0``, the erfinv value at the
auxiliary point beta_0.  In ``q`` the defining equation of beta_0 is the
same for both modes,

    exp(-q**2) / (sqrt(pi) q) = c erfc(q),        c = alpha / (alpha - beta),

with its unique root in ``(0, 1 / sqrt(2 c (c - 1)))``.  The optimal bound
parameters and the rate follow in closed form.  ``zeta`` and
``zeta_gradient`` evaluate the underlying three-variable bound objective so
the closed form can be checked for stationarity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import integrate as _integrate
from scipy import special as _sp

from . import special_functions as sf
from .errors import ConvergenceError, DomainError
from .pt_core import Mode, q_value, solve_alpha_w, solve_beta_w
from .root_finding import Bracket, find_root

_SQRT_PI = math.sqrt(math.pi)
_SQRT2 = math.sqrt(2.0)
CRITICAL_TOL = 1e-9


class Tail(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class LdpSolution:
    alpha: float
    beta: float
    beta_w: float
    beta_0: float
    nu: float
    a0: float
    c3: float
    gamma: float
    rate: float
    tail: Tail
    mode: Mode
    q_w: float
    q_0: float


@dataclass(frozen=True)
class ZetaPoint:
    c3: float
    nu: float
    a0: float

    def __post_init__(self):
        if not (self.nu >= 0.0 and self.a0 > 0.0):
            raise DomainError(f"need nu >= 0 and a0 > 0, got nu={self.nu}, a0={self.a0}")
        if self.a0 == 1.0 and self.c3 != 0.0:
            raise DomainError("a0 = 1 requires c3 = 0")


def _check_shape(alpha, beta):
    if not 0.0 < beta < alpha < 1.0:
        raise DomainError(f"need 0 < beta < alpha < 1, got alpha={alpha}, beta={beta}")


def solve_q0(alpha: float, beta: float) -> float:
    """Root of the mode-independent equation defining beta_0, in q-space."""
    _check_shape(alpha, beta)
    c = alpha / (alpha - beta)
    hi = 1.0 / math.sqrt(2.0 * c * (c - 1.0))

    def g(q):
        # Divided through by exp(-q^2) so large q stays finite.
        return 1.0 / (_SQRT_PI * q) - c * sf.erfcx(q)

    lo = hi * 1e-12
    if g(hi) > 0.0:
        raise ConvergenceError(f"beta_0 equation not bracketed at alpha={alpha}, beta={beta}")
    return find_root(g, Bracket.from_function(g, lo, hi), tol=1e-14).root


def beta_from_q(alpha: float, q: float, mode) -> float:
    """Invert ``q = erfinv(argument(alpha, b))`` for ``b``."""
    if Mode.parse(mode) is Mode.SIGNED:
        return 1.0 - (1.0 - alpha) / sf.erf(q)
    return 1.0 - 2.0 * (1.0 - alpha) / (1.0 + sf.erf(q))


def solve_beta_0(alpha: float, beta: float, mode=Mode.SIGNED) -> float:
    """Auxiliary point beta_0 of the rate characterization (may be negative)."""
    return beta_from_q(alpha, solve_q0(alpha, beta), mode)


def _log_one_minus_b_over_alpha_minus_b(q, mode):
    # log((1 - b)/(alpha - b)) for b = beta_from_q(alpha, q): equals -log erfc(q), plus log 2 if nonneg.
    log_erfc = math.log(sf.erfcx(q)) - q * q
    extra = 0.0 if mode is Mode.SIGNED else math.log(2.0)
    return extra - log_erfc


def _rate_from_q(alpha, beta, beta_w, beta_0, q_w, q_0, mode):
    t3 = (
        math.log(alpha - beta)
        + _log_one_minus_b_over_alpha_minus_b(q_0, mode)
        - math.log1p(-beta_w)
    )
    return (
        alpha * math.log(q_w / q_0)
        + (1.0 - beta) * (math.log1p(-beta) - math.log1p(-beta_w))
        + beta * t3
    )


def optimal_point(alpha: float, beta: float, mode=Mode.SIGNED) -> LdpSolution:
    """Closed-form optimal bound parameters (nu, A_0, c_3, gamma) and the rate."""
    mode = Mode.parse(mode)
    _check_shape(alpha, beta)
    beta_w = solve_beta_w(alpha, mode).value
    q_w = q_value(alpha, beta_w, mode)
    nu = _SQRT2 * q_w
    alpha_w = solve_alpha_w(beta, mode).value
    if abs(alpha - alpha_w) <= CRITICAL_TOL:
        return LdpSolution(alpha, beta, beta_w, beta_w, nu, 1.0, 0.0, math.sqrt(alpha) / 2.0,
                           0.0, Tail.UPPER, mode, q_w, q_w)
    q_0 = solve_q0(alpha, beta)
    beta_0 = beta_from_q(alpha, q_0, mode)
    a0 = q_w / q_0
    c3 = (1.0 - a0 * a0) * math.sqrt(alpha) / a0
    gamma = math.sqrt(alpha) / (2.0 * a0)
    tail = Tail.UPPER if alpha > alpha_w else Tail.LOWER
    value = _rate_from_q(alpha, beta, beta_w, beta_0, q_w, q_0, mode)
    return LdpSolution(alpha, beta, beta_w, beta_0, nu, a0, c3, gamma, value, tail, mode, q_w, q_0)


def rate(alpha: float, beta: float, mode=Mode.SIGNED) -> float:
    """Rate I_ldp(alpha, beta); nonpositive, zero only at the breaking point."""
    return optimal_point(alpha, beta, mode).rate


def _gamma_hat(c3, alpha):
    s = math.sqrt(c3 * c3 + 4.0 * alpha)
    # (c3 - s)/4 rewritten to avoid cancellation for c3 > 0.
    return -alpha / (c3 + s) if c3 >= 0.0 else (c3 - s) / 4.0


def _i_sph_signed(c3, alpha):
    """Exponent of E exp(-c3 sqrt(n) |g|) for either sign of c3."""
    gh = _gamma_hat(c3, alpha)
    return gh * c3 - 0.5 * alpha * math.log1p(-c3 / (2.0 * gh))


def i_sph(c3: float, alpha: float, tail=Tail.UPPER) -> float:
    """Sphere exponent for magnitude ``c3 >= 0``.

    Upper tail: growth rate of E exp(-c3 sqrt(n) |g|); lower tail: of
    E exp(+c3 sqrt(n) |g|), which equals the upper formula at ``-c3``.
    """
    if c3 < 0.0:
        raise DomainError("i_sph takes the magnitude c3 >= 0; the tail selects the sign")
    return _i_sph_signed(c3 if Tail(tail) is Tail.UPPER else -c3, alpha)


def _w_parts(nu, a0):
    """(T, erf term, log w2) with w1 = T + erf(nu/sqrt 2)."""
    t = math.exp(-0.5 * nu * nu) * sf.erfcx(nu / (_SQRT2 * a0)) / a0
    log_w2 = (1.0 - a0 * a0) * nu * nu / (2.0 * a0 * a0) - math.log(a0)
    return t, sf.erf(nu / _SQRT2), log_w2


def w_values(nu: float, a0: float, mode=Mode.SIGNED) -> tuple[float, float]:
    """Closed forms (w_1 or w_{1,+}, w_2) as functions of (nu, A_0)."""
    t, e, log_w2 = _w_parts(nu, a0)
    w1 = t + e
    if Mode.parse(mode) is Mode.NONNEGATIVE:
        w1 = 0.5 * (w1 + 1.0)
    return w1, math.exp(log_w2)


def _ratio(c3, a0, alpha):
    """c3 / (1 - a0^2), continued by its stationary limit at (0, 1)."""
    if a0 == 1.0:
        if c3 != 0.0:
            raise DomainError("a0 = 1 requires c3 = 0")
        return math.sqrt(alpha)
    return c3 / (1.0 - a0 * a0)


def zeta(alpha: float, beta: float, p: ZetaPoint, mode=Mode.SIGNED) -> float:
    mode = Mode.parse(mode)
    c3, nu, a0 = p.c3, p.nu, p.a0
    t, e, log_w2 = _w_parts(nu, a0)
    w1 = t + e
    big_w1 = w1 if mode is Mode.SIGNED else 0.5 * (w1 + 1.0)
    if not big_w1 > 0.0:
        raise DomainError("w_1 is not positive at this point")
    r = _ratio(c3, a0, alpha)
    value = (
        -0.5 * c3 * c3
        + _i_sph_signed(c3, alpha)
        + (1.0 - beta) * math.log(big_w1)
        + beta * log_w2
        + 0.5 * c3 * r
    )
    if not math.isfinite(value):
        raise DomainError("zeta overflowed")
    return value


def zeta_gradient(alpha: float, beta: float, p: ZetaPoint, mode=Mode.SIGNED) -> tuple[float, float, float]:
    """Partial derivatives (d/dc3, d/dnu, d/dA0) of ``zeta``."""
    mode = Mode.parse(mode)
    c3, nu, a = p.c3, p.nu, p.a0
    t, e, _ = _w_parts(nu, a)
    w1 = t + e
    denom = w1 if mode is Mode.SIGNED else w1 + 1.0
    phi = math.sqrt(2.0 / math.pi) * math.exp(-0.5 * nu * nu)
    r = _ratio(c3, a, alpha)

    d_c3 = -c3 + r + 0.5 * (c3 - math.sqrt(c3 * c3 + 4.0 * alpha))

    dw1_dnu = (1.0 - a * a) / (a * a) * (t * nu - phi)
    d_nu = (1.0 - beta) * dw1_dnu / denom + beta * (1.0 - a * a) * nu / (a * a)

    dw1_da = -t * (1.0 + nu * nu / (a * a)) / a + nu * phi / a ** 3
    d_a0 = (
        (1.0 - beta) * dw1_da / denom
        - beta * nu * nu / a ** 3
        - beta / a
        + r * r * a
    )
    return d_c3, d_nu, d_a0


def _log_chi_mgf(t: float, m: int) -> float:
    """log E exp(-t |g|) for g ~ N(0, I_m), by quadrature around the mode."""
    if m < 1:
        raise DomainError("dimension must be positive")
    r_star = 0.5 * (-t + math.sqrt(t * t + 4.0 * (m - 1)))

    def h(r):
        return -t * r + (m - 1) * math.log(r) - 0.5 * r * r if r > 0.0 else -math.inf

    h_star = h(r_star) if r_star > 0.0 else 0.0
    spread = 1.0 / math.sqrt(1.0 + (m - 1) / max(r_star, 1e-300) ** 2) if r_star > 0.0 else 1.0
    pts = [max(r_star - 10 * spread, 0.0), r_star, r_star + 10 * spread]
    total = 0.0
    edges = [0.0] + sorted(set(pts)) + [math.inf]
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi <= lo:
            continue
        val, _ = _integrate.quad(lambda r: math.exp(h(r) - h_star), lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)
        total += val
    log_norm = (0.5 * m - 1.0) * math.log(2.0) + float(_sp.gammaln(0.5 * m))
    return h_star + math.log(total) - log_norm


def finite_n_bound(n: int, k: int, m: int, mode=Mode.SIGNED) -> float:
    """Upper bound on log(P_err)/n at finite dimensions.

    Uses the asymptotically optimal parameters (ldp scaling ``c3 -> c3 sqrt n``,
    ``gamma -> gamma sqrt n``) in the finite-n Chernoff bound.  The choice
    ``c3 = 0`` always gives the trivial bound 0, so the result is never
    positive; shapes outside the rate's domain return 0.
    """
    mode = Mode.parse(mode)
    if not (isinstance(n, int) and isinstance(k, int) and isinstance(m, int)):
        n, k, m = int(n), int(k), int(m)
    if not 0 <= k <= m <= n or n < 1:
        raise DomainError(f"need 0 <= k <= m <= n, got n={n}, k={k}, m={m}")
    alpha, beta = m / n, k / n
    if k == 0 or k == m or m == n:
        return 0.0
    if mode is Mode.NONNEGATIVE and beta <= max(2 * alpha - 1, 0.0):
        return 0.0
    sol = optimal_point(alpha, beta, mode)
    if sol.c3 <= 0.0:
        return 0.0
    w1, w2 = w_values(sol.nu, sol.a0, mode)
    value = (
        -0.5 * sol.c3 ** 2
        + _log_chi_mgf(sol.c3 * math.sqrt(n), m) / n
        + (1.0 - beta) * math.log(w1)
        + beta * math.log(w2)
        + sol.c3 * sol.gamma
    )
    return min(value, 0.0)
