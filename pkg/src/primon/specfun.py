"""
Special functions and prime-indexed sums at extended precision.

ζ(b) for real b > 1, Euler's constant, the offset logarithmic integral
Li(x) = ∫_2^x dt / ln t, the Bertrand integral B_b(x) = ∫_2^x dt / (t^b ln t),
the integrals J_b and I_b, prime power sums S_b(x), Mertens' product and the
constant C_b = Σ_p (ln(1 − p^{−b}) + p^{−b}).

Integrals default to adaptive quadrature; ``method="ei"`` switches to the
exact exponential-integral identities, which long scans use.

Key features:
- ζ and γ computed in private mpmath contexts, cached per precision
- Quadrature results carry their error estimate
- Prime sums read from memoised compensated prefix families
- C_b with a certified radius for the primes beyond the table
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

from mpmath import mp

from .errors import DomainError, ResourceLimitError
from .log import get_logger
from .numeric import (
    Quadrature,
    QuadratureResult,
    XReal,
    get_quadrature,
    log1m,
    scratch_context,
    xreal,
)
from .primes import PrimeTable

log = get_logger(__name__)

Method = Literal["quad", "ei"]

_GUARD_BITS = 20


def _check_method(method: str) -> None:
    if method not in ("quad", "ei"):
        raise DomainError(f"unknown integration method {method!r}; use 'quad' or 'ei'")


def neg_power(x: object, b: XReal) -> XReal:
    """x^{−b} as exp(−b ln x), the form every prime-indexed sum uses."""
    return mp.exp(-b * mp.log(x))


# -- ζ and γ ------------------------------------------------------------------


@lru_cache(maxsize=256)
def _zeta_cached(b: XReal, prec: int) -> XReal:
    ctx = scratch_context(prec + _GUARD_BITS)
    s = ctx.mpf(b)
    n_direct = prec // 2 + int(ctx.ceil(s)) + 10
    n_terms = prec // 2 + 4
    head = ctx.fsum(ctx.power(n, -s) for n in range(1, n_direct))
    big_n = ctx.mpf(n_direct)
    total = head + big_n ** (1 - s) / (s - 1) + big_n ** (-s) / 2
    rising = s
    n_power = big_n ** (-s - 1)
    inv_n2 = 1 / (big_n * big_n)
    for k in range(1, n_terms + 1):
        total += ctx.bernoulli(2 * k) / ctx.factorial(2 * k) * rising * n_power
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        n_power *= inv_n2
    return mp.mpf(total)


def zeta_real(b: object) -> XReal:
    """ζ(b) for real b > 1 by Euler–Maclaurin summation.

    With N = P/2 + ⌈b⌉ + 10 direct terms and P/2 + 4 Bernoulli corrections the
    remainder sits far below 2^{−P}; the sum is carried with 20 guard bits in a
    private context, so any thread may call it.

    Args:
        b: Real exponent b > 1.

    Returns:
        ζ(b) rounded to the working precision.

    Raises:
        DomainError: b <= 1.
    """
    b = xreal(b)
    if b <= 1:
        raise DomainError(f"ζ(b) needs b > 1 (pole at 1), got b={b}")
    return _zeta_cached(b, mp.prec)


@lru_cache(maxsize=16)
def _euler_gamma_cached(prec: int) -> XReal:
    # Brent–McMillan: γ = U/V − O(e^{−4n}) with n chosen so e^{−4n} < 2^{−P−20}.
    n = math.ceil((prec + _GUARD_BITS) * math.log(2) / 4) + 1
    ctx = scratch_context(prec + 2 * _GUARD_BITS + int(math.log2(n)) + 1)
    n2 = ctx.mpf(n) ** 2
    a_k = -ctx.log(n)
    b_k = ctx.one
    u, v = a_k, b_k
    for k in range(1, math.ceil(3.6 * n) + 10):
        b_k = b_k * n2 / (k * k)
        a_k = (a_k * n2 / k + b_k) / k
        u += a_k
        v += b_k
    return mp.mpf(u / v)


def euler_gamma() -> XReal:
    """Euler–Mascheroni γ at the working precision."""
    return _euler_gamma_cached(mp.prec)


def exp_gamma() -> XReal:
    """e^γ, the Nicolas and Robin constant."""
    return mp.exp(euler_gamma())


# -- integrals ------------------------------------------------------------------


def _require_x(x: XReal) -> None:
    if x < 2:
        raise DomainError(f"integrals start at 2; x must be >= 2, got x={x}")


def _require_unit_interval(b: XReal, low: float = 0) -> None:
    if not low < b < 1:
        raise DomainError(f"b must satisfy {low} < b < 1, got b={b}")


def li_offset_result(x: object, quadrature: Quadrature | None = None) -> QuadratureResult:
    """Li(x) = ∫_2^x dt / ln t by adaptive quadrature, with its error estimate."""
    x = xreal(x)
    _require_x(x)
    return (quadrature or get_quadrature()).integrate(lambda t: 1 / mp.log(t), 2, x)


def li_offset(x: object, *, method: Method = "quad", quadrature: Quadrature | None = None) -> XReal:
    """Offset logarithmic integral, lower limit 2 (Li(2) = 0)."""
    _check_method(method)
    x = xreal(x)
    _require_x(x)
    if x == 2:
        return mp.zero
    if method == "ei":
        return mp.ei(mp.log(x)) - mp.ei(mp.log(2))
    return li_offset_result(x, quadrature).value


def bertrand_result(
    b: object, x: object, quadrature: Quadrature | None = None
) -> QuadratureResult:
    """B_b(x) by adaptive quadrature, with the error estimate."""
    b, x = xreal(b), xreal(x)
    _require_unit_interval(b)
    _require_x(x)
    return (quadrature or get_quadrature()).integrate(
        lambda t: 1 / (mp.power(t, b) * mp.log(t)), 2, x
    )


def bertrand_B(
    b: object, x: object, *, method: Method = "quad", quadrature: Quadrature | None = None
) -> XReal:
    """B_b(x) = ∫_2^x dt / (t^b ln t) for 0 < b < 1.

    The ``ei`` path uses B_b(x) = Ei((1 − b) ln x) − Ei((1 − b) ln 2).
    """
    _check_method(method)
    b, x = xreal(b), xreal(x)
    _require_unit_interval(b)
    _require_x(x)
    if x == 2:
        return mp.zero
    if method == "ei":
        return mp.ei((1 - b) * mp.log(x)) - mp.ei((1 - b) * mp.log(2))
    return bertrand_result(b, x, quadrature).value


def I_b(
    b: object, x: object, *, method: Method = "quad", quadrature: Quadrature | None = None
) -> XReal:
    """I_b(x) = ∫_2^x Li(t) t^{−1−b} dt for 0.5 < b < 1.

    ``quad`` integrates the definition (Li evaluated in closed form inside the
    integrand); ``ei`` integrates by parts: I_b = (B_b(x) − Li(x) x^{−b}) / b.
    """
    _check_method(method)
    b, x = xreal(b), xreal(x)
    _require_unit_interval(b, 0.5)
    _require_x(x)
    if x == 2:
        return mp.zero
    if method == "ei":
        return (bertrand_B(b, x, method="ei") - li_offset(x, method="ei") * neg_power(x, b)) / b
    return (
        (quadrature or get_quadrature())
        .integrate(lambda t: li_offset(t, method="ei") * mp.power(t, -1 - b), 2, x)
        .value
    )


def rh_error_integral(b: object, x: object) -> XReal:
    """∫_2^x ln t · t^{−b−1/2} dt, the size of the conditional error between J_b and I_b."""
    b, x = xreal(b), xreal(x)
    if b <= 0:
        raise DomainError(f"b must be > 0, got b={b}")
    _require_x(x)
    c = mp.mpf(1) / 2 - b
    if c == 0:
        return (mp.log(x) ** 2 - mp.log(2) ** 2) / 2

    def antiderivative(t: XReal) -> XReal:
        return mp.power(t, c) * (c * mp.log(t) - 1) / (c * c)

    return antiderivative(x) - antiderivative(mp.mpf(2))


# -- prime-indexed sums -------------------------------------------------------


def _key(name: str, b: XReal) -> str:
    return f"{name}:{b!r}"


def power_prefix(table: PrimeTable, b: XReal) -> tuple[XReal, ...]:
    """Running S_b(p_k) = Σ_{i<=k} p_i^{−b}."""
    return table.prefix_sums(_key("pow", b), lambda p, lp: mp.exp(-b * lp))


def log1m_prefix(table: PrimeTable, b: XReal) -> tuple[XReal, ...]:
    """Running Σ_{i<=k} ln(1 − p_i^{−b})."""
    return table.prefix_sums(_key("log1m", b), lambda p, lp: log1m(mp.exp(-b * lp)))


def mertens_prefix(table: PrimeTable) -> tuple[XReal, ...]:
    """Running Σ_{i<=k} −ln(1 − 1/p_i)."""
    return table.prefix_sums("mertens", lambda p, lp: -log1m(mp.one / p))


def cb_prefix(table: PrimeTable, b: XReal) -> tuple[XReal, ...]:
    """Running Σ_{i<=k} (ln(1 − u) + u) with u = p_i^{−b}; every term is negative."""

    def term(p: int, lp: XReal) -> XReal:
        u = mp.exp(-b * lp)
        return log1m(u) + u

    return table.prefix_sums(_key("cb", b), term)


def _at(prefix: tuple[XReal, ...], k: int) -> XReal:
    return prefix[k - 1] if k else mp.zero


def prime_sum_S(b: object, x: int, table: PrimeTable) -> XReal:
    """S_b(x) = Σ_{p<=x} p^{−b}, accumulated in ascending prime order."""
    b = xreal(b)
    if b <= 0:
        raise DomainError(f"b must be > 0, got b={b}")
    return _at(power_prefix(table, b), table.index_upto(x))


def J_b_closed(b: object, x: int, table: PrimeTable) -> XReal:
    """J_b(x) = ∫_2^x π(t) t^{−1−b} dt = Σ_{p<=x} (p^{−b} − x^{−b}) / b, exact for step π."""
    b = xreal(b)
    _require_unit_interval(b)
    _require_x(xreal(x))
    k = table.index_upto(x)
    return (_at(power_prefix(table, b), k) - k * neg_power(x, b)) / b


def a_b_partial(b: object, x: int, table: PrimeTable) -> XReal:
    """A_b(x) = Σ_{p<=x} ln(1 − p^{−b})."""
    b = xreal(b)
    if b <= 0:
        raise DomainError(f"b must be > 0, got b={b}")
    return _at(log1m_prefix(table, b), table.index_upto(x))


def mertens_product(x: int, table: PrimeTable) -> XReal:
    """∏_{p<=x} (1 − 1/p)^{−1} as the exponential of a compensated log-sum."""
    return mp.exp(_at(mertens_prefix(table), table.index_upto(x)))


@dataclass(frozen=True)
class CbEstimate:
    """C_b over ``primes_used`` primes; the true constant lies within ``tail_radius``."""

    value: XReal
    tail_radius: XReal
    primes_used: int


def c_b_constant(b: object, table: PrimeTable, *, radius: object | None = None) -> CbEstimate:
    """C_b over the table primes plus a certified bound on the missing tail.

    With X the largest table prime and u = p^{−b} <= (X+1)^{−b} beyond it,
    |ln(1 − u) + u| <= u² / (2(1 − u)) and Σ_{n>X} n^{−2b} <= X^{1−2b} / (2b − 1).

    Args:
        b: Exponent with 0.5 < b < 1.
        table: Prime table; its length sets the tail radius.
        radius: Required tail radius, if any.

    Returns:
        A :class:`CbEstimate` with the partial value and the tail radius.

    Raises:
        DomainError: b outside (0.5, 1).
        ResourceLimitError: The table cannot reach ``radius``; ``best`` holds
            the radius it does reach.
    """
    b = xreal(b)
    _require_unit_interval(b, 0.5)
    largest = table.largest
    value = cb_prefix(table, b)[-1]
    u_max = neg_power(largest + 1, b)
    tail = mp.power(largest, 1 - 2 * b) / ((2 * b - 1) * 2 * (1 - u_max))
    if radius is not None and tail > xreal(radius):
        log.warning("cb.radius_unreachable", requested=str(radius), best=mp.nstr(tail, 6))
        raise ResourceLimitError(
            f"tail radius {radius} needs more primes than the table's {table.count}", best=tail
        )
    return CbEstimate(value=value, tail_radius=tail, primes_used=table.count)
