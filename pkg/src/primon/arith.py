"""
Multiplicative number theory on machine-size integers.

Factorization (trial division, then Brent's variant of Pollard rho), Euler's
totient, Möbius, Carmichael's λ, multiplicative order and the generalized
Dedekind function ψ_b(n) = n ∏_{p|n} (1 − p^{−b}) / (1 − p^{−1}).

Key features:
- Exact integer arithmetic for every function returning an int
- Pollard-Brent seeded by the cofactor, so factorizations are reproducible
- Smallest-prime-factor tables for scans over all n up to a bound
- ψ_b in direct or log form, the log form free of cancellation near p^{−b} = 0
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from mpmath import mp

from .errors import DomainError
from .numeric import XReal, log1m, xreal
from .primes import is_prime, primes_upto

TRIAL_LIMIT = 10**6
_U64 = 2**64


@dataclass(frozen=True)
class Factorization:
    """Prime powers ``(p, k)`` in ascending ``p``; the empty tuple factors 1."""

    pairs: tuple[tuple[int, int], ...]

    def value(self) -> int:
        """The factored integer."""
        return math.prod(p**k for p, k in self.pairs)

    @property
    def primes(self) -> tuple[int, ...]:
        """Distinct prime factors in ascending order."""
        return tuple(p for p, _ in self.pairs)

    @property
    def omega(self) -> int:
        """Number of distinct prime factors."""
        return len(self.pairs)

    @property
    def is_squarefree(self) -> bool:
        """True when every exponent is 1."""
        return all(k == 1 for _, k in self.pairs)


@lru_cache(maxsize=1)
def _trial_primes() -> tuple[int, ...]:
    return tuple(int(p) for p in primes_upto(TRIAL_LIMIT - 1))


def _brent(n: int, rng: random.Random) -> int:
    """A divisor of the odd composite ``n`` (possibly ``n`` itself on an unlucky seed)."""
    y = rng.randrange(1, n)
    c = rng.randrange(1, n - 2)
    m = rng.randrange(1, n)
    g = r = q = 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r <<= 1
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g


def _split_large(n: int, out: dict[int, int]) -> None:
    """Factor a cofactor without prime divisors below the trial limit."""
    if n == 1:
        return
    if n < TRIAL_LIMIT * TRIAL_LIMIT or is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    # seeded by n so factorizations are reproducible
    rng = random.Random(n)
    d = n
    while d in (1, n):
        d = _brent(n, rng)
    _split_large(d, out)
    _split_large(n // d, out)


def factorize(n: int) -> Factorization:
    """Canonical factorization of ``n >= 1``.

    Primes below 10^6 are removed by trial division; the remaining cofactor
    must be below 2^64, where primality is decided deterministically.

    Args:
        n: Integer to factor.

    Returns:
        The :class:`Factorization`; ``Factorization(())`` for 1.

    Raises:
        DomainError: n < 1, or the cofactor after trial division is 2^64 or more.
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"factorize needs n >= 1, got {n}")
    found: dict[int, int] = {}
    rest = n
    for p in _trial_primes():
        if p * p > rest:
            break
        if rest % p == 0:
            k = 0
            while rest % p == 0:
                rest //= p
                k += 1
            found[p] = k
    if rest > 1:
        if rest >= _U64:
            raise DomainError(f"cofactor {rest} of {n} exceeds 2^64; not factorizable here")
        _split_large(rest, found)
    return Factorization(tuple(sorted(found.items())))


def euler_phi(n: int) -> int:
    """Euler's totient φ(n) = ∏ (p − 1) p^{k−1}."""
    result = 1
    for p, k in factorize(n).pairs:
        result *= (p - 1) * p ** (k - 1)
    return result


def mobius(n: int) -> int:
    """Möbius μ(n): 0 unless n is squarefree, else (−1)^{ω(n)}."""
    f = factorize(n)
    if not f.is_squarefree:
        return 0
    return -1 if f.omega % 2 else 1


def carmichael_lambda(n: int) -> int:
    """λ(2)=1, λ(4)=2, λ(2^k)=2^{k−2} (k >= 3), λ(p^k)=φ(p^k) for odd p, lcm over prime powers."""
    result = 1
    for p, k in factorize(n).pairs:
        if p == 2 and k >= 3:
            part = 2 ** (k - 2)
        else:
            part = (p - 1) * p ** (k - 1)
        result = math.lcm(result, part)
    return result


def _require_unit(a: int, q: int) -> None:
    if q < 2:
        raise DomainError(f"modulus must be >= 2, got {q}")
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) != 1: {a} is not a unit mod {q}")


def multiplicative_order(a: int, q: int) -> int:
    """Least r >= 1 with a^r ≡ 1 (mod q), found by stripping prime factors off λ(q).

    Args:
        a: Unit modulo ``q``.
        q: Modulus q >= 2.

    Returns:
        ord_q(a), a divisor of λ(q).

    Raises:
        DomainError: q < 2 or gcd(a, q) != 1.
    """
    _require_unit(a, q)
    r = carmichael_lambda(q)
    for p in factorize(r).primes:
        while r % p == 0 and pow(a, r // p, q) == 1:
            r //= p
    return r


def orbit(a: int, q: int, start: int = 1) -> list[int]:
    """The cycle start, start·a, start·a², ... (mod q) of the multiplication-by-a permutation."""
    _require_unit(a, q)
    first = start % q
    cycle = [first]
    x = first * a % q
    while x != first:
        cycle.append(x)
        x = x * a % q
    return cycle


def dedekind_psi_b(n: int, b: object, *, log: bool = False) -> XReal:
    """ψ_b(n), or ln ψ_b(n) when ``log`` is set.

    Each prime contributes the ratio (1 − p^{−b}) / (1 − p^{−1}); at b = 1 the
    ratio is exactly 1 so ψ_1(n) = n without rounding.

    Args:
        n: Positive integer below 2^64 after trial division.
        b: Exponent b > 0.
        log: Return ln ψ_b(n) instead.

    Returns:
        ψ_b(n) or its logarithm at the working precision.

    Raises:
        DomainError: b <= 0, or n cannot be factorized.
    """
    b = xreal(b)
    if b <= 0:
        raise DomainError(f"ψ_b needs b > 0, got b={b}")
    primes = factorize(n).primes
    if log:
        total = mp.log(n)
        for p in primes:
            total += log1m(mp.power(p, -b)) - log1m(mp.one / p)
        return total
    value = xreal(n)
    for p in primes:
        value *= (1 - mp.power(p, -b)) / (1 - mp.power(p, -mp.one))
    return value


def smallest_factor_table(limit: int) -> np.ndarray:
    """spf[n] = smallest prime factor of n for 2 <= n <= limit (spf[0]=0, spf[1]=1)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    unset = np.flatnonzero(spf == 0)
    spf[unset] = unset
    if limit >= 1:
        spf[1] = 1
    return spf


def factorize_small(n: int, spf: np.ndarray) -> Factorization:
    """Factorization read off a smallest-prime-factor table covering ``n``."""
    if n < 1 or n >= spf.shape[0]:
        raise DomainError(f"{n} is outside the smallest-factor table (size {spf.shape[0]})")
    pairs: list[tuple[int, int]] = []
    while n > 1:
        p = int(spf[n])
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        pairs.append((p, k))
    return Factorization(tuple(pairs))
