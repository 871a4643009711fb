"""
Prime tables: segmented sieve, Chebyshev θ prefix sums, π(x), primorials.

A :class:`PrimeTable` holds the first n primes together with ln p and the
running sums θ(p_k) = ln N_k. Everything that touches a primorial N_q works
from these prefix sums; N_q itself is only ever built as an integer for the
small exact cross-checks in :func:`primorial_exact`.

Key features:
- Odd-only segmented sieve with segments spread over the worker pool
- Deterministic Miller-Rabin for n < 2^64
- Memoised compensated prefix sums of any per-prime term
- Binary prime cache with magic, version and CRC-32 validation
- Sieve cap enforced on every path that may start a fresh sieve
"""

from __future__ import annotations

import math
import struct
import threading
import zlib
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from mpmath import mp

from .errors import CacheFormatError, DomainError, ResourceLimitError
from .log import get_logger
from .numeric import XReal
from .utils.fs import atomic_write_bytes
from .utils.summation import NeumaierSum, ordered_flat_map, ordered_map

log = get_logger(__name__)

DEFAULT_SIEVE_CAP = 10**8
DEFAULT_SEGMENT = 2**20

CACHE_MAGIC = b"PRTB"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sIQ")
_CRC = struct.Struct("<I")

# Deterministic for every n < 2^64.
_MR_BASES = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)

_PRIMORIAL_EXACT_MAX = 200

# memoised prefix families per table (one per (term, precision))
PREFIX_CACHE_SIZE = 32


def is_prime(n: int) -> bool:
    """Deterministic Miller–Rabin primality test for n < 2^64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _simple_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.empty(0, dtype=np.uint64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.uint64)


def _sieve_segment(low: int, high: int, base: Sequence[int]) -> np.ndarray:
    """Odd primes in [low, high]; ``low`` is odd, ``base`` holds the odd sieving primes."""
    odd_count = (high - low) // 2 + 1
    mask = np.ones(odd_count, dtype=bool)
    for p in base:
        p2 = p * p
        if p2 > high:
            break
        start = max(p2, ((low + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start > high:
            continue
        # consecutive odd multiples of p are p slots apart in odd-index space
        mask[(start - low) // 2 :: p] = False
    return (low + 2 * np.flatnonzero(mask)).astype(np.uint64)


def primes_upto(limit: int, *, segment_size: int = DEFAULT_SEGMENT) -> np.ndarray:
    """All primes <= ``limit`` as a uint64 array, by an odd-only segmented sieve."""
    if limit < 2:
        return np.empty(0, dtype=np.uint64)
    base = [int(p) for p in _simple_sieve(math.isqrt(limit))[1:]]
    span = 2 * segment_size
    lows = list(range(3, limit + 1, span))
    segments = ordered_map(
        lambda chunk: [_sieve_segment(lo, min(lo + span - 2, limit), base) for lo in chunk],
        lows,
        chunk_size=1,
    )
    parts = [np.array([2], dtype=np.uint64)] + [seg for chunk in segments for seg in chunk]
    return np.concatenate(parts)


def _nth_prime_bound(n: int) -> int:
    """Upper bound for p_n (Rosser: p_n < n(ln n + ln ln n) for n >= 6)."""
    if n < 6:
        return 15
    ln_n = math.log(n)
    return int(n * (ln_n + math.log(ln_n))) + 3


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """First ``count`` primes with ln p and θ prefix sums at ``precision`` bits.

    ``theta_prefix[k]`` is ln N_{k+1}; the table is immutable and safe to share
    across threads.
    """

    primes: np.ndarray
    log_primes: tuple[XReal, ...]
    theta_prefix: tuple[XReal, ...]
    precision: int
    _prefix_cache: OrderedDict = field(default_factory=OrderedDict, repr=False)
    _prefix_lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def count(self) -> int:
        """Number of primes in the table."""
        return int(self.primes.shape[0])

    @property
    def largest(self) -> int:
        """p_count, the last prime held."""
        return int(self.primes[-1])

    @cached_property
    def ints(self) -> tuple[int, ...]:
        """The primes as Python ints, for exact arithmetic."""
        return tuple(int(p) for p in self.primes)

    @cached_property
    def next_prime(self) -> int:
        """Smallest prime above the table; every x below it is fully covered."""
        candidate = self.largest + 1
        while not is_prime(candidate):
            candidate += 1
        return candidate

    def covers(self, x: int) -> bool:
        """True when every prime <= x is in the table."""
        return int(x) < self.next_prime

    def require(self, x: int) -> None:
        """Raise :class:`ResourceLimitError` unless the table covers ``x``."""
        if not self.covers(x):
            raise ResourceLimitError(
                f"prime table ends at {self.largest}; it does not cover x={x}",
                best=self.largest,
            )

    def require_index(self, q: int) -> None:
        """Raise :class:`ResourceLimitError` unless the table holds ``q`` primes."""
        if q > self.count:
            raise ResourceLimitError(
                f"prime table holds {self.count} primes; index {q} requested", best=self.count
            )

    def index_upto(self, x: int) -> int:
        """π(x) for x covered by the table."""
        self.require(x)
        if x < 2:
            return 0
        return int(np.searchsorted(self.primes, np.uint64(x), side="right"))

    def theta(self, x: int) -> XReal:
        """Chebyshev θ(x) = Σ_{p<=x} ln p for x covered by the table."""
        k = self.index_upto(x)
        return self.theta_prefix[k - 1] if k else mp.zero

    def prefix_sums(self, key: str, term: Callable[[int, XReal], XReal]) -> tuple[XReal, ...]:
        """Compensated running sums of ``term(p, ln p)`` in ascending prime order.

        Results are memoised per ``key`` and working precision, keeping the
        ``PREFIX_CACHE_SIZE`` most recently used entries.

        Args:
            key: Identifies ``term`` uniquely, for example ``"log1m:b=0.75"``.
            term: Per-prime term; it runs on chunk workers.

        Returns:
            Tuple whose entry k - 1 is the sum over the first k primes.
        """
        cache_key = (key, mp.prec)
        with self._prefix_lock:
            cached = self._prefix_cache.get(cache_key)
            if cached is None:
                pairs = list(zip(self.ints, self.log_primes))
                terms = ordered_flat_map(lambda pair: term(*pair), pairs)
                cached = tuple(NeumaierSum().running(terms))
                self._prefix_cache[cache_key] = cached
                while len(self._prefix_cache) > PREFIX_CACHE_SIZE:
                    self._prefix_cache.popitem(last=False)
            else:
                self._prefix_cache.move_to_end(cache_key)
        return cached

    def payload(self) -> bytes:
        """The cache-file bytes (header, primes, θ doubles) without the trailing CRC."""
        header = _HEADER.pack(CACHE_MAGIC, CACHE_VERSION, self.count)
        theta = np.array([float(v) for v in self.theta_prefix], dtype="<f8")
        return header + self.primes.astype("<u8").tobytes() + theta.tobytes()

    def checksum(self) -> str:
        """CRC-32 of the cache payload as eight hex digits, reported in provenance."""
        return f"{zlib.crc32(self.payload()) & 0xFFFFFFFF:08x}"


def _build_table(primes: np.ndarray) -> PrimeTable:
    primes = np.ascontiguousarray(primes, dtype=np.uint64)
    primes.setflags(write=False)
    logs = tuple(ordered_flat_map(lambda p: mp.log(p), [int(p) for p in primes]))
    theta = tuple(NeumaierSum().running(logs))
    return PrimeTable(primes=primes, log_primes=logs, theta_prefix=theta, precision=mp.prec)


def _check_cap(count: int, cap: int) -> None:
    if count > cap:
        raise ResourceLimitError(f"{count} primes requested; sieve cap is {cap}", best=cap)


def sieve_first(
    n: int, *, cap: int = DEFAULT_SIEVE_CAP, segment_size: int = DEFAULT_SEGMENT
) -> PrimeTable:
    """Sieve the first ``n`` primes and build their θ prefix sums.

    Args:
        n: Number of primes, 1 <= n <= ``cap``.
        cap: Largest prime count the sieve may produce.
        segment_size: Odd slots per sieve segment.

    Returns:
        A :class:`PrimeTable` at the current working precision.

    Raises:
        DomainError: n < 1.
        ResourceLimitError: n exceeds ``cap``.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    _check_cap(n, cap)
    primes = primes_upto(_nth_prime_bound(n), segment_size=segment_size)[:n]
    table = _build_table(primes)
    log.info("sieve.done", count=table.count, largest=table.largest, precision=table.precision)
    return table


def table_covering(
    x: int, *, cap: int = DEFAULT_SIEVE_CAP, segment_size: int = DEFAULT_SEGMENT
) -> PrimeTable:
    """The smallest table whose last prime is >= ``x``."""
    if x <= 2:
        return sieve_first(1, cap=cap, segment_size=segment_size)
    if x > _nth_prime_bound(cap):
        raise ResourceLimitError(f"x={x} lies beyond the sieve cap of {cap} primes", best=cap)
    count = int(primes_upto(x - 1, segment_size=segment_size).shape[0]) + 1
    return sieve_first(count, cap=cap, segment_size=segment_size)


def nth_prime(n: int, table: PrimeTable | None = None, *, cap: int = DEFAULT_SIEVE_CAP) -> int:
    """The n-th prime, p_1 = 2.

    Args:
        n: Index n >= 1.
        table: Answer from this table when it holds n primes.
        cap: Largest index a fresh sieve may reach.

    Returns:
        p_n as an int.

    Raises:
        DomainError: n < 1.
        ResourceLimitError: n exceeds ``cap`` and the table does not hold it.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if table is not None and n <= table.count:
        return int(table.primes[n - 1])
    _check_cap(n, cap)
    return int(primes_upto(_nth_prime_bound(n))[n - 1])


def prime_count(x: int, table: PrimeTable | None = None, *, cap: int = DEFAULT_SIEVE_CAP) -> int:
    """π(x), the number of primes <= x.

    Args:
        x: Upper limit.
        table: Answer from this table when it covers x.
        cap: A fresh sieve may run up to the bound on p_cap.

    Returns:
        π(x) as an int.

    Raises:
        ResourceLimitError: x lies beyond the sieve limit implied by ``cap``.
    """
    if x < 2:
        return 0
    if table is not None and table.covers(x):
        return table.index_upto(x)
    limit = _nth_prime_bound(cap)
    if x > limit:
        raise ResourceLimitError(f"π({x}) needs a sieve beyond {limit}", best=limit)
    return int(primes_upto(int(x)).shape[0])


def log_primorial(q: int, table: PrimeTable) -> XReal:
    """θ(p_q) = ln N_q, read from the prefix sums."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    table.require_index(q)
    return table.theta_prefix[q - 1]


def primorial_exact(q: int) -> int:
    """N_q = p_1 ⋯ p_q as an exact integer, for 1 <= q <= 200."""
    if q < 1 or q > _PRIMORIAL_EXACT_MAX:
        raise DomainError(f"exact primorials are limited to 1 <= q <= {_PRIMORIAL_EXACT_MAX}")
    return math.prod(int(p) for p in primes_upto(_nth_prime_bound(q))[:q])


def primorial_magnitude(q: int, table: PrimeTable) -> tuple[XReal, int]:
    """(mantissa, exponent) with N_q = mantissa × 10^exponent and 1 <= mantissa < 10."""
    log10 = log_primorial(q, table) / mp.log(10)
    exponent = int(mp.floor(log10))
    return mp.power(10, log10 - exponent), exponent


def save_table(table: PrimeTable, path: Path) -> None:
    """
    Write ``table`` to ``path`` atomically.

    The file holds a little-endian header (magic, version, count), the primes
    as uint64, θ as float64 and a trailing CRC-32 of everything before it.

    Args:
        table: Table to persist.
        path: Cache file; its parent directories are created.
    """
    payload = table.payload()
    atomic_write_bytes(Path(path), payload + _CRC.pack(zlib.crc32(payload) & 0xFFFFFFFF))
    log.info("cache.saved", path=str(path), count=table.count)


def load_table(path: Path) -> PrimeTable:
    """
    Read a cache file written by :func:`save_table`.

    θ is recomputed at the working precision when it exceeds 53 bits; at 53
    bits the stored doubles are used as they are.

    Args:
        path: Cache file.

    Returns:
        The cached :class:`PrimeTable`.

    Raises:
        CacheFormatError: The file is truncated, empty, of another format or
            version, or fails its checksum.
    """
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size + _CRC.size:
        raise CacheFormatError(f"{path}: truncated header")
    magic, version, count = _HEADER.unpack_from(data)
    if magic != CACHE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}")
    if version != CACHE_VERSION:
        raise CacheFormatError(f"{path}: unsupported format version {version}")
    if count == 0:
        raise CacheFormatError(f"{path}: cache holds no primes")
    expected = _HEADER.size + 16 * count + _CRC.size
    if len(data) != expected:
        raise CacheFormatError(f"{path}: expected {expected} bytes, found {len(data)}")
    body, (crc,) = data[: -_CRC.size], _CRC.unpack_from(data, len(data) - _CRC.size)
    if zlib.crc32(body) & 0xFFFFFFFF != crc:
        raise CacheFormatError(f"{path}: checksum mismatch")

    offset = _HEADER.size
    primes = np.frombuffer(data, dtype="<u8", count=count, offset=offset).astype(np.uint64)
    if mp.prec > 53:
        table = _build_table(primes)
    else:
        theta = np.frombuffer(data, dtype="<f8", count=count, offset=offset + 8 * count)
        primes.setflags(write=False)
        table = PrimeTable(
            primes=primes,
            log_primes=tuple(mp.log(int(p)) for p in primes),
            theta_prefix=tuple(mp.mpf(float(v)) for v in theta),
            precision=mp.prec,
        )
    log.info("cache.loaded", path=str(path), count=table.count)
    return table
