"""
Compensated summation and deterministic chunked parallelism.

Sums over primes run in ascending index order through a Neumaier
(error-compensated) accumulator. Parallel work is split into contiguous chunks
whose boundaries depend only on ``chunk_size``; chunk results are combined in
index order, so the outcome is bit-identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Generic, Iterable, Iterator, Sequence, TypeVar

from mpmath import mp

T = TypeVar("T")
R = TypeVar("R")

DEFAULT_CHUNK = 4096

_workers = 1


def set_workers(count: int) -> None:
    """Default worker count for :func:`ordered_map`; values below 1 mean 1."""
    global _workers
    _workers = max(1, int(count))


def get_workers() -> int:
    return _workers


class NeumaierSum(Generic[T]):
    """Running sum with a separate compensation term (Kahan–Babuška–Neumaier)."""

    __slots__ = ("_sum", "_comp")

    def __init__(self, start: T | None = None) -> None:
        self._sum = mp.zero if start is None else start
        self._comp = self._sum * 0

    def add(self, term: T) -> None:
        total = self._sum + term
        if abs(self._sum) >= abs(term):
            self._comp += (self._sum - total) + term
        else:
            self._comp += (term - total) + self._sum
        self._sum = total

    def extend(self, terms: Iterable[T]) -> "NeumaierSum[T]":
        for term in terms:
            self.add(term)
        return self

    def merge(self, other: "NeumaierSum[T]") -> None:
        self.add(other._sum)
        self.add(other._comp)

    @property
    def value(self) -> T:
        return self._sum + self._comp

    def running(self, terms: Iterable[T]) -> Iterator[T]:
        """Add ``terms`` one by one, yielding the compensated prefix after each."""
        for term in terms:
            self.add(term)
            yield self._sum + self._comp


def chunk_bounds(length: int, chunk_size: int = DEFAULT_CHUNK) -> list[tuple[int, int]]:
    """Half-open (lo, hi) ranges of ``chunk_size`` covering 0..length."""
    return [(lo, min(lo + chunk_size, length)) for lo in range(0, length, chunk_size)]


def ordered_map(
    fn: Callable[[Sequence[T]], R],
    items: Sequence[T],
    *,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int | None = None,
) -> list[R]:
    """Apply ``fn`` to fixed contiguous chunks of ``items``; results in chunk order.

    ``fn`` runs on worker threads and must not change ``mp.prec``: mpmath keeps
    one working precision per process. Compute shared constants before calling.
    """
    chunks = [items[lo:hi] for lo, hi in chunk_bounds(len(items), chunk_size)]
    workers = get_workers() if workers is None else workers
    if workers <= 1 or len(chunks) <= 1:
        return [fn(chunk) for chunk in chunks]
    prec = mp.prec
    try:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, chunks))
    finally:
        # mp.prec is one value shared by every thread
        mp.prec = prec


def ordered_flat_map(
    fn: Callable[[T], R],
    items: Sequence[T],
    *,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int | None = None,
) -> list[R]:
    """Elementwise ``fn`` evaluated chunk-parallel, flattened back into index order."""
    parts = ordered_map(
        lambda chunk: [fn(item) for item in chunk], items, chunk_size=chunk_size, workers=workers
    )
    return [value for part in parts for value in part]


def deterministic_sum(
    term: Callable[[T], R],
    items: Sequence[T],
    *,
    chunk_size: int = DEFAULT_CHUNK,
    workers: int | None = None,
) -> R:
    """Compensated sum of ``term(item)``; identical bits for any worker count."""

    def partial(chunk: Sequence[T]) -> NeumaierSum:
        return NeumaierSum().extend(term(item) for item in chunk)

    total: NeumaierSum = NeumaierSum()
    for part in ordered_map(partial, items, chunk_size=chunk_size, workers=workers):
        total.merge(part)
    return total.value
