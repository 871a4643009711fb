"""
Run session: applies a RunConfig and owns the prime-table cache lifecycle.

Inside ``with Session(config):`` the working precision, worker count, default
quadrature and log level follow the config. Prime tables are loaded from the
cache when it covers the request; otherwise they are sieved and the cache is
rewritten atomically.
"""

from __future__ import annotations

from contextlib import ExitStack
from pathlib import Path
from typing import Optional

from .config import RunConfig
from .log import configure_logging, get_logger
from .numeric import Quadrature, get_quadrature, precision, set_quadrature
from .primes import PrimeTable, load_table, prime_count, save_table, sieve_first
from .report import Provenance
from .utils.summation import get_workers, set_workers

log = get_logger(__name__)


class Session:
    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self._table: Optional[PrimeTable] = None
        self._stack: Optional[ExitStack] = None
        self._saved: tuple[int, Quadrature] | None = None

    def __enter__(self) -> "Session":
        configure_logging(self.config.log_level)
        self._saved = (get_workers(), get_quadrature())
        self._stack = ExitStack()
        self._stack.enter_context(precision(self.config.precision_bits))
        set_workers(self.config.workers())
        set_quadrature(Quadrature(tolerance=self.config.quadrature_tolerance))
        return self

    def __exit__(self, *exc_info: object) -> None:
        if self._stack is not None:
            self._stack.close()
            self._stack = None
        if self._saved is not None:
            workers, quadrature = self._saved
            set_workers(workers)
            set_quadrature(quadrature)
            self._saved = None

    @property
    def cache_path(self) -> Optional[Path]:
        return self.config.prime_cache_path

    def prime_table(self, count: int) -> PrimeTable:
        """A table holding at least ``count`` primes at the session precision."""
        if self._table is not None and self._table.count >= count:
            return self._table
        path = self.cache_path
        if path is not None and path.exists():
            cached = load_table(path)
            if cached.count >= count:
                self._table = cached
                return cached
            log.info("cache.too_small", path=str(path), count=cached.count, wanted=count)
        table = sieve_first(
            count, cap=self.config.sieve_cap, segment_size=self.config.segment_size
        )
        if path is not None:
            save_table(table, path)
        self._table = table
        return table

    def table_covering(self, x: int) -> PrimeTable:
        """A table containing every prime <= ``x``."""
        return self.prime_table(prime_count(x) + 1)

    def provenance(self) -> Provenance:
        return Provenance(
            precision=self.config.precision_bits,
            tolerance=self.config.quadrature_tolerance,
            prime_table_checksum=self._table.checksum() if self._table is not None else None,
        )
