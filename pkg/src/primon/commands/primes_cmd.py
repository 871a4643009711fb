"""
Prime-table commands: build the cache once, then inspect it.

Key features:
- Reuses a cache that already holds enough primes
- Summary with the largest prime, θ and the primorial magnitude
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer

from ..primes import primorial_magnitude
from ..report import Report
from .common import RunGroup, emit, session_for

primes = typer.Typer(help="Prime tables and the on-disk prime cache")


@primes.callback(invoke_without_command=True, cls=RunGroup)
def build(
    ctx: typer.Context,
    count: int = typer.Option(10_000, "--count", "-n", help="Number of primes"),
    cache: Optional[Path] = typer.Option(None, "--cache", help="Cache file for this run"),
    show: int = typer.Option(0, "--list", help="List the first K primes in the report"),
) -> None:
    """
    Sieve the first COUNT primes and write them to the cache.

    An existing cache that already holds COUNT primes is loaded instead.

    Examples:
        primon primes --count 10000 --cache primes.bin
        primon --format json primes -n 100 --list 10
    """
    with session_for(ctx) as session:
        if cache is not None:
            session.config = session.config.model_copy(update={"prime_cache_path": cache})
        table = session.prime_table(count)
        report = Report(kind="primes", columns=["n", "p_n", "theta"])
        for n in range(1, min(show, table.count) + 1):
            report.add(n=n, p_n=int(table.primes[n - 1]), theta=table.theta_prefix[n - 1])
        mantissa, exponent = primorial_magnitude(count, table)
        report.summary.update(
            count=table.count,
            largest=table.largest,
            theta=table.theta_prefix[count - 1],
            primorial=f"{float(mantissa):.4f}e{exponent}",
            checksum=table.checksum(),
        )
        emit(session, report)
