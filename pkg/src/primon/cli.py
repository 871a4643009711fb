"""
Main CLI module for primon.

The root callback turns the global flags into a :class:`~primon.config.RunConfig`
(flags override ``PRIMON_*`` environment variables, which override defaults)
and stores it on the context; each command group then runs inside a
:class:`~primon.session.Session` built from it.

Commands:
- primon primes: build or inspect the prime-table cache
- primon arith: multiplicative functions and orders
- primon specfun: ζ, Li, Bertrand integrals, C_b, γ
- primon kms: KMS_β values, ε_β(q) and the Table-1 grid
- primon scan: criterion scans and asymptotic diagnostics
- primon quantum: Bost-Connes operator checks
- primon constants: ζ(b), e^γ and e^γ/ζ(b)
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Optional

import typer
from mpmath import mp
from pydantic import ValidationError
from rich.markup import escape

from . import __version__
from .commands.arith_cmd import arith
from .commands.common import RunCommand, emit, err_console, real, session_for
from .commands.kms_cmd import kms
from .commands.primes_cmd import primes
from .commands.quantum_cmd import quantum
from .commands.scan_cmd import scan
from .commands.specfun_cmd import specfun
from .config import OutputFormat, RunConfig
from .report import Report
from .specfun import euler_gamma, exp_gamma, zeta_real

app = typer.Typer(help="primon – Bost-Connes KMS states and RH criteria on primorials")
app.add_typer(primes, name="primes")
app.add_typer(arith, name="arith")
app.add_typer(specfun, name="specfun")
app.add_typer(kms, name="kms")
app.add_typer(scan, name="scan")
app.add_typer(quantum, name="quantum")


def _version(value: bool) -> None:
    if value:
        typer.echo(f"primon {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    ctx: typer.Context,
    prec: Optional[int] = typer.Option(None, "--prec", help="Working precision in bits (>= 53)"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Absolute quadrature tolerance"),
    cache: Optional[Path] = typer.Option(
        None, "--cache", envvar="PRIMON_CACHE", help="Prime-table cache file"
    ),
    fmt: Optional[OutputFormat] = typer.Option(None, "--format", help="Report format"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the report to a file"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads, 0 = auto"),
    digits: Optional[int] = typer.Option(None, "--digits", help="Significant digits in reports"),
    verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="-v info, -vv debug"),
    version: bool = typer.Option(
        False, "--version", callback=_version, is_eager=True, help="Show the version and exit"
    ),
) -> None:
    overrides: dict[str, Any] = {
        "precision_bits": prec,
        "quadrature_tolerance": tol,
        "prime_cache_path": cache,
        "output_format": fmt,
        "output_path": out,
        "thread_count": threads,
        "significant_digits": digits,
    }
    if verbose:
        overrides["log_level"] = "DEBUG" if verbose > 1 else "INFO"
    try:
        ctx.obj = RunConfig(**{k: v for k, v in overrides.items() if v is not None})
    except ValidationError as exc:
        err_console.print(f"[red]Invalid configuration:[/red] {escape(str(exc))}")
        raise typer.Exit(2)


@app.command("constants", cls=RunCommand)
def constants(
    ctx: typer.Context,
    b: str = typer.Option("2", "--b", help="Real argument b > 1 for ζ(b)"),
) -> None:
    """Print ζ(b), γ, e^γ and e^γ/ζ(b), the limit of R_b(N_n)."""
    with session_for(ctx) as session:
        beta = real(b, "--b")
        zeta = zeta_real(beta)
        report = Report(kind="constants", columns=["name", "value"])
        report.add(name="zeta", value=zeta)
        report.add(name="euler_gamma", value=euler_gamma())
        report.add(name="exp_gamma", value=exp_gamma())
        report.add(name="exp_gamma_over_zeta", value=exp_gamma() / zeta)
        report.summary.update(b=beta, limit=exp_gamma() / zeta, precision=mp.prec)
        emit(session, report)

