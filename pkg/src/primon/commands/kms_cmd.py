"""
KMS-state commands: φ_β(q), ε_β(q), the Table-1 grid and truncated partition sums.

Key features:
- Comma lists of indices, 1e4-style entries accepted
- The reference grid with agreement flags and suspected-typo notes
"""

from __future__ import annotations

import typer
from mpmath import mp
from rich.table import Table

from ..kms import (
    HIGH_TEMPERATURE_NOTE,
    TABLE1_BETAS,
    TABLE1_QS,
    Regime,
    Table1Report,
    epsilon_beta,
    partition_truncated,
    phi_beta,
    phi_infinity,
    table1,
)
from ..report import Report
from ..specfun import zeta_real
from .common import (
    RunCommand,
    criterion_report,
    emit,
    err_console,
    parse_ints,
    real,
    session_for,
)

kms = typer.Typer(help="KMS_β states of the Bost-Connes system")


@kms.command("epsilon", cls=RunCommand)
def epsilon(
    ctx: typer.Context,
    beta: str = typer.Option(..., "--beta", help="Inverse temperature β > 1"),
    q: str = typer.Option(..., "--q", help="Primorial index, or a comma list"),
) -> None:
    """ε_β(q) = N_q |φ_β(N_q)| / ln ln N_q − e^γ / ζ(β − 1); exit 1 if any ε <= 0."""
    with session_for(ctx) as session:
        b = real(beta, "--beta")
        qs = parse_ints(q)
        table = session.prime_table(max(qs))
        rows = [epsilon_beta(n, b, table) for n in qs]
        report = criterion_report("epsilon", rows)
        if rows and rows[0].regime is Regime.HIGH_TEMPERATURE:
            report.notes.append(HIGH_TEMPERATURE_NOTE)
        holds = all(row.holds for row in rows)
        report.summary.update(beta=b, rows=len(rows), holds=holds)
        emit(session, report, holds=holds)


def _pretty(result: Table1Report) -> Table:
    grid = Table(title="ε_β(q)")
    grid.add_column("β")
    for q in TABLE1_QS:
        grid.add_column(f"q={q}", justify="right")
    for beta in TABLE1_BETAS:
        cells = [c for c in result.cells if c.beta == float(beta)]
        grid.add_row(
            str(beta),
            *(
                f"{mp.nstr(c.row.epsilon, 3)}" + ("" if c.agrees is not False else " [red]≠[/red]")
                for c in cells
            ),
        )
    grid.add_row(
        "N_q",
        *(f"{mp.nstr(m.mantissa, 3)}e{m.exponent}" for m in result.magnitudes),
    )
    return grid


@kms.command("table1", cls=RunCommand)
def table1_cmd(
    ctx: typer.Context,
    pretty: bool = typer.Option(False, "--pretty", help="Also draw the grid on stderr"),
) -> None:
    """
    Reproduce the ε_β(q) grid for β ∈ {2.1, 3, 10}, q ∈ {10, 10^2, 10^3, 10^4}.

    Rows carry the computed ε next to the published two-figure value, then
    the N_q magnitude row. Exit 0 iff every ε is positive.
    """
    with session_for(ctx) as session:
        result = table1(session.prime_table(max(TABLE1_QS)))
        report = Report(
            kind="table1",
            columns=["beta", "q", "epsilon", "reference", "agrees", "mantissa", "exponent"],
            notes=list(result.notes),
        )
        for cell in result.cells:
            report.add(
                beta=f"{cell.beta:g}",
                q=cell.q,
                epsilon=cell.row.epsilon,
                reference=cell.reference,
                agrees=cell.agrees,
            )
        for magnitude in result.magnitudes:
            report.add(
                q=magnitude.q,
                mantissa=magnitude.mantissa,
                exponent=magnitude.exponent,
                agrees=magnitude.agrees,
            )
        report.summary.update(all_positive=result.all_positive, all_agree=result.all_agree)
        if pretty:
            err_console.print(_pretty(result))
        emit(session, report, holds=result.all_positive)


@kms.command("phi", cls=RunCommand)
def phi(
    ctx: typer.Context,
    beta: str = typer.Option(..., "--beta", help="β >= 1, or 'inf' for the ground state"),
    q: int = typer.Option(..., "--q", help="q >= 2"),
) -> None:
    """φ_β(q) = q^{−β} ∏_{p|q} (1 − p^{β−1}) / (1 − p^{−1})."""
    with session_for(ctx) as session:
        report = Report(kind="phi", columns=["q", "beta", "value", "log_abs", "sign"])
        if beta.strip().lower() in ("inf", "infinity"):
            exact = phi_infinity(q)
            report.add(q=q, beta="inf", value=exact, sign=(exact > 0) - (exact < 0))
            report.summary.update(value=exact)
        else:
            state = phi_beta(q, real(beta, "--beta"))
            report.add(
                q=q, beta=state.beta, value=state.value(), log_abs=state.log_abs, sign=state.sign
            )
            if state.vanishing:
                report.notes.append("β = 1: every factor vanishes; φ_1(q) = 0")
            report.summary.update(value=state.value())
        emit(session, report)


@kms.command("partition", cls=RunCommand)
def partition(
    ctx: typer.Context,
    beta: str = typer.Option(..., "--beta", help="β > 1"),
    n: str = typer.Option("100,10000", "--n", help="Truncation sizes, comma separated"),
) -> None:
    """Truncated partition function Σ_{n<=N} n^{−β} against ζ(β) and its tail bound."""
    with session_for(ctx) as session:
        b = real(beta, "--beta")
        limit = zeta_real(b)
        report = Report(kind="partition", columns=["N", "value", "gap", "bound", "holds"])
        holds = True
        for size in parse_ints(n):
            value = partition_truncated(b, size)
            gap = limit - value
            bound = mp.power(size, 1 - b) / (b - 1)
            ok = bool(0 <= gap <= bound)
            holds = holds and ok
            report.add(N=size, value=value, gap=gap, bound=bound, holds=ok)
        report.summary.update(beta=b, zeta=limit, holds=holds)
        emit(session, report, holds=holds)
