"""
Criterion scans and asymptotic diagnostics.

Criterion scans (nicolas, conjecture, lower, sandwich) write one row per index
and exit 1 when any row fails. Diagnostics (asymp, li-integral, gap, kb, prop1)
sample a quantity at checkpoints and report its drift; they exit 0.

Key features:
- Prime tables sized from the largest index or checkpoint requested
- Notes for excluded rows and estimated constants printed on stderr
- The worker pool follows --threads; output is the same for any count
"""

from __future__ import annotations

from typing import Optional

import typer
from mpmath import mp

from ..criteria import (
    AsymptoticsReport,
    ScanResult,
    conjecture_scan,
    integral_gap_report,
    k_b_decomposition,
    k_b_estimate,
    li_integral_report,
    lower_bound_check,
    nicolas_scan,
    prop1_convergence,
    sandwich_scan,
    sum_vs_integral_report,
)
from ..report import Report
from ..session import Session
from .common import RunCommand, criterion_report, emit, parse_ints, real, session_for

scan = typer.Typer(help="RH-criterion scans over primorials and high-temperature diagnostics")

X_CHECKPOINTS = "1000,10000,100000,1000000"
N_CHECKPOINTS = "10,100,1000,10000"


def _emit_scan(session: Session, kind: str, result: ScanResult, **summary: object) -> None:
    report = criterion_report(kind, result.rows)
    report.notes.extend(result.notes)
    report.summary.update(summary)
    report.summary.update(
        rows=len(result.rows), first_failure=result.first_failure, holds=result.all_hold
    )
    emit(session, report, holds=result.all_hold)


def _emit_samples(session: Session, kind: str, axis: str, result: AsymptoticsReport) -> None:
    columns = [axis, "value"] + (["scale"] if result.scale else [])
    report = Report(kind=kind, columns=columns, notes=list(result.notes))
    for i, (coordinate, value) in enumerate(result.samples):
        row = {axis: coordinate, "value": value}
        if result.scale:
            row["scale"] = result.scale[i]
        report.add(**row)
    report.summary.update(
        b=result.b,
        drift=result.drift,
        trend=result.trend,
        last=result.last,
        relative_change=result.relative_change,
    )
    emit(session, report)


@scan.command("nicolas", cls=RunCommand)
def nicolas(
    ctx: typer.Context,
    qmax: int = typer.Option(10_000, "--qmax", help="Largest primorial index"),
) -> None:
    """Nicolas inequality N_k / φ(N_k) > e^γ ln ln N_k for 2 <= k <= QMAX."""
    with session_for(ctx) as session:
        result = nicolas_scan(qmax, session.prime_table(qmax))
        _emit_scan(session, "nicolas", result)


@scan.command("conjecture", cls=RunCommand)
def conjecture(
    ctx: typer.Context,
    b: str = typer.Option(..., "--b", help="b > 1"),
    qmax: int = typer.Option(10_000, "--qmax", help="Largest primorial index"),
) -> None:
    """R_b(N_n) = ψ_b(N_n) / (N_n ln ln N_n) > e^γ / ζ(b) for 3 <= n <= QMAX."""
    with session_for(ctx) as session:
        b_value = real(b, "--b")
        result = conjecture_scan(b_value, qmax, session.prime_table(qmax))
        _emit_scan(session, "conjecture", result, b=b_value)


@scan.command("lower", cls=RunCommand)
def lower(
    ctx: typer.Context,
    b: str = typer.Option(..., "--b", help="0.5 < b < 1"),
    epsilon: str = typer.Option("0.05", "--epsilon", help="0 < ε < 1"),
    n_min: int = typer.Option(1000, "--n-min", help="Rows below this index are not judged"),
    n_max: int = typer.Option(10_000, "--n-max"),
    step: int = typer.Option(100, "--step"),
    k_hat: Optional[str] = typer.Option(None, "--k-hat", help="Inject K_b instead of estimating"),
) -> None:
    """ψ_b(N_n)/N_n > K_b (1 − ε) ln ln N_n exp(−B_b(p_n)) for n in [N_MIN, N_MAX]."""
    with session_for(ctx) as session:
        b_value = real(b, "--b")
        ns = sorted(set(range(n_min, n_max + 1, max(step, 1))) | {n_max})
        result = lower_bound_check(
            b_value,
            real(epsilon, "--epsilon"),
            ns,
            session.prime_table(n_max),
            k_hat=None if k_hat is None else real(k_hat, "--k-hat"),
            min_n=n_min,
        )
        _emit_scan(session, "lower", result, b=b_value)


@scan.command("sandwich", cls=RunCommand)
def sandwich(
    ctx: typer.Context,
    b: str = typer.Option(..., "--b", help="b > 1"),
    n_max: int = typer.Option(100_000, "--n-max"),
) -> None:
    """n² > φ(n) ψ_b(n) >= n² / ζ(b) for 2 <= n <= N_MAX."""
    with session_for(ctx) as session:
        result = sandwich_scan(real(b, "--b"), n_max)
        report = Report(kind="sandwich", columns=["n"])
        for n in result.violations:
            report.add(n=n)
        report.summary.update(
            b=result.b,
            checked=result.checked,
            violations=len(result.violations),
            min_log_product=result.min_log_product,
            max_log_product=result.max_log_product,
            log_zeta=result.log_zeta,
            holds=result.holds,
        )
        emit(session, report, holds=result.holds)


@scan.command("asymp", cls=RunCommand)
def asymp(
    ctx: typer.Context,
    b: str = typer.Option(..., "--b", help="0.5 < b < 1"),
    x: str = typer.Option(X_CHECKPOINTS, "--x", help="Checkpoints, comma separated"),
) -> None:
    """S_b(x) − B_b(x): bounded in x when RH holds."""
    with session_for(ctx) as session:
        xs = parse_ints(x)
        result = sum_vs_integral_report(real(b, "--b"), xs, session.table_covering(max(xs)))
        _emit_samples(session, "asymp", "x", result)


@scan.command("li-integral", cls=RunCommand)
def li_integral(
    ctx: typer.Context,
    b: str = typer.Option(..., "--b", help="0.5 < b < 1"),
    x: str = typer.Option("1000,10000,100000", "--x", help="Checkpoints, comma separated"),
    closed_form: bool = typer.Option(False, "--ei", help="I_b by the Ei identity"),
) -> None:
    """S_b(x) − Li(x)/x^b − b I_b(x): bounded under RH."""
    with session_for(ctx) as session:
        xs = parse_ints(x)
        result = li_integral_report(
            real(b, "--b"),
            xs,
            session.table_covering(max(xs)),
            method="ei" if closed_form else "quad",
        )
        _emit_samples(session, "li-integral", "x", result)


@scan.command("gap", cls=RunCommand)
def gap(
    ctx: typer.Context,
    b: str = typer.Option(..., "--b", help="0.5 < b < 1"),
    x: str = typer.Option(X_CHECKPOINTS, "--x", help="Checkpoints, comma separated"),
) -> None:
    """J_b(x) − I_b(x) next to the RH error scale ∫_2^x ln t · t^{−b−1/2} dt."""
    with session_for(ctx) as session:
        xs = parse_ints(x)
        result = integral_gap_report(real(b, "--b"), xs, session.table_covering(max(xs)))
        _emit_samples(session, "gap", "x", result)


@scan.command("kb", cls=RunCommand)
def kb(
    ctx: typer.Context,
    b: str = typer.Option(..., "--b", help="0.5 < b < 1"),
    n: str = typer.Option("1000,5000,10000", "--n", help="Primorial indices"),
    decompose: bool = typer.Option(False, "--decompose", help="Add the factor split at max n"),
) -> None:
    """ρ(n) = [ψ_b(N_n)/N_n] / [ln p_n exp(−B_b(p_n))]; its limit estimates K_b."""
    with session_for(ctx) as session:
        b_value = real(b, "--b")
        ns = parse_ints(n)
        table = session.prime_table(max(ns))
        result = k_b_estimate(b_value, ns, table)
        if decompose:
            split = k_b_decomposition(b_value, max(ns), table)
            parts = {
                "euler": split.euler,
                "integral": split.integral,
                "mertens": split.mertens,
                "exp_gamma": split.exp_gamma,
                "product": split.product,
            }
            result.notes.append(
                f"n={split.n}: " + " ".join(f"{k}={mp.nstr(v, 12)}" for k, v in parts.items())
            )
        _emit_samples(session, "kb", "n", result)


@scan.command("prop1", cls=RunCommand)
def prop1(
    ctx: typer.Context,
    b: str = typer.Option(..., "--b", help="b > 1"),
    n: str = typer.Option(N_CHECKPOINTS, "--n", help="Primorial indices"),
) -> None:
    """R_b(N_n) ζ(b) / e^γ at each checkpoint; tends to 1 from above."""
    with session_for(ctx) as session:
        ns = parse_ints(n)
        result = prop1_convergence(real(b, "--b"), ns, session.prime_table(max(ns)))
        _emit_samples(session, "prop1", "n", result)
