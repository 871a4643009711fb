"""
Special-function commands. Reports carry the value and, where the value comes
from quadrature or a truncated series, an error estimate.

Key features:
- Li by quadrature or by the Ei identity (--ei)
- C_b with its certified tail radius
"""

from __future__ import annotations

import typer

from ..report import Report
from ..specfun import (
    I_b,
    bertrand_result,
    c_b_constant,
    euler_gamma,
    exp_gamma,
    li_offset,
    li_offset_result,
    zeta_real,
)
from .common import RunCommand, emit, real, session_for

specfun = typer.Typer(help="ζ, Li, Bertrand integrals and the C_b constant")

COLUMNS = ["input", "value", "error"]


@specfun.command("zeta", cls=RunCommand)
def zeta(ctx: typer.Context, b: str = typer.Option(..., "--b", help="Real b > 1")) -> None:
    """Riemann ζ(b) by Euler-Maclaurin summation."""
    with session_for(ctx) as session:
        value = zeta_real(real(b, "--b"))
        report = Report(kind="zeta", columns=COLUMNS)
        report.add(input=f"b={b}", value=value)
        report.summary.update(value=value)
        emit(session, report)


@specfun.command("li", cls=RunCommand)
def li(
    ctx: typer.Context,
    x: str = typer.Option(..., "--x", help="Upper limit x >= 2"),
    closed_form: bool = typer.Option(False, "--ei", help="Use the Ei identity, not quadrature"),
) -> None:
    """Offset logarithmic integral Li(x) = ∫_2^x dt / ln t."""
    with session_for(ctx) as session:
        upper = real(x, "--x")
        report = Report(kind="li", columns=COLUMNS)
        if closed_form:
            value, error = li_offset(upper, method="ei"), None
        else:
            result = li_offset_result(upper)
            value, error = result.value, result.error
        report.add(input=f"x={x}", value=value, error=error)
        report.summary.update(value=value)
        emit(session, report)


@specfun.command("bertrand", cls=RunCommand)
def bertrand(
    ctx: typer.Context,
    b: str = typer.Option(..., "--b", help="0 < b < 1"),
    x: str = typer.Option(..., "--x", help="Upper limit x >= 2"),
    with_i: bool = typer.Option(False, "--with-i", help="Add I_b(x) (needs 0.5 < b < 1)"),
) -> None:
    """Bertrand integral B_b(x) = ∫_2^x dt / (t^b ln t)."""
    with session_for(ctx) as session:
        b_value, upper = real(b, "--b"), real(x, "--x")
        result = bertrand_result(b_value, upper)
        report = Report(kind="bertrand", columns=COLUMNS)
        report.add(input=f"B b={b} x={x}", value=result.value, error=result.error)
        if with_i:
            report.add(input=f"I b={b} x={x}", value=I_b(b_value, upper))
        report.summary.update(value=result.value)
        emit(session, report)


@specfun.command("cb", cls=RunCommand)
def cb(
    ctx: typer.Context,
    b: str = typer.Option(..., "--b", help="0.5 < b < 1"),
    count: int = typer.Option(100_000, "--count", help="Primes summed before the tail bound"),
    radius: str = typer.Option(None, "--radius", help="Required certified tail radius"),
) -> None:
    """C_b = Σ_p [ln(1 − p^{−b}) + p^{−b}] with a certified tail radius."""
    with session_for(ctx) as session:
        table = session.prime_table(count)
        estimate = c_b_constant(
            real(b, "--b"), table, radius=None if radius is None else real(radius, "--radius")
        )
        report = Report(kind="cb", columns=COLUMNS)
        report.add(input=f"b={b}", value=estimate.value, error=estimate.tail_radius)
        report.summary.update(value=estimate.value, primes=estimate.primes_used)
        emit(session, report)


@specfun.command("gamma", cls=RunCommand)
def gamma(ctx: typer.Context) -> None:
    """Euler's constant γ and e^γ."""
    with session_for(ctx) as session:
        report = Report(kind="gamma", columns=COLUMNS)
        report.add(input="gamma", value=euler_gamma())
        report.add(input="exp_gamma", value=exp_gamma())
        report.summary.update(value=euler_gamma())
        emit(session, report)
