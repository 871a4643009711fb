"""
Arithmetic commands. Each prints a one-row report {input, value}.

Key features:
- φ, μ, λ, ψ_b, factorizations and multiplicative orders with orbits
"""

from __future__ import annotations

import typer

from ..arith import (
    carmichael_lambda,
    dedekind_psi_b,
    euler_phi,
    factorize,
    mobius,
    multiplicative_order,
    orbit,
)
from ..report import Report
from .common import RunCommand, emit, real, session_for

arith = typer.Typer(help="Multiplicative functions, orders and factorization")


def _single(ctx: typer.Context, kind: str, compute, label: str) -> None:
    with session_for(ctx) as session:
        value = compute()
        report = Report(kind=kind, columns=["input", "value"])
        report.add(input=label, value=value)
        report.summary.update(value=value)
        emit(session, report)


@arith.command("phi", cls=RunCommand)
def phi(ctx: typer.Context, n: int = typer.Option(..., "--n", help="n >= 1")) -> None:
    """Euler's totient φ(n)."""
    _single(ctx, "phi", lambda: euler_phi(n), f"n={n}")


@arith.command("lambda", cls=RunCommand)
def lambda_(ctx: typer.Context, n: int = typer.Option(..., "--n", help="n >= 1")) -> None:
    """Carmichael's λ(n), the exponent of (Z/nZ)*."""
    _single(ctx, "lambda", lambda: carmichael_lambda(n), f"n={n}")


@arith.command("mobius", cls=RunCommand)
def mobius_(ctx: typer.Context, n: int = typer.Option(..., "--n", help="n >= 1")) -> None:
    """Möbius μ(n)."""
    _single(ctx, "mobius", lambda: mobius(n), f"n={n}")


@arith.command("order", cls=RunCommand)
def order(
    ctx: typer.Context,
    a: int = typer.Option(..., "--a", help="Unit a with gcd(a, n) = 1"),
    n: int = typer.Option(..., "--n", help="Modulus n >= 2"),
    show_orbit: bool = typer.Option(False, "--orbit", help="Also list the orbit of 1"),
) -> None:
    """Multiplicative order ord_n(a)."""
    with session_for(ctx) as session:
        r = multiplicative_order(a, n)
        report = Report(kind="order", columns=["input", "value", "orbit"])
        report.add(
            input=f"a={a},n={n}",
            value=r,
            orbit=" ".join(map(str, orbit(a, n))) if show_orbit else None,
        )
        report.summary.update(value=r, carmichael=carmichael_lambda(n))
        emit(session, report)


@arith.command("psi", cls=RunCommand)
def psi(
    ctx: typer.Context,
    n: int = typer.Option(..., "--n", help="n >= 1"),
    b: str = typer.Option("1", "--b", help="Real b > 0"),
) -> None:
    """Generalized Dedekind ψ_b(n) = n ∏_{p|n} (1 − p^{−b}) / (1 − p^{−1})."""
    _single(ctx, "psi", lambda: dedekind_psi_b(n, real(b, "--b")), f"n={n},b={b}")


@arith.command("factor", cls=RunCommand)
def factor(ctx: typer.Context, n: int = typer.Option(..., "--n", help="n >= 1")) -> None:
    """Prime factorization as p^k factors."""
    _single(
        ctx,
        "factor",
        lambda: " ".join(f"{p}^{k}" for p, k in factorize(n).pairs),
        f"n={n}",
    )
