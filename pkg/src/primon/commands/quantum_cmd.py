"""
Quantum toy-model commands: U_a eigen-relations, σ_t covariance and phase invariance.

Key features:
- One row per unit, with the order chain and spectrum checks
- Both phase-operator readings compared under the flow
"""

from __future__ import annotations

from typing import Optional

import numpy as np
import typer

from ..bcq import RESIDUAL_TOLERANCE, flow_covariance_check, phase_invariance_check, verify
from ..errors import DomainError
from ..report import Report
from .common import RunCommand, emit, parse_ints, session_for

quantum = typer.Typer(help="Bost-Connes operator checks at toy scale")

VERIFY_COLUMNS = [
    "q",
    "a",
    "r",
    "max_residual",
    "unitary",
    "multiplicative",
    "spectrum",
    "order_chain",
    "holds",
]


def _t_values(t: Optional[str], samples: int, seed: int) -> list[float]:
    if t:
        return [float(v) for v in t.split(",") if v.strip()]
    return [float(v) for v in np.random.default_rng(seed).uniform(-20.0, 20.0, samples)]


@quantum.command("verify", cls=RunCommand)
def verify_cmd(
    ctx: typer.Context,
    q: Optional[int] = typer.Option(None, "--q", help="Modulus q"),
    a: Optional[int] = typer.Option(None, "--a", help="Unit a mod q (all units if omitted)"),
    max_q: Optional[int] = typer.Option(None, "--max-q", help="Check every 2 <= q <= MAX_Q"),
) -> None:
    """
    Check U_a for unitarity, U_a U_b = U_ab, the Fourier eigen-relation and the
    orbit spectrum, plus ord_q(a) <= λ(q) <= φ(q) <= q − 1.

    Examples:
        primon quantum verify --q 15 --a 2
        primon quantum verify --max-q 50
    """
    with session_for(ctx) as session:
        if q is None and max_q is None:
            raise DomainError("give --q or --max-q")
        moduli = [q] if q is not None else list(range(2, max_q + 1))
        report = Report(kind="quantum", columns=VERIFY_COLUMNS)
        holds = True
        worst = 0.0
        for modulus in moduli:
            for result in verify(modulus, a if q is not None else None):
                holds = holds and result.holds
                worst = max(worst, result.max_residual)
                report.add(
                    q=result.q,
                    a=result.a,
                    r=result.r,
                    max_residual=result.max_residual,
                    unitary=result.unitary,
                    multiplicative=result.multiplicative,
                    spectrum=result.spectrum_ok,
                    order_chain=result.order_chain_ok,
                    holds=result.holds,
                )
        report.summary.update(
            rows=len(report.rows), max_residual=worst, tolerance=RESIDUAL_TOLERANCE, holds=holds
        )
        emit(session, report, holds=holds)


@quantum.command("flow", cls=RunCommand)
def flow(
    ctx: typer.Context,
    a: str = typer.Option("2,3,5", "--a", help="Multipliers a >= 2"),
    n: int = typer.Option(128, "--n", help="Truncation dimension N"),
    t: Optional[str] = typer.Option(None, "--t", help="Explicit times, comma separated"),
    samples: int = typer.Option(5, "--samples", help="Random times when --t is omitted"),
    seed: int = typer.Option(0, "--seed"),
) -> None:
    """σ_t(μ_a) = a^{it} μ_a on the columns n <= N/a the truncation keeps."""
    with session_for(ctx) as session:
        times = _t_values(t, samples, seed)
        report = Report(
            kind="flow", columns=["a", "N", "max_deviation", "rows_checked", "rows_clipped", "holds"]
        )
        holds = True
        for multiplier in parse_ints(a):
            result = flow_covariance_check(multiplier, n, times)
            holds = holds and result.holds
            report.add(
                a=multiplier,
                N=n,
                max_deviation=result.max_deviation,
                rows_checked=result.rows_checked,
                rows_clipped=result.rows_clipped,
                holds=result.holds,
            )
        report.summary.update(t=times, holds=holds)
        emit(session, report, holds=holds)


@quantum.command("phase", cls=RunCommand)
def phase(
    ctx: typer.Context,
    num: int = typer.Option(1, "--num", help="δ numerator"),
    den: int = typer.Option(3, "--den", help="δ denominator"),
    n: int = typer.Option(64, "--n", help="Truncation dimension N"),
    t: Optional[str] = typer.Option(None, "--t", help="Explicit times, comma separated"),
    samples: int = typer.Option(5, "--samples"),
    seed: int = typer.Option(0, "--seed"),
) -> None:
    """σ_t(e_δ) = e_δ for both phase-operator readings."""
    with session_for(ctx) as session:
        deviations = phase_invariance_check(num, den, n, _t_values(t, samples, seed))
        report = Report(kind="phase", columns=["mode", "max_deviation", "holds"])
        holds = True
        for mode, deviation in deviations.items():
            ok = deviation < RESIDUAL_TOLERANCE
            holds = holds and ok
            report.add(mode=mode, max_deviation=deviation, holds=ok)
        report.summary.update(delta=f"{num}/{den}", holds=holds)
        emit(session, report, holds=holds)
