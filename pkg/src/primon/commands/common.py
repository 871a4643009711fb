"""
Shared plumbing for the primon command modules.

Every command builds a :class:`~primon.report.Report`, prints it on stdout in
the configured format and a one-line summary on stderr, then exits with the
criterion contract: 0 all hold, 1 a criterion failed, 2 an operational error.

Key features:
- Leaf commands accept --prec, --tol and --format after their name
- Toolkit and validation errors mapped to a red diagnostic and exit 2
- Reports written atomically when --out is set
"""

from __future__ import annotations

from contextlib import contextmanager
from typing import Any, Iterator, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from typer.core import TyperCommand, TyperGroup, TyperOption

from ..config import RunConfig
from ..errors import DomainError, PrimonError
from ..kms import CriterionRow
from ..numeric import XReal, xreal
from ..report import CRITERION_COLUMNS, Report, render, summary_line
from ..session import Session
from ..utils.fs import atomic_write_text

EXIT_FAILURE = 1
EXIT_ERROR = 2

err_console = Console(stderr=True, highlight=False, soft_wrap=True)


def config_from(ctx: typer.Context) -> RunConfig:
    """The RunConfig stored by the root callback, or the defaults."""
    config = ctx.find_root().obj
    if not isinstance(config, RunConfig):
        config = RunConfig()
    return config


# Leaf options that repeat the root's --prec/--tol/--format after the command name.
_RUN_FIELDS = {
    "run_prec": "precision_bits",
    "run_tol": "quadrature_tolerance",
    "run_format": "output_format",
}


def _run_options() -> list[TyperOption]:
    panel = "Run options"
    return [
        TyperOption(
            param_decls=["--prec", "run_prec"],
            type=int,
            default=None,
            help="Working precision in bits (>= 53)",
            rich_help_panel=panel,
        ),
        TyperOption(
            param_decls=["--tol", "run_tol"],
            type=float,
            default=None,
            help="Absolute quadrature tolerance",
            rich_help_panel=panel,
        ),
        TyperOption(
            param_decls=["--format", "run_format"],
            type=str,
            default=None,
            help="Report format: csv or json",
            rich_help_panel=panel,
        ),
    ]


def apply_run_options(ctx: typer.Context) -> None:
    """Fold the leaf-level run options into the root RunConfig.

    Leaf values win over the root flags, which win over ``PRIMON_*``.

    Args:
        ctx: Context of the command being invoked; its run options are removed
            from ``ctx.params`` so the command callback never sees them.

    Raises:
        typer.Exit: With code 2 when the merged config does not validate.
    """
    overrides = {}
    for name, field_name in _RUN_FIELDS.items():
        value = ctx.params.pop(name, None)
        if value is not None:
            overrides[field_name] = value
    if not overrides:
        return
    root = ctx.find_root()
    try:
        root.obj = config_from(ctx).with_overrides(**overrides)
    except ValidationError as exc:
        err_console.print(f"[red]Invalid configuration:[/red] {escape(str(exc))}")
        raise typer.Exit(EXIT_ERROR)


class RunCommand(TyperCommand):
    """Command that also accepts --prec, --tol and --format after its name."""

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.params.extend(_run_options())

    def invoke(self, ctx: typer.Context) -> Any:
        """Fold the run options into the config, then run the command."""
        apply_run_options(ctx)
        return super().invoke(ctx)


class RunGroup(TyperGroup):
    """Group callback variant of :class:`RunCommand` (``primon primes``)."""

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.params.extend(_run_options())

    def invoke(self, ctx: typer.Context) -> Any:
        """Fold the run options into the config, then run the callback."""
        apply_run_options(ctx)
        return super().invoke(ctx)


@contextmanager
def guarded() -> Iterator[None]:
    """Map toolkit and validation errors to a red stderr diagnostic and exit code 2."""
    try:
        yield
    except (PrimonError, ValidationError) as exc:
        err_console.print(f"[red]Error:[/red] {escape(str(exc))}")
        raise typer.Exit(EXIT_ERROR)


@contextmanager
def session_for(ctx: typer.Context) -> Iterator[Session]:
    """A guarded :class:`Session` built from the context's config."""
    with guarded():
        with Session(config_from(ctx)) as session:
            yield session


def emit(session: Session, report: Report, *, holds: Optional[bool] = None) -> None:
    """Print the report and summary, then leave with the exit-code contract."""
    config = session.config
    text = render(report, config.output_format, session.provenance(), config.significant_digits)
    if config.output_path is not None:
        atomic_write_text(config.output_path, text)
    else:
        typer.echo(text, nl=False)
    for note in report.notes:
        err_console.print(f"[yellow]note:[/yellow] {escape(note)}")
    err_console.print(escape(summary_line(report)))
    if holds is False:
        raise typer.Exit(EXIT_FAILURE)


def criterion_report(kind: str, rows: list[CriterionRow]) -> Report:
    """One report row per criterion row, in the shared criterion columns."""
    report = Report(kind=kind, columns=list(CRITERION_COLUMNS))
    for row in rows:
        report.add(
            n=row.q,
            p_n=row.p_n,
            log_N=row.log_N,
            ratio=row.ratio_R,
            threshold=row.threshold,
            epsilon=row.epsilon,
            holds=row.holds,
        )
    return report


def parse_ints(text: str) -> list[int]:
    """Parse a comma list of integers, accepting 1e3-style entries.

    Args:
        text: For example ``"1000,10000"`` or ``"1e3,1e4"``.

    Returns:
        The integers in the order given.

    Raises:
        typer.BadParameter: An entry is not an integer.
        DomainError: The list is empty.
    """
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            values.append(int(float(part)) if "e" in part.lower() else int(part))
        except ValueError:
            raise typer.BadParameter(f"{part!r} is not an integer")
    if not values:
        raise DomainError(f"expected at least one integer, got {text!r}")
    return values


def real(text: str, name: str) -> XReal:
    """Parse a decimal option exactly at the working precision."""
    try:
        return xreal(text)
    except (TypeError, ValueError):
        raise typer.BadParameter(f"{text!r} is not a real number", param_hint=name)
