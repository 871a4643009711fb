"""
Report emission: RFC-4180 CSV and single-object JSON.

Numbers are written as decimal strings with an explicit significant-digit
count; nothing run-dependent (timestamps, thread counts) enters a report, so
identical configurations give byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Optional, Sequence

import mpmath

from . import __version__
from .config import OutputFormat
from .numeric import format_xreal


@dataclass(frozen=True)
class Provenance:
    precision: int
    tolerance: float
    prime_table_checksum: Optional[str] = None
    toolkit_version: str = __version__

    def as_dict(self) -> dict[str, Any]:
        return {
            "precision": self.precision,
            "tolerance": repr(self.tolerance),
            "prime_table_checksum": self.prime_table_checksum,
            "toolkit_version": self.toolkit_version,
        }


@dataclass
class Report:
    kind: str
    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def add(self, **values: Any) -> None:
        unknown = set(values) - set(self.columns)
        if unknown:
            raise KeyError(f"columns {sorted(unknown)} are not part of the {self.kind} report")
        self.rows.append(values)


def _scalar(value: Any, digits: int) -> Any:
    """JSON-ready form: XReal and float as decimal strings, enums by value."""
    if isinstance(value, mpmath.mpf):
        return format_xreal(value, digits)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return format_xreal(mpmath.mpf(value), min(digits, 17))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return f"{value.real!r}{value.imag:+}j"
    if isinstance(value, dict):
        return {str(k): _scalar(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_scalar(v, digits) for v in value]
    return str(value)


def _cell(value: Any, digits: int) -> str:
    value = _scalar(value, digits)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def render_csv(report: Report, digits: int = 20) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_cell(row.get(column), digits) for column in report.columns])
    return buffer.getvalue()


def render_json(report: Report, provenance: Provenance, digits: int = 20) -> str:
    document = {
        "kind": report.kind,
        "columns": report.columns,
        "rows": [
            {column: _scalar(row.get(column), digits) for column in report.columns}
            for row in report.rows
        ],
        "summary": _scalar(report.summary, digits),
        "notes": list(report.notes),
        "provenance": provenance.as_dict(),
    }
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render(
    report: Report, fmt: OutputFormat, provenance: Provenance, digits: int = 20
) -> str:
    if fmt is OutputFormat.JSON:
        return render_json(report, provenance, digits)
    return render_csv(report, digits)


def summary_line(report: Report, digits: int = 8) -> str:
    parts = [f"{key}={_cell(value, digits)}" for key, value in report.summary.items()]
    return f"{report.kind}: " + " ".join(parts)


CRITERION_COLUMNS: Sequence[str] = (
    "n",
    "p_n",
    "log_N",
    "ratio",
    "threshold",
    "epsilon",
    "holds",
)
