"""
Structured logging for primon.

Log events go to stderr so that reports written to stdout stay
byte-identical between runs.
"""

from __future__ import annotations

import logging
import sys

import structlog

_configured = False


def _stderr_logger(*args: object) -> structlog.PrintLogger:
    # resolved per call: sys.stderr may be swapped after configuration
    return structlog.PrintLogger(file=sys.stderr)


def configure_logging(level: str = "WARNING", json: bool = False) -> None:
    """Configure structlog once per process (later calls re-apply the level)."""
    global _configured

    renderer = (
        structlog.processors.JSONRenderer(sort_keys=True)
        if json
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelName(level.upper())
        ),
        logger_factory=_stderr_logger,
        cache_logger_on_first_use=False,
    )
    _configured = True


def get_logger(name: str) -> structlog.typing.FilteringBoundLogger:
    if not _configured:
        configure_logging()
    return structlog.get_logger(name)
