"""
Exception hierarchy for primon.

Library code raises these and never exits; the CLI maps every ``PrimonError``
to exit code 2. Criterion failures are reported as data, not raised.
"""

from __future__ import annotations

from typing import Any


class PrimonError(Exception):
    """Base class for all toolkit errors."""


class DomainError(PrimonError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ResourceLimitError(PrimonError):
    """A configured cap or an available table is too small for the request.

    ``best`` carries the best value reached before giving up (for example the
    tail radius achieved with the primes at hand).
    """

    def __init__(self, message: str, *, best: Any | None = None) -> None:
        super().__init__(message)
        self.best = best


class CacheFormatError(PrimonError):
    """A prime-table cache file is truncated, corrupt or of another format."""


class QuadratureError(PrimonError):
    """Adaptive quadrature could not reach the requested tolerance."""

    def __init__(self, message: str, *, error: Any | None = None) -> None:
        super().__init__(message)
        self.error = error
