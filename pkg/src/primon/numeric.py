"""
Extended-precision scalars and adaptive quadrature.

``XReal`` is ``mpmath.mpf``: a binary floating value whose mantissa precision
follows the active ``mpmath.mp`` context. Every analytic quantity in the toolkit
is carried as an XReal; ``precision(bits)`` scopes the working precision.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Iterator, Literal, TypeAlias

import mpmath
from mpmath import mp

from .errors import QuadratureError
from .log import get_logger

XReal: TypeAlias = mpmath.mpf

DEFAULT_PRECISION = 128

log = get_logger(__name__)


def xreal(value: object) -> XReal:
    """Convert an int, float, decimal string or mpf to an XReal at current precision."""
    if isinstance(value, mpmath.mpf):
        return +value
    return mp.mpf(value)


@contextmanager
def precision(bits: int) -> Iterator[None]:
    """Scope ``mp.prec`` to ``bits`` for the body of the with-block."""
    with mp.workprec(bits):
        yield


def scratch_context(bits: int) -> mpmath.MPContext:
    """A private mpmath context at ``bits``; its precision never leaks into ``mp``."""
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


def log1m(u: object) -> XReal:
    """ln(1 − u) for u < 1, accurate when u is tiny.

    ``mp.log1p`` raises and restores the shared ``mp.prec`` around its body;
    this form only reads it, so chunk workers may call it concurrently.

    Args:
        u: Value below 1.

    Returns:
        ln(1 − u) rounded at the working precision.
    """
    return mp.log(mp.fsub(1, u, exact=True))


def format_xreal(value: XReal, digits: int = 20) -> str:
    """Decimal string with an explicit number of significant digits."""
    if mpmath.isinf(value):
        return "-inf" if value < 0 else "inf"
    return mpmath.nstr(value, digits, strip_zeros=False)


def ulp(value: XReal) -> XReal:
    """One unit in the last place of ``value`` at the current precision."""
    _, exponent = mpmath.frexp(value if value else mp.one)
    return mpmath.ldexp(mp.one, int(exponent) - mp.prec)


@dataclass(frozen=True)
class QuadratureResult:
    value: XReal
    error: XReal


@dataclass(frozen=True)
class Quadrature:
    """Adaptive quadrature settings.

    The interval is split at powers of two (the integrands here vary on a
    logarithmic scale) and each piece is refined by ``mpmath.quad`` until its
    error estimate is below ``tolerance`` or ``max_degree`` is reached.
    """

    scheme: Literal["tanh-sinh", "gauss-legendre"] = "tanh-sinh"
    tolerance: float = 1e-20
    max_degree: int = 10

    def integrate(self, f: Callable[[XReal], XReal], a: object, b: object) -> QuadratureResult:
        a, b = xreal(a), xreal(b)
        if a == b:
            return QuadratureResult(mp.zero, mp.zero)
        points = geometric_breakpoints(a, b)
        value, error = mp.quad(f, points, method=self.scheme, maxdegree=self.max_degree, error=True)
        if error > self.tolerance:
            log.warning("quadrature.tolerance_missed", a=str(a), b=str(b), error=str(error))
            raise QuadratureError(
                f"error estimate {mpmath.nstr(error, 5)} exceeds tolerance {self.tolerance}",
                error=error,
            )
        return QuadratureResult(value, error)


def geometric_breakpoints(a: XReal, b: XReal) -> list[XReal]:
    """[a, 2^k..., b] with the interior powers of two strictly between a and b."""
    points = [a]
    edge = mp.mpf(2) ** (int(mpmath.floor(mpmath.log(a, 2))) + 1)
    while edge < b:
        if edge > a:
            points.append(edge)
        edge *= 2
    points.append(b)
    return points


_default_quadrature = Quadrature()


def set_quadrature(quadrature: Quadrature) -> None:
    global _default_quadrature
    _default_quadrature = quadrature


def get_quadrature() -> Quadrature:
    return _default_quadrature
