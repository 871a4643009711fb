"""
KMS states of the Bost–Connes system on integers and the primorial criterion.

φ_β(q) = q^{−β} ∏_{p|q} (1 − p^{β−1}) / (1 − p^{−1}) is evaluated in log space
with an explicit sign. On primorials the quantity N_q |φ_β(N_q)| equals
ψ_{β−1}(N_q) / N_q and is read from prefix sums over the prime table, so N_q is
never formed. ``epsilon_beta`` is the margin of

    N_q |φ_β(N_q)| / ln ln N_q  >  e^γ / ζ(β − 1).

Key features:
- Log-space KMS values with an explicit sign and a degenerate β = 1 value
- Exact rational ground state φ_∞(q) = μ(q)/φ(q)
- Truncated partition function and Gibbs expectations
- The published ε_β(q) grid with reference values and the N_q magnitude row
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from mpmath import mp

from .arith import euler_phi, factorize, mobius
from .errors import DomainError
from .numeric import XReal, log1m, xreal
from .primes import PrimeTable, log_primorial, primorial_magnitude
from .specfun import exp_gamma, log1m_prefix, mertens_prefix, zeta_real
from .utils.summation import deterministic_sum


class Regime(str, Enum):
    LOW_TEMPERATURE = "low-temperature"
    HIGH_TEMPERATURE = "high-temperature"


HIGH_TEMPERATURE_NOTE = "high-temperature; criterion not RH-equivalent here"


@dataclass(frozen=True)
class KmsValue:
    q: int
    beta: XReal
    log_abs: XReal
    sign: int
    vanishing: bool = False

    def value(self) -> XReal:
        """φ_β(q) itself; underflows to 0 when log_abs is very negative."""
        if self.sign == 0:
            return mp.zero
        return self.sign * mp.exp(self.log_abs)


@dataclass(frozen=True)
class CriterionRow:
    """One (n, β) evaluation of a primorial criterion; ``holds`` iff ``epsilon > 0``."""

    q: int
    beta: XReal
    p_n: int
    log_N: XReal
    ratio_R: XReal
    threshold: XReal
    epsilon: XReal
    holds: bool
    regime: Regime = Regime.LOW_TEMPERATURE

    @property
    def b(self) -> XReal:
        """The Dedekind exponent b = β − 1."""
        return self.beta - 1


def phi_beta(q: int, beta: object) -> KmsValue:
    """φ_β(q) in log space, sign (−1)^{ω(q)} for β > 1.

    At β = 1 every factor 1 − p^0 vanishes; the result is the documented
    degenerate value (sign 0, log_abs = −inf, ``vanishing`` set).

    Args:
        q: Integer q >= 2.
        beta: Inverse temperature β >= 1.

    Returns:
        A :class:`KmsValue` carrying ln|φ_β(q)| and the sign.

    Raises:
        DomainError: q < 2 or β < 1.
    """
    beta = xreal(beta)
    if q < 2:
        raise DomainError(f"φ_β(q) is evaluated for q >= 2, got q={q}")
    if beta < 1:
        raise DomainError(f"β must be >= 1 (β <= 1 is not given by this formula), got β={beta}")
    if beta == 1:
        return KmsValue(q=q, beta=beta, log_abs=mp.ninf, sign=0, vanishing=True)
    primes = factorize(q).primes
    log_abs = -beta * mp.log(q)
    for p in primes:
        log_p = mp.log(p)
        # ln|1 − p^{β−1}| = (β − 1) ln p + ln(1 − p^{1−β})
        log_abs += (beta - 1) * log_p + log1m(mp.exp((1 - beta) * log_p))
        log_abs -= log1m(mp.one / p)
    sign = -1 if len(primes) % 2 else 1
    return KmsValue(q=q, beta=beta, log_abs=log_abs, sign=sign)


def phi_infinity(q: int) -> Fraction:
    """φ_∞(q) = μ(q) / φ(q), exactly."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got q={q}")
    return Fraction(mobius(q), euler_phi(q))


def log_psi_ratio(q_index: int, b: XReal, table: PrimeTable) -> XReal:
    """ln(ψ_b(N_q) / N_q) = Σ_{p<=p_q} [ln(1 − p^{−b}) − ln(1 − 1/p)]."""
    if b <= 0:
        raise DomainError(f"b must be > 0, got b={b}")
    if q_index < 1:
        raise DomainError(f"primorial index must be >= 1, got {q_index}")
    table.require_index(q_index)
    return log1m_prefix(table, b)[q_index - 1] + mertens_prefix(table)[q_index - 1]


def kms_primorial_ratio(q_index: int, beta: object, table: PrimeTable) -> XReal:
    """N_q |φ_β(N_q)| = ψ_{β−1}(N_q) / N_q over the first ``q_index`` primes."""
    beta = xreal(beta)
    if beta <= 1:
        raise DomainError(f"β − 1 must be > 0, got β={beta}")
    return mp.exp(log_psi_ratio(q_index, beta - 1, table))


def regime_of(beta: XReal) -> Regime:
    """Low temperature for β > 2, where the criterion is RH-equivalent."""
    return Regime.LOW_TEMPERATURE if beta > 2 else Regime.HIGH_TEMPERATURE


def criterion_threshold(b: XReal) -> XReal:
    """e^γ / ζ(b); the divergent ζ(b) for b <= 1 sends the threshold to 0."""
    if b <= 1:
        return mp.zero
    return exp_gamma() / zeta_real(b)


def log_log_primorial(q_index: int, table: PrimeTable) -> XReal:
    """ln ln N_q = ln θ(p_q)."""
    if q_index < 2:
        raise DomainError(f"log log N_q is not positive for q < 2 (got q={q_index})")
    return mp.log(log_primorial(q_index, table))


def epsilon_beta(q_index: int, beta: object, table: PrimeTable) -> CriterionRow:
    """
    ε_β(q) = N_q |φ_β(N_q)| / ln θ(p_q) − e^γ / ζ(β − 1).

    For 1 < β <= 2 the threshold is 0 and the row is tagged high-temperature.

    Args:
        q_index: Primorial index q >= 2.
        beta: Inverse temperature β > 1.
        table: Prime table holding at least ``q_index`` primes.

    Returns:
        A :class:`CriterionRow`; ``holds`` is ε > 0.

    Raises:
        DomainError: β <= 1 or q < 2.
        ResourceLimitError: The table is too short.
    """
    beta = xreal(beta)
    if beta <= 1:
        raise DomainError(f"β must be > 1, got β={beta}")
    lnln = log_log_primorial(q_index, table)
    ratio = kms_primorial_ratio(q_index, beta, table) / lnln
    threshold = criterion_threshold(beta - 1)
    epsilon = ratio - threshold
    return CriterionRow(
        q=q_index,
        beta=beta,
        p_n=int(table.primes[q_index - 1]),
        log_N=log_primorial(q_index, table),
        ratio_R=ratio,
        threshold=threshold,
        epsilon=epsilon,
        holds=bool(epsilon > 0),
        regime=regime_of(beta),
    )


def partition_truncated(beta: object, N: int) -> XReal:
    """ζ_N(β) = Σ_{n<=N} n^{−β}, the trace of exp(−βH_0) on |1⟩..|N⟩."""
    beta = xreal(beta)
    if beta <= 1:
        raise DomainError(f"β must be > 1, got β={beta}")
    if N < 1:
        raise DomainError(f"N must be >= 1, got N={N}")
    return deterministic_sum(lambda n: mp.power(n, -beta), range(1, N + 1))


def gibbs_expectation(diag: Sequence[object], beta: object) -> XReal:
    """Σ m_n n^{−β} / Σ n^{−β} for a diagonal observable m_1..m_N."""
    beta = xreal(beta)
    if beta <= 1:
        raise DomainError(f"β must be > 1, got β={beta}")
    if not diag:
        raise DomainError("observable must have at least one diagonal entry")
    weights = [mp.power(n, -beta) for n in range(1, len(diag) + 1)]
    numerator = deterministic_sum(lambda i: xreal(diag[i]) * weights[i], range(len(diag)))
    return numerator / deterministic_sum(lambda w: w, weights)


# -- reference grid -------------------------------------------------------------

TABLE1_BETAS = (2.1, 3, 10)
TABLE1_QS = (10, 100, 1000, 10000)

REFERENCE_EPSILON: dict[tuple[float, int], float] = {
    (2.1, 10): 0.25,
    (2.1, 100): 0.093,
    (2.1, 1000): 0.051,
    (2.1, 10000): 0.031,
    (3, 10): 0.16,
    (3, 100): 0.018,
    (3, 1000): 3.0e-3,
    (3, 10000): 6.1e-4,
    (10, 10): 0.25,
    (10, 100): 0.028,
    (10, 1000): 4.9e-3,
    (10, 10000): 1.0e-3,
}

REFERENCE_MAGNITUDE: dict[int, tuple[float, int]] = {
    10: (6.4, 10),
    100: (4.7, 219),
    1000: (6.7, 3392),
    10000: (9.1, 45336),
}

# published two-figure values agree within this relative distance
EPSILON_AGREEMENT = 0.05


@dataclass(frozen=True)
class Table1Cell:
    beta: float
    q: int
    row: CriterionRow
    reference: Optional[float] = None

    @property
    def agrees(self) -> Optional[bool]:
        """Within EPSILON_AGREEMENT of the reference, or None without one."""
        if self.reference is None:
            return None
        return bool(abs(self.row.epsilon - self.reference) <= EPSILON_AGREEMENT * self.reference)


@dataclass(frozen=True)
class MagnitudeCell:
    """N_q = mantissa × 10^exponent, against the published one-decimal mantissa."""

    q: int
    mantissa: XReal
    exponent: int
    reference: Optional[tuple[float, int]] = None

    @property
    def agrees(self) -> Optional[bool]:
        """Same exponent and mantissa within 0.1, or None without a reference."""
        if self.reference is None:
            return None
        ref_mantissa, ref_exponent = self.reference
        # the published mantissas are truncated or rounded to one decimal
        return self.exponent == ref_exponent and abs(self.mantissa - ref_mantissa) < 0.1

    @property
    def suspected_typo(self) -> bool:
        """The reference exists and does not match the computed magnitude."""
        return self.agrees is False


@dataclass(frozen=True)
class Table1Report:
    cells: list[Table1Cell]
    magnitudes: list[MagnitudeCell]
    notes: list[str] = field(default_factory=list)

    @property
    def all_positive(self) -> bool:
        """Every ε_β(q) in the grid is positive."""
        return all(cell.row.holds for cell in self.cells)

    @property
    def all_agree(self) -> bool:
        """No cell disagrees with its reference value."""
        return all(cell.agrees is not False for cell in self.cells)


def table1(
    table: PrimeTable,
    betas: Sequence[object] = TABLE1_BETAS,
    qs: Sequence[int] = TABLE1_QS,
) -> Table1Report:
    """ε_β(q) over the β × q grid plus the N_q magnitude row."""
    cells = []
    for beta in betas:
        for q in qs:
            cells.append(
                Table1Cell(
                    beta=float(beta),
                    q=q,
                    row=epsilon_beta(q, xreal(str(beta)), table),
                    reference=REFERENCE_EPSILON.get((float(beta), q)),
                )
            )
    magnitudes = []
    notes = []
    for q in qs:
        mantissa, exponent = primorial_magnitude(q, table)
        cell = MagnitudeCell(
            q=q, mantissa=mantissa, exponent=exponent, reference=REFERENCE_MAGNITUDE.get(q)
        )
        if cell.suspected_typo:
            ref_mantissa, ref_exponent = cell.reference
            notes.append(
                f"N_{q}: published {ref_mantissa}e{ref_exponent}, computed "
                f"{mp.nstr(mantissa, 3)}e{exponent}; suspected typo in the published value"
            )
        magnitudes.append(cell)
    for cell in cells:
        if cell.row.regime is Regime.HIGH_TEMPERATURE:
            notes.append(f"β={cell.beta}: {HIGH_TEMPERATURE_NOTE}")
            break
    return Table1Report(cells=cells, magnitudes=magnitudes, notes=notes)
