"""
Primorial criterion scans and asymptotic diagnostics.

Every scan works on primorial indices n and reads ln N_n = θ(p_n) and the
prime products from the table's prefix sums; ln ln N_n is always ln θ(p_n).
Criterion failures are data: they land in :class:`ScanResult` and are logged,
never raised.

Key features:
- Nicolas, ψ_b-ratio and lower-bound scans fanned out over the worker pool
- Shared prefixes and constants built before the fan-out, read-only in workers
- The n² > φ(n)ψ_b(n) >= n²/ζ(b) sandwich over every n up to a bound
- Drift and stabilization reports for the high-temperature diagnostics
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

from mpmath import mp

from .arith import smallest_factor_table
from .errors import DomainError
from .kms import CriterionRow, criterion_threshold, log_log_primorial, log_psi_ratio
from .log import get_logger
from .numeric import XReal, log1m, xreal
from .primes import PrimeTable, log_primorial
from .specfun import (
    I_b,
    J_b_closed,
    Method,
    bertrand_B,
    cb_prefix,
    exp_gamma,
    li_offset,
    log1m_prefix,
    mertens_prefix,
    neg_power,
    prime_sum_S,
    rh_error_integral,
    zeta_real,
)
from .utils.summation import ordered_flat_map

log = get_logger(__name__)

DEFAULT_CHECKPOINTS = (10, 100, 1000, 10000)

LOG2_READINGS = (
    "log₂ read as the iterated logarithm ln ln N_n (as in the Nicolas inequality)",
    "alternative reading with an extra factor N_n in the Nicolas step is not used",
)


class Trend(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    MIXED = "mixed"


@dataclass(frozen=True)
class AsymptoticsReport:
    """Samples (n or x, value) of a diagnostic with drift = max − min over the samples."""

    b: XReal
    samples: list[tuple[int, XReal]]
    drift: XReal
    trend: Trend
    scale: list[XReal] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @classmethod
    def from_samples(
        cls,
        b: XReal,
        samples: Sequence[tuple[int, XReal]],
        *,
        scale: Sequence[XReal] = (),
        notes: Sequence[str] = (),
    ) -> "AsymptoticsReport":
        """Build a report, classifying the trend from consecutive differences."""
        samples = list(samples)
        if any(later[0] <= earlier[0] for earlier, later in zip(samples, samples[1:])):
            raise DomainError("sample coordinates must be strictly increasing")
        values = [v for _, v in samples]
        drift = max(values) - min(values) if values else mp.zero
        steps = [later - earlier for earlier, later in zip(values, values[1:])]
        if steps and all(s > 0 for s in steps):
            trend = Trend.INCREASING
        elif steps and all(s < 0 for s in steps):
            trend = Trend.DECREASING
        else:
            trend = Trend.MIXED
        return cls(
            b=b, samples=samples, drift=drift, trend=trend, scale=list(scale), notes=list(notes)
        )

    @property
    def last(self) -> XReal:
        """Value at the last sample."""
        return self.samples[-1][1]

    @property
    def relative_change(self) -> XReal:
        """|v_last − v_prev| / |v_last| over the final two samples (0 for one sample)."""
        if len(self.samples) < 2:
            return mp.zero
        prev, last = self.samples[-2][1], self.samples[-1][1]
        return abs(last - prev) / abs(last)


@dataclass(frozen=True)
class ScanResult:
    """Rows of a criterion scan in index order; failures are data, not errors."""

    rows: list[CriterionRow]
    first_failure: Optional[int] = None
    notes: list[str] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        """No row failed."""
        return self.first_failure is None

    @classmethod
    def from_rows(cls, rows: list[CriterionRow], notes: Sequence[str] = ()) -> "ScanResult":
        """Record the first failing index and log every failure."""
        first = None
        for row in rows:
            if not row.holds:
                log.warning("scan.failure", q=row.q, margin=mp.nstr(row.epsilon, 8))
                if first is None:
                    first = row.q
        return cls(rows=rows, first_failure=first, notes=list(notes))


def _require_b_above_one(b: XReal) -> None:
    if b <= 1:
        raise DomainError(f"b must be > 1 in the low-temperature regime, got b={b}")


def _require_high_temperature(b: XReal) -> None:
    if not 0.5 < b < 1:
        raise DomainError(f"b must satisfy 0.5 < b < 1, got b={b}")


def _row(q: int, beta: XReal, ratio: XReal, threshold: XReal, table: PrimeTable) -> CriterionRow:
    epsilon = ratio - threshold
    return CriterionRow(
        q=q,
        beta=beta,
        p_n=int(table.primes[q - 1]),
        log_N=log_primorial(q, table),
        ratio_R=ratio,
        threshold=threshold,
        epsilon=epsilon,
        holds=bool(epsilon > 0),
    )


# -- Nicolas -------------------------------------------------------------------


def _nicolas_row(
    q_index: int, mertens: Sequence[XReal], threshold: XReal, table: PrimeTable
) -> CriterionRow:
    ratio = mp.exp(mertens[q_index - 1]) / log_log_primorial(q_index, table)
    return _row(q_index, mp.inf, ratio, threshold, table)


def nicolas_check(q_index: int, table: PrimeTable) -> CriterionRow:
    """Check the Nicolas inequality at one primorial (the β = ∞ row of the criterion).

    Args:
        q_index: Primorial index q >= 2.
        table: Prime table holding at least ``q_index`` primes.

    Returns:
        Row with ratio N_q/φ(N_q) / ln ln N_q and threshold e^γ.
    """
    table.require_index(q_index)
    return _nicolas_row(q_index, mertens_prefix(table), exp_gamma(), table)


def nicolas_scan(q_max: int, table: PrimeTable) -> ScanResult:
    """Nicolas rows for q = 2..q_max.

    The Mertens prefix and e^γ are computed here, before the chunk workers
    start; workers only read them.

    Args:
        q_max: Last primorial index, at least 2.
        table: Prime table holding at least ``q_max`` primes.

    Returns:
        A :class:`ScanResult`; a failure would be the first counterexample.

    Raises:
        DomainError: q_max < 2.
        ResourceLimitError: The table is too short.
    """
    if q_max < 2:
        raise DomainError(f"q_max must be >= 2, got {q_max}")
    table.require_index(q_max)
    mertens = mertens_prefix(table)
    threshold = exp_gamma()
    rows = ordered_flat_map(
        lambda q: _nicolas_row(q, mertens, threshold, table), range(2, q_max + 1)
    )
    return ScanResult.from_rows(rows)


# -- ψ_b ratio at primorials --------------------------------------------------


def _psi_log_ratios(b: XReal, table: PrimeTable) -> list[XReal]:
    """ln(ψ_b(N_k)/N_k) for every k in the table, built on the calling thread."""
    return [a + m for a, m in zip(log1m_prefix(table, b), mertens_prefix(table))]


def ratio_R(q_index: int, b: object, table: PrimeTable) -> XReal:
    """R_b(N_q) = ψ_b(N_q) / (N_q ln ln N_q), evaluated in log space.

    Args:
        q_index: Primorial index q >= 2.
        b: Exponent b > 0.
        table: Prime table holding at least ``q_index`` primes.

    Returns:
        The ratio as an XReal.
    """
    b = xreal(b)
    lnln = log_log_primorial(q_index, table)
    return mp.exp(log_psi_ratio(q_index, b, table)) / lnln


def conjecture_row(q_index: int, b: object, table: PrimeTable) -> CriterionRow:
    """R_b(N_q) against e^γ/ζ(b) at a single primorial, b > 1."""
    b = xreal(b)
    _require_b_above_one(b)
    return _row(q_index, b + 1, ratio_R(q_index, b, table), criterion_threshold(b), table)


def conjecture_scan(b: object, q_max: int, table: PrimeTable) -> ScanResult:
    """Check R_b(N_n) > e^γ/ζ(b) for n = 3..q_max.

    Args:
        b: Exponent b > 1.
        q_max: Last primorial index, at least 3.
        table: Prime table holding at least ``q_max`` primes.

    Returns:
        A :class:`ScanResult` with one row per index and the first failure.

    Raises:
        DomainError: b <= 1 or q_max < 3.
        ResourceLimitError: The table is too short.
    """
    b = xreal(b)
    _require_b_above_one(b)
    if q_max < 3:
        raise DomainError(f"q_max must be >= 3, got {q_max}")
    table.require_index(q_max)
    log_ratios = _psi_log_ratios(b, table)
    threshold = criterion_threshold(b)

    def row(q: int) -> CriterionRow:
        ratio = mp.exp(log_ratios[q - 1]) / log_log_primorial(q, table)
        return _row(q, b + 1, ratio, threshold, table)

    rows = ordered_flat_map(row, range(3, q_max + 1))
    return ScanResult.from_rows(rows)


def prop1_convergence(
    b: object, checkpoints: Iterable[int], table: PrimeTable
) -> AsymptoticsReport:
    """R_b(N_n) ζ(b) / e^γ at each checkpoint; tends to 1 from above."""
    b = xreal(b)
    _require_b_above_one(b)
    scale = zeta_real(b) / exp_gamma()
    samples = [(n, ratio_R(n, b, table) * scale) for n in checkpoints]
    return AsymptoticsReport.from_samples(b, samples)


def _count_upto(x: int, table: PrimeTable) -> int:
    if x < 2:
        raise DomainError(f"x must be >= 2, got x={x}")
    return table.index_upto(x)


def g_function(x: int, b: object, table: PrimeTable) -> XReal:
    """g(x) = e^γ/ζ(b) · ln θ(x) · ∏_{p<=x}(1 − 1/p) / ∏_{p<=x}(1 − p^{−b})."""
    b = xreal(b)
    _require_b_above_one(b)
    k = _count_upto(x, table)
    log_ratio = log1m_prefix(table, b)[k - 1] + mertens_prefix(table)[k - 1]
    return criterion_threshold(b) * mp.log(table.theta_prefix[k - 1]) * mp.exp(-log_ratio)


def f_function(x: int, table: PrimeTable) -> XReal:
    """f(x) = e^γ ln θ(x) ∏_{p<=x}(1 − 1/p); f(p_n) < 1 is the Nicolas inequality at n."""
    k = _count_upto(x, table)
    return exp_gamma() * mp.log(table.theta_prefix[k - 1]) * mp.exp(-mertens_prefix(table)[k - 1])


@dataclass(frozen=True)
class SandwichReport:
    """n² > φ(n)ψ_b(n) >= n²/ζ(b) checked as −ln ζ(b) <= Σ_{p|n} ln(1 − p^{−b}) < 0."""

    b: XReal
    n_max: int
    checked: int
    violations: list[int]
    max_log_product: XReal
    min_log_product: XReal
    log_zeta: XReal

    @property
    def holds(self) -> bool:
        """No n violated the sandwich."""
        return not self.violations


def sandwich_scan(b: object, n_max: int) -> SandwichReport:
    """
    Check n² > φ(n)ψ_b(n) >= n²/ζ(b) for every 2 <= n <= ``n_max``.

    The quantity φ(n)ψ_b(n)/n² = ∏_{p|n} (1 − p^{−b}) is summed in log form
    over a smallest-prime-factor table, one cached term per prime.

    Args:
        b: Exponent b > 1.
        n_max: Last n checked, at least 2.

    Returns:
        A :class:`SandwichReport` listing any violating n.

    Raises:
        DomainError: b <= 1 or n_max < 2.
    """
    b = xreal(b)
    _require_b_above_one(b)
    if n_max < 2:
        raise DomainError(f"n_max must be >= 2, got {n_max}")
    spf = smallest_factor_table(n_max)
    log_zeta = mp.log(zeta_real(b))
    term_cache: dict[int, XReal] = {}
    violations: list[int] = []
    highest, lowest = mp.ninf, mp.inf
    for n in range(2, n_max + 1):
        total = mp.zero
        m = n
        while m > 1:
            p = int(spf[m])
            while m % p == 0:
                m //= p
            term = term_cache.get(p)
            if term is None:
                term = term_cache[p] = log1m(mp.power(p, -b))
            total += term
        highest = max(highest, total)
        lowest = min(lowest, total)
        if not (-log_zeta <= total < 0):
            violations.append(n)
            log.warning("sandwich.violation", n=n, b=str(b))
    return SandwichReport(
        b=b,
        n_max=n_max,
        checked=n_max - 1,
        violations=violations,
        max_log_product=highest,
        min_log_product=lowest,
        log_zeta=log_zeta,
    )


# -- high-temperature diagnostics ----------------------------------------------


def sum_vs_integral_report(
    b: object, checkpoints: Iterable[int], table: PrimeTable, *, method: Method = "ei"
) -> AsymptoticsReport:
    """D(x) = S_b(x) − B_b(x); bounded in x when RH holds."""
    b = xreal(b)
    _require_high_temperature(b)
    samples = [
        (x, prime_sum_S(b, x, table) - bertrand_B(b, x, method=method)) for x in checkpoints
    ]
    return AsymptoticsReport.from_samples(b, samples)


def li_integral_report(
    b: object, checkpoints: Iterable[int], table: PrimeTable, *, method: Method = "quad"
) -> AsymptoticsReport:
    """S_b(x) − Li(x)/x^b − b·I_b(x); bounded under RH."""
    b = xreal(b)
    _require_high_temperature(b)
    samples = []
    for x in checkpoints:
        li = li_offset(x, method="ei")
        value = prime_sum_S(b, x, table) - li * neg_power(x, b) - b * I_b(b, x, method=method)
        samples.append((x, value))
    return AsymptoticsReport.from_samples(b, samples)


def integral_gap_report(
    b: object, checkpoints: Iterable[int], table: PrimeTable
) -> AsymptoticsReport:
    """J_b(x) − I_b(x), with ∫_2^x ln t · t^{−b−1/2} dt as the per-sample RH scale."""
    b = xreal(b)
    _require_high_temperature(b)
    checkpoints = list(checkpoints)
    samples = [(x, J_b_closed(b, x, table) - I_b(b, x, method="ei")) for x in checkpoints]
    scale = [rh_error_integral(b, x) for x in checkpoints]
    return AsymptoticsReport.from_samples(b, samples, scale=scale)


def _log_rho(n: int, b: XReal, table: PrimeTable) -> XReal:
    p_n = int(table.primes[n - 1])
    return log_psi_ratio(n, b, table) + bertrand_B(b, p_n, method="ei") - mp.log(mp.log(p_n))


def k_b_ratio(n: int, b: object, table: PrimeTable) -> XReal:
    """ρ(n) = [ψ_b(N_n)/N_n] / [ln p_n · exp(−B_b(p_n))]."""
    b = xreal(b)
    _require_high_temperature(b)
    return mp.exp(_log_rho(n, b, table))


def k_b_estimate(
    b: object, n_checkpoints: Iterable[int], table: PrimeTable
) -> AsymptoticsReport:
    """
    Sample ρ(n) at each checkpoint.

    The last sample estimates K_b and ``relative_change`` measures its
    stability over the final pair.

    Args:
        b: Exponent with 0.5 < b < 1.
        n_checkpoints: Increasing primorial indices.
        table: Prime table holding the largest checkpoint.

    Returns:
        An :class:`AsymptoticsReport` over the checkpoints.
    """
    b = xreal(b)
    _require_high_temperature(b)
    samples = [(n, k_b_ratio(n, b, table)) for n in n_checkpoints]
    return AsymptoticsReport.from_samples(
        b, samples, notes=["ψ_b(N_n) normalized by N_n; K_b is an empirical estimate"]
    )


@dataclass(frozen=True)
class KbDecomposition:
    """ρ(n) = euler · integral · mertens · e^γ."""

    n: int
    euler: XReal
    integral: XReal
    mertens: XReal
    exp_gamma: XReal
    rho: XReal

    @property
    def product(self) -> XReal:
        """The four factors multiplied back; equals ``rho`` up to rounding."""
        return self.euler * self.integral * self.mertens * self.exp_gamma


def k_b_decomposition(b: object, n: int, table: PrimeTable) -> KbDecomposition:
    """Split ρ(n) into the C_b partial product, exp(B_b − S_b), the Mertens ratio and e^γ."""
    b = xreal(b)
    _require_high_temperature(b)
    table.require_index(n)
    p_n = int(table.primes[n - 1])
    e_gamma = exp_gamma()
    log_p = mp.log(p_n)
    return KbDecomposition(
        n=n,
        euler=mp.exp(cb_prefix(table, b)[n - 1]),
        integral=mp.exp(bertrand_B(b, p_n, method="ei") - prime_sum_S(b, p_n, table)),
        mertens=mp.exp(mertens_prefix(table)[n - 1]) / (e_gamma * log_p),
        exp_gamma=e_gamma,
        rho=k_b_ratio(n, b, table),
    )


def lower_bound_check(
    b: object,
    epsilon: object,
    n_range: Iterable[int],
    table: PrimeTable,
    *,
    k_hat: object | None = None,
    min_n: int = 1000,
) -> ScanResult:
    """ψ_b(N_n)/N_n > K̂_b (1 − ε) ln ln N_n exp(−B_b(p_n)) for each n >= ``min_n``.

    K̂_b is the limit of ρ(n), which already carries the e^γ of the Mertens
    step; without ``k_hat`` it is estimated as ρ at the largest n in range.
    Rows report ratio = ψ_b(N_n)/N_n / (ln ln N_n exp(−B_b(p_n))) against
    threshold K̂_b (1 − ε).

    Args:
        b: Exponent with 0.5 < b < 1.
        epsilon: Slack with 0 < ε < 1.
        n_range: Primorial indices to check; indices below ``min_n`` are
            reported in the notes and left out of the verdict.
        table: Prime table holding the largest index.
        k_hat: Injected K̂_b; estimated when None.
        min_n: Smallest index that counts.

    Returns:
        A :class:`ScanResult` whose notes name the source of K̂_b.

    Raises:
        DomainError: b or ε out of range, or ``n_range`` is empty.
        ResourceLimitError: The table is too short.
    """
    b = xreal(b)
    epsilon = xreal(epsilon)
    _require_high_temperature(b)
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must satisfy 0 < ε < 1, got {epsilon}")
    ns = sorted(set(n_range))
    if not ns:
        raise DomainError("n_range is empty")
    included = [n for n in ns if n >= max(min_n, 2)]
    skipped = len(ns) - len(included)
    if k_hat is None:
        k_hat = k_b_ratio(ns[-1], b, table)
        source = f"K̂_b estimated as ρ({ns[-1]}) = {mp.nstr(k_hat, 10)}"
    else:
        k_hat = xreal(k_hat)
        source = f"K̂_b injected = {mp.nstr(k_hat, 10)}"
    threshold = k_hat * (1 - epsilon)
    log_ratios = _psi_log_ratios(b, table)

    def row(n: int) -> CriterionRow:
        p_n = int(table.primes[n - 1])
        log_ratio = (
            log_ratios[n - 1]
            + bertrand_B(b, p_n, method="ei")
            - mp.log(log_log_primorial(n, table))
        )
        return _row(n, b + 1, mp.exp(log_ratio), threshold, table)

    if included:
        table.require_index(included[-1])
    rows = ordered_flat_map(row, included)
    notes = [source, *LOG2_READINGS]
    if skipped:
        notes.append(f"{skipped} rows below n={min_n} excluded from the verdict")
    return ScanResult.from_rows(rows, notes=notes)
