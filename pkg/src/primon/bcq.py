"""
Toy-scale operator checks for the Bost–Connes construction.

Dense complex128 matrices only: the modular multiplication permutations U_a on
Z/q, their Fourier eigenvectors, the phase operators e_δ, the Hamiltonian
H_0|n⟩ = ln n |n⟩ on |1⟩..|N⟩ and the covariance σ_t(μ_a) = a^{it} μ_a of the
isometry μ_a|n⟩ = |an⟩.

Key features:
- Permutation and diagonal operators validated on construction
- Exact comparisons for permutation identities, tolerance checks for spectra
- Time-evolution checks for μ_a and both readings of the phase operator
- One :class:`QuantumReport` per unit with every check folded into ``holds``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from .arith import carmichael_lambda, euler_phi, multiplicative_order, orbit
from .errors import DomainError

MAX_DIMENSION = 4096
TIP = 2j * np.pi
RESIDUAL_TOLERANCE = 1e-12


class OperatorTag(str, Enum):
    PERMUTATION = "permutation"
    DIAGONAL = "diagonal"
    GENERAL = "general"


class PhaseMode(str, Enum):
    AS_PRINTED = "as-printed"
    CLOCK = "clock"


@dataclass(frozen=True)
class StateVector:
    """Amplitudes over basis labels; ``norm`` is cached at construction."""

    labels: tuple[int, ...]
    amplitudes: np.ndarray
    norm: float

    @classmethod
    def from_amplitudes(cls, labels: Iterable[int], amplitudes: np.ndarray) -> "StateVector":
        """Freeze ``amplitudes`` as complex128 and record their 2-norm."""
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        amplitudes.setflags(write=False)
        return cls(tuple(labels), amplitudes, float(np.linalg.norm(amplitudes)))

    @property
    def dimension(self) -> int:
        """Number of basis labels."""
        return len(self.labels)

    def inner(self, other: "StateVector") -> complex:
        """⟨self|other⟩."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class LinearOperator:
    """Dense square matrix; PERMUTATION and DIAGONAL tags are checked on construction."""

    matrix: np.ndarray
    tag: OperatorTag = OperatorTag.GENERAL
    labels: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"operator matrix must be square, got shape {m.shape}")
        if self.tag is OperatorTag.PERMUTATION:
            ones = m == 1
            if not (
                np.count_nonzero(m) == m.shape[0]
                and ones.sum(axis=0).tolist() == [1] * m.shape[0]
                and ones.sum(axis=1).tolist() == [1] * m.shape[0]
            ):
                raise DomainError("permutation operator needs one unit entry per row and column")
        elif self.tag is OperatorTag.DIAGONAL:
            if np.count_nonzero(m - np.diag(np.diag(m))):
                raise DomainError("diagonal operator has off-diagonal entries")
        m.setflags(write=False)

    @property
    def dimension(self) -> int:
        """Side length of the matrix."""
        return int(self.matrix.shape[0])

    def apply(self, state: StateVector) -> StateVector:
        """The state with amplitudes ``matrix @ state.amplitudes``."""
        return StateVector.from_amplitudes(state.labels, self.matrix @ state.amplitudes)

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.matrix @ other.matrix, labels=self.labels)


def _check_modulus(q: int) -> None:
    if not 2 <= q <= MAX_DIMENSION:
        raise DomainError(f"q must satisfy 2 <= q <= {MAX_DIMENSION}, got {q}")


def build_Ua(a: int, q: int) -> LinearOperator:
    """U_a|n⟩ = |an mod q⟩ on the residues 0..q−1."""
    _check_modulus(q)
    if math.gcd(a, q) != 1:
        raise DomainError(f"not unitary: {a} has no inverse mod {q}")
    n = np.arange(q)
    matrix = np.zeros((q, q), dtype=np.complex128)
    matrix[(a * n) % q, n] = 1
    return LinearOperator(matrix, OperatorTag.PERMUTATION, tuple(range(q)))


def is_unitary(op: LinearOperator) -> bool:
    """U†U = I, compared exactly (permutation entries are 0 and 1)."""
    return bool(np.array_equal(op.matrix.conj().T @ op.matrix, np.eye(op.dimension)))


def fourier_eigenvector(a: int, q: int, k: int, j0: int = 1) -> StateVector:
    """|u_k⟩ = r^{−1/2} Σ_j exp(−2πikj/r) |a^j j0 mod q⟩, eigenvalue exp(2πik/r)."""
    _check_modulus(q)
    if math.gcd(j0, q) != 1:
        raise DomainError(f"orbit representative {j0} must be a unit mod {q}")
    r = multiplicative_order(a, q)
    if not 0 <= k < r:
        raise DomainError(f"k must satisfy 0 <= k < r = {r}, got {k}")
    amplitudes = np.zeros(q, dtype=np.complex128)
    for j, residue in enumerate(orbit(a, q, j0)):
        amplitudes[residue] = np.exp(-TIP * k * j / r) / math.sqrt(r)
    return StateVector.from_amplitudes(range(q), amplitudes)


def eigen_residual(a: int, q: int, k: int, j0: int = 1) -> float:
    """‖U_a|u_k⟩ − e^{2πik/r}|u_k⟩‖."""
    r = multiplicative_order(a, q)
    u = fourier_eigenvector(a, q, k, j0)
    image = build_Ua(a, q).apply(u)
    return float(np.linalg.norm(image.amplitudes - np.exp(TIP * k / r) * u.amplitudes))


def orbit_spectrum(a: int, q: int) -> np.ndarray:
    """Eigenvalues of U_a restricted to the orbit of 1, sorted by angle in [0, 2π)."""
    labels = orbit(a, q)
    u = build_Ua(a, q).matrix
    block = u[np.ix_(labels, labels)]
    values = np.linalg.eigvals(block)
    # nudge so eigenvalues at angle 0 computed as -1e-16 sort first
    angles = np.mod(np.angle(values) + 1e-9, 2 * np.pi)
    return values[np.argsort(angles)]


def roots_of_unity(r: int) -> np.ndarray:
    """exp(2πik/r) for k = 0..r−1."""
    return np.exp(TIP * np.arange(r) / r)


def build_phase_operator(
    delta_num: int, delta_den: int, d: int, mode: PhaseMode = PhaseMode.AS_PRINTED
) -> LinearOperator:
    """e_δ for δ = delta_num/delta_den on dimension d.

    AS_PRINTED is the scalar exp(2πiδ)·I; CLOCK is diag(exp(2πinδ)), n = 0..d−1.
    """
    if delta_den < 1 or not 0 <= delta_num < delta_den:
        raise DomainError(f"need 0 <= num < den, got {delta_num}/{delta_den}")
    if not 1 <= d <= MAX_DIMENSION:
        raise DomainError(f"dimension must satisfy 1 <= d <= {MAX_DIMENSION}, got {d}")
    if mode is PhaseMode.CLOCK:
        phases = np.array(
            [_root(n * delta_num, delta_den) for n in range(d)], dtype=np.complex128
        )
    else:
        phases = np.full(d, _root(delta_num, delta_den), dtype=np.complex128)
    return LinearOperator(np.diag(phases), OperatorTag.DIAGONAL, tuple(range(d)))


def _root(num: int, den: int) -> complex:
    """exp(2πi num/den), exact on the axes."""
    num %= den
    if (4 * num) % den == 0:
        return (1, 1j, -1, -1j)[4 * num // den]
    return complex(np.exp(TIP * num / den))


def build_H0(N: int) -> LinearOperator:
    """H_0 = diag(ln 1, ..., ln N)."""
    if not 1 <= N <= MAX_DIMENSION:
        raise DomainError(f"N must satisfy 1 <= N <= {MAX_DIMENSION}, got {N}")
    return LinearOperator(
        np.diag(np.log(np.arange(1, N + 1)).astype(np.complex128)),
        OperatorTag.DIAGONAL,
        tuple(range(1, N + 1)),
    )


def boltzmann(beta: float, N: int) -> np.ndarray:
    """exp(−βH_0) on the truncated space, as a dense matrix."""
    h = np.real(np.diag(build_H0(N).matrix))
    return np.diag(np.exp(-beta * h))


def build_mu(a: int, N: int) -> LinearOperator:
    """The isometry μ_a|n⟩ = |an⟩ on |1⟩..|N⟩, with columns n > N/a left zero."""
    if a < 1:
        raise DomainError(f"a must be >= 1, got {a}")
    matrix = np.zeros((N, N), dtype=np.complex128)
    n = np.arange(1, N // a + 1)
    matrix[a * n - 1, n - 1] = 1
    return LinearOperator(matrix, OperatorTag.GENERAL, tuple(range(1, N + 1)))


def _flow(op: np.ndarray, h: np.ndarray, t: float) -> np.ndarray:
    """σ_t(op) = exp(itH_0) op exp(−itH_0) for diagonal H_0 with entries h."""
    return np.exp(1j * t * h)[:, None] * op * np.exp(-1j * t * h)[None, :]


@dataclass(frozen=True)
class FlowReport:
    """Largest deviation of σ_t(μ_a) from a^{it} μ_a, per t."""

    a: int
    N: int
    deviations: dict[float, float]
    rows_checked: int
    rows_clipped: int

    @property
    def max_deviation(self) -> float:
        """Worst deviation over all t; 0 when no t was sampled."""
        return max(self.deviations.values(), default=0.0)

    @property
    def holds(self) -> bool:
        """Every deviation is below RESIDUAL_TOLERANCE."""
        return self.max_deviation < RESIDUAL_TOLERANCE


def flow_covariance_check(a: int, N: int, t_values: Iterable[float]) -> FlowReport:
    """max |σ_t(μ_a) − a^{it} μ_a| over the columns n <= N/a the truncation keeps."""
    if a < 2:
        raise DomainError(f"a must be >= 2, got {a}")
    h = np.real(np.diag(build_H0(N).matrix))
    mu = build_mu(a, N).matrix
    kept = N // a
    deviations = {}
    for t in t_values:
        lhs = _flow(mu, h, t)[:, :kept]
        rhs = (np.exp(1j * t * math.log(a)) * mu)[:, :kept]
        deviations[float(t)] = float(np.max(np.abs(lhs - rhs), initial=0.0))
    return FlowReport(a=a, N=N, deviations=deviations, rows_checked=kept, rows_clipped=N - kept)


def phase_invariance_check(
    delta_num: int, delta_den: int, N: int, t_values: Iterable[float]
) -> dict[PhaseMode, float]:
    """max |σ_t(e_δ) − e_δ| per phase mode; both modes are fixed by the flow."""
    h = np.real(np.diag(build_H0(N).matrix))
    t_values = list(t_values)
    result = {}
    for mode in PhaseMode:
        e = build_phase_operator(delta_num, delta_den, N, mode).matrix
        result[mode] = max(
            (float(np.max(np.abs(_flow(e, h, t) - e))) for t in t_values), default=0.0
        )
    return result


def multiplicativity_check(a: int, b: int, q: int) -> bool:
    """U_a U_b = U_{ab mod q}, compared exactly."""
    product = build_Ua(a, q).matrix @ build_Ua(b, q).matrix
    return bool(np.array_equal(product, build_Ua((a * b) % q, q).matrix))


def commutes(a: int, b: int, q: int) -> bool:
    """U_a U_b = U_b U_a; always true since multiplication mod q commutes."""
    ua, ub = build_Ua(a, q).matrix, build_Ua(b, q).matrix
    return bool(np.array_equal(ua @ ub, ub @ ua))


@dataclass(frozen=True)
class QuantumReport:
    """Every operator check for one unit ``a`` modulo ``q``; r is ord_q(a)."""

    q: int
    a: int
    r: int
    max_residual: float
    unitary: bool
    multiplicative: bool
    spectrum_ok: bool
    order_chain_ok: bool

    @property
    def holds(self) -> bool:
        """Every check passed and the eigen-residuals are below tolerance."""
        return (
            self.max_residual < RESIDUAL_TOLERANCE
            and self.unitary
            and self.multiplicative
            and self.spectrum_ok
            and self.order_chain_ok
        )


# partners b used for U_a U_b = U_{ab}; every unit below this modulus, a sample above
_FULL_PARTNER_LIMIT = 64
_PARTNER_SAMPLE = 8


def _verify_one(a: int, q: int, units: list[int]) -> QuantumReport:
    r = multiplicative_order(a, q)
    residual = max(eigen_residual(a, q, k) for k in range(r))
    partners = units if q <= _FULL_PARTNER_LIMIT else units[:_PARTNER_SAMPLE]
    spectrum = orbit_spectrum(a, q)
    return QuantumReport(
        q=q,
        a=a,
        r=r,
        max_residual=residual,
        unitary=is_unitary(build_Ua(a, q)),
        multiplicative=all(multiplicativity_check(a, b, q) for b in partners),
        spectrum_ok=bool(np.allclose(spectrum, roots_of_unity(r), atol=RESIDUAL_TOLERANCE)),
        order_chain_ok=r <= carmichael_lambda(q) <= euler_phi(q) <= q - 1,
    )


def verify(q: int, a: Optional[int] = None) -> list[QuantumReport]:
    """
    Run the operator checks for one unit ``a`` mod ``q``, or for every unit.

    Args:
        q: Modulus, within the dense-matrix size limit.
        a: Unit to check; None checks every unit mod q.

    Returns:
        One :class:`QuantumReport` per checked unit.

    Raises:
        DomainError: q is out of range or ``a`` is not a unit.
    """
    _check_modulus(q)
    units = [u for u in range(1, q) if math.gcd(u, q) == 1]
    if a is not None:
        if math.gcd(a, q) != 1:
            raise DomainError(f"gcd({a}, {q}) != 1")
        return [_verify_one(a % q, q, units)]
    return [_verify_one(u, q, units) for u in units]
