"""
Truncated Fock-basis linear algebra.

States and operators of one or two bosonic modes are dense numpy arrays in the number basis
``{|0>, ..., |D-1>}``. Truncation is never hidden: the norm deficit of a state is recorded as
its ``leakage`` and preparation functions raise :exc:`CutoffTooSmallError` when it exceeds
the tolerance, instead of renormalising.

"""

import dataclasses
import functools
import logging
import math
from typing import Callable, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np
from scipy.linalg import eigvalsh, expm
from scipy.special import gammaln

from .analytic import laguerre_table
from .common import (ComplexLike, HERMITIAN_TOL, LEAKAGE_TOL, MAX_CUTOFF, MAX_SQUEEZE, Mode,
                     POSITIVITY_TOL, UNITARITY_TOL)
from .exceptions import CutoffTooSmallError, DimensionError, InvalidParameterError, NumericConvergenceError

T = TypeVar("T")


# ------------------------------------------------------------------------
# Domain types
# ------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True, eq=False)
class FockVector:
    """
    Pure state of one mode in a truncated number basis.

    ``leakage`` is ``max(0, 1 - ||amplitudes||^2)``, the weight lost above the cutoff.
    The amplitude array is copied and made read-only.
    """
    amplitudes: np.ndarray
    leakage: float = dataclasses.field(init=False)

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex)
        if amplitudes.ndim != 1 or amplitudes.size < 1:
            raise DimensionError(f"FockVector needs a non-empty 1-D array, got shape {amplitudes.shape}")
        norm2 = float(np.vdot(amplitudes, amplitudes).real)
        if norm2 > 1.0 + 1e-12:
            raise InvalidParameterError(f"state norm^2 {norm2!r} exceeds 1")
        amplitudes.flags.writeable = False
        object.__setattr__(self, "amplitudes", amplitudes)
        object.__setattr__(self, "leakage", max(0.0, 1.0 - norm2))

    @property
    def cutoff(self) -> int:
        return self.amplitudes.size

    def photon_pmf(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def to_density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()))

    def __repr__(self):
        return f"<FockVector cutoff={self.cutoff} leakage={self.leakage:.2e}>"


@dataclasses.dataclass(frozen=True, eq=False)
class DensityOperator:
    """
    Mixed state: Hermitian, unit-trace up to ``leakage``.

    ``dims`` is set for a two-mode operator (row-major ``first ⊗ second`` ordering) and
    enables :func:`partial_trace`. Positivity is checked on demand with :meth:`check_positive`.
    """
    matrix: np.ndarray
    dims: Optional[Tuple[int, int]] = None
    leakage: float = dataclasses.field(init=False)

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
            raise DimensionError(f"density matrix must be square, got shape {matrix.shape}")
        if self.dims is not None:
            dims = tuple(int(d) for d in self.dims)
            if len(dims) != 2 or dims[0] * dims[1] != matrix.shape[0]:
                raise DimensionError(f"dims {self.dims!r} do not match matrix of size {matrix.shape[0]}")
            object.__setattr__(self, "dims", dims)
        if np.max(np.abs(matrix - matrix.conj().T)) > HERMITIAN_TOL:
            raise InvalidParameterError("density matrix is not Hermitian")
        trace = float(np.trace(matrix).real)
        if trace > 1.0 + HERMITIAN_TOL or trace < -HERMITIAN_TOL:
            raise InvalidParameterError(f"density matrix trace {trace!r} outside [0, 1]")
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "leakage", max(0.0, 1.0 - trace))

    @property
    def cutoff(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def photon_pmf(self) -> np.ndarray:
        return np.diagonal(self.matrix).real.copy()

    def min_eigenvalue(self) -> float:
        return float(eigvalsh(self.matrix)[0])

    def check_positive(self) -> "DensityOperator":
        lowest = self.min_eigenvalue()
        if lowest < -POSITIVITY_TOL:
            raise InvalidParameterError(f"density matrix has eigenvalue {lowest!r}")
        return self

    def truncated(self, cutoff: int) -> "DensityOperator":
        """Top-left ``cutoff`` block; the dropped trace becomes leakage."""
        if self.dims is not None:
            raise DimensionError("cannot truncate a two-mode density operator")
        return DensityOperator(self.matrix[:cutoff, :cutoff])

    def __repr__(self):
        return f"<DensityOperator cutoff={self.cutoff} leakage={self.leakage:.2e}>"


@dataclasses.dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """
    Dense operator on a truncated basis.

    When ``unitary_up_to_truncation`` is set, ``U^dagger U = I`` is asserted on the ``interior``
    basis states (all of them by default) within :data:`fockgate.common.UNITARITY_TOL`;
    truncation necessarily spoils the rows near the cutoff.
    """
    matrix: np.ndarray
    unitary_up_to_truncation: bool = False
    interior: Optional[Sequence[int]] = None

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError(f"operator matrix must be square, got shape {matrix.shape}")
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)
        interior = np.arange(matrix.shape[0]) if self.interior is None else np.asarray(self.interior, dtype=int)
        interior.flags.writeable = False
        object.__setattr__(self, "interior", interior)
        if self.unitary_up_to_truncation:
            deviation = self.unitarity_deviation()
            if deviation > UNITARITY_TOL:
                raise NumericConvergenceError(f"operator not unitary on its interior block (deviation {deviation:.2e})")

    @property
    def cutoff(self) -> int:
        return self.matrix.shape[0]

    def unitarity_deviation(self) -> float:
        """``max |(U^dagger U - I)|`` restricted to the interior basis states."""
        idx = np.asarray(self.interior)
        if idx.size == 0:
            return 0.0
        columns = self.matrix[:, idx]
        gram = columns.conj().T @ columns
        return float(np.max(np.abs(gram - np.eye(idx.size))))

    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.matrix.conj().T, self.unitary_up_to_truncation, self.interior)

    def conjugate(self, rho: DensityOperator) -> DensityOperator:
        """``U rho U^dagger``"""
        _check_same_cutoff(self.cutoff, rho.cutoff)
        result = self.matrix @ rho.matrix @ self.matrix.conj().T
        return DensityOperator(0.5 * (result + result.conj().T), rho.dims)

    def __matmul__(self, other):
        """
        Operator product, or the operator applied to a state.

        A state comes back as a :class:`FockVector` only for unitaries; any other operator gives
        the plain amplitude array, whose norm is unconstrained.
        """
        if isinstance(other, FockVector):
            _check_same_cutoff(self.cutoff, other.cutoff)
            amplitudes = self.matrix @ other.amplitudes
            return FockVector(amplitudes) if self.unitary_up_to_truncation else amplitudes
        elif isinstance(other, OperatorMatrix):
            _check_same_cutoff(self.cutoff, other.cutoff)
            return OperatorMatrix(self.matrix @ other.matrix)
        return NotImplemented

    def __repr__(self):
        return f"<OperatorMatrix cutoff={self.cutoff} unitary={self.unitary_up_to_truncation}>"


@dataclasses.dataclass(frozen=True, eq=False)
class TwoModeState:
    """
    Pure state of two truncated modes, amplitudes indexed ``[first, second]``.

    Same norm discipline as :class:`FockVector`.
    """
    amplitudes: np.ndarray
    leakage: float = dataclasses.field(init=False)

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex)
        if amplitudes.ndim != 2 or 0 in amplitudes.shape:
            raise DimensionError(f"TwoModeState needs a non-empty 2-D array, got shape {amplitudes.shape}")
        norm2 = float(np.vdot(amplitudes, amplitudes).real)
        if norm2 > 1.0 + 1e-12:
            raise InvalidParameterError(f"state norm^2 {norm2!r} exceeds 1")
        amplitudes.flags.writeable = False
        object.__setattr__(self, "amplitudes", amplitudes)
        object.__setattr__(self, "leakage", max(0.0, 1.0 - norm2))

    @property
    def cutoffs(self) -> Tuple[int, int]:
        return self.amplitudes.shape[0], self.amplitudes.shape[1]

    def __repr__(self):
        return f"<TwoModeState cutoffs={self.cutoffs} leakage={self.leakage:.2e}>"


# ------------------------------------------------------------------------
# States
# ------------------------------------------------------------------------

def fock_state(n: int, cutoff: int) -> FockVector:
    """
    Number state ``|n>``.

    Raises:
        DimensionError: ``n`` outside ``[0, cutoff)``.

    """
    _check_cutoff(cutoff)
    if not 0 <= n < cutoff:
        raise DimensionError(f"Fock index {n} outside basis of size {cutoff}")
    amplitudes = np.zeros(cutoff, dtype=complex)
    amplitudes[n] = 1.0
    return FockVector(amplitudes)


def coherent_state(alpha: ComplexLike, cutoff: int, tol: float = LEAKAGE_TOL) -> FockVector:
    """
    Coherent state ``|alpha>`` with amplitudes ``alpha^k exp(-|alpha|^2/2) / sqrt(k!)``.

    Raises:
        CutoffTooSmallError: the truncated state leaks ``tol`` or more.

    """
    _check_cutoff(cutoff)
    ratios = complex(alpha) / np.sqrt(np.arange(1, cutoff))
    amplitudes = np.concatenate(([1.0 + 0j], np.cumprod(ratios))) * math.exp(-abs(alpha) ** 2 / 2)
    state = FockVector(amplitudes)
    if state.leakage >= tol:
        raise CutoffTooSmallError(f"coherent state |alpha|={abs(alpha):.3g} leaks {state.leakage:.2e} at cutoff {cutoff}")
    return state


def displaced_fock_state(n: int, beta: ComplexLike, cutoff: int, tol: float = LEAKAGE_TOL) -> FockVector:
    """
    ``D(beta)|n>`` from the analytic matrix elements.

    Raises:
        DimensionError: ``n >= cutoff``.
        CutoffTooSmallError: leakage ``>= tol``.

    """
    _check_cutoff(cutoff)
    if not 0 <= n < cutoff:
        raise DimensionError(f"Fock index {n} outside basis of size {cutoff}")
    state = FockVector(_displacement_matrix(complex(beta), cutoff)[:, n])
    if state.leakage >= tol:
        raise CutoffTooSmallError(f"D(beta)|{n}> leaks {state.leakage:.2e} at cutoff {cutoff}")
    return state


def squeezed_fock_state(n: int, r: float, cutoff: int, tol: float = LEAKAGE_TOL) -> FockVector:
    """
    ``S(r)|n>``.

    The truncated squeeze operator is exactly unitary, so truncation shows up as weight near the
    top of the basis rather than as leakage; that boundary weight must stay below ``tol``.
    """
    state = squeeze_operator(r, cutoff) @ fock_state(n, cutoff)
    weight = boundary_weight(state)
    if weight >= tol:
        raise CutoffTooSmallError(f"S({r})|{n}> has boundary weight {weight:.2e} at cutoff {cutoff}")
    return state


def boundary_weight(state: Union[FockVector, DensityOperator], width: Optional[int] = None) -> float:
    """Probability carried by the top ``width`` basis states (default: a tenth of the basis, at least 2)."""
    if width is None:
        width = max(2, state.cutoff // 10)
    return float(np.sum(photon_pmf(state)[-width:]))


# ------------------------------------------------------------------------
# Operators
# ------------------------------------------------------------------------

def annihilation_matrix(cutoff: int) -> OperatorMatrix:
    """Truncated ``a`` with ``<k-1|a|k> = sqrt(k)``."""
    _check_cutoff(cutoff)
    return OperatorMatrix(np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), k=1))


def creation_matrix(cutoff: int) -> OperatorMatrix:
    return annihilation_matrix(cutoff).dag()


def number_matrix(cutoff: int) -> OperatorMatrix:
    _check_cutoff(cutoff)
    return OperatorMatrix(np.diag(np.arange(cutoff, dtype=float)))


def displacement_operator(beta: ComplexLike, cutoff: int, method: str = "analytic") -> OperatorMatrix:
    """
    Displacement ``D(beta) = exp(beta a^dagger - beta* a)``.

    ``method="analytic"`` (default) builds every element from associated Laguerre polynomials,
    ``<m|D|n> = sqrt(n!/m!) beta^(m-n) exp(-|beta|^2/2) L_n^(m-n)(|beta|^2)`` for ``m >= n`` and the
    mirrored expression with ``-beta*`` above the diagonal. ``method="expm"`` exponentiates the
    truncated generator by scaling and squaring; it is kept as an independent oracle.

    Raises:
        CutoffTooSmallError: not even the vacuum column fits the basis.

    """
    _check_cutoff(cutoff)
    beta = complex(beta)
    interior = interior_size(cutoff, abs(beta))
    if interior == 0:
        raise CutoffTooSmallError(f"cutoff {cutoff} too small for |beta|={abs(beta):.3g}")
    if method == "analytic":
        matrix = _displacement_matrix(beta, cutoff)
    elif method == "expm":
        a = annihilation_matrix(cutoff).matrix
        matrix = expm(beta * a.conj().T - beta.conjugate() * a)
    else:
        raise InvalidParameterError(f"unknown displacement method {method!r}")
    return OperatorMatrix(matrix, unitary_up_to_truncation=True, interior=range(interior))


def _displacement_matrix(beta: complex, cutoff: int) -> np.ndarray:
    if beta == 0:
        return np.eye(cutoff, dtype=complex)
    x = abs(beta) ** 2
    table = laguerre_table(cutoff - 1, cutoff - 1, x)
    m, n = np.indices((cutoff, cutoff))
    lo, k = np.minimum(m, n), np.abs(m - n)
    log_magnitude = 0.5 * (gammaln(lo + 1) - gammaln(np.maximum(m, n) + 1)) + k * math.log(abs(beta)) - x / 2
    theta = np.angle(beta)
    # above the diagonal the roles of m, n swap and beta -> -beta*
    phase = np.where(m >= n, np.exp(1j * k * theta), (-1.0) ** k * np.exp(-1j * k * theta))
    return np.exp(log_magnitude) * table[lo, k] * phase


@functools.lru_cache(maxsize=32)
def squeeze_operator(r: float, cutoff: int) -> OperatorMatrix:
    """
    Squeeze operator ``S(r) = exp(r (a^dagger^2 - a^2) / 2)`` by matrix exponential.

    Raises:
        InvalidParameterError: ``|r|`` beyond :data:`fockgate.common.MAX_SQUEEZE`.
        CutoffTooSmallError: the squeezed-vacuum tail does not fit the basis.

    """
    _check_cutoff(cutoff)
    if not abs(r) <= MAX_SQUEEZE:
        raise InvalidParameterError(f"|r| must not exceed {MAX_SQUEEZE}, got {r!r}")
    if r == 0:
        return OperatorMatrix(np.eye(cutoff), unitary_up_to_truncation=True)
    interior = interior_size(cutoff, 0.0, r)
    if interior == 0:
        raise CutoffTooSmallError(f"cutoff {cutoff} too small for squeeze factor {r}")
    a = annihilation_matrix(cutoff).matrix
    a2 = a @ a
    return OperatorMatrix(expm(0.5 * r * (a2.conj().T - a2)), unitary_up_to_truncation=True,
                          interior=range(interior))


def conjugated_displacement(beta: ComplexLike, r: float) -> complex:
    """
    Amplitude of ``S^dagger(r) D(beta) S(r) = D(beta cosh r - beta* sinh r)``.

    For an imaginary ``beta`` (the dark-port displacement ``i alpha phi``) this is ``beta e^r``.
    """
    beta = complex(beta)
    return beta * math.cosh(r) - beta.conjugate() * math.sinh(r)


# ------------------------------------------------------------------------
# Inner products, distributions, distances
# ------------------------------------------------------------------------

def inner_product(x: FockVector, y: FockVector) -> complex:
    """``<x|y>``"""
    _check_same_cutoff(x.cutoff, y.cutoff)
    return complex(np.vdot(x.amplitudes, y.amplitudes))


def photon_pmf(state: Union[FockVector, DensityOperator]) -> np.ndarray:
    """Photon-number distribution; sums to ``1 - leakage``."""
    return state.photon_pmf()


def expectation_number(state: Union[FockVector, DensityOperator]) -> float:
    pmf = photon_pmf(state)
    return float(np.dot(np.arange(pmf.size), pmf))


def fidelity(psi: FockVector, other: Union[FockVector, DensityOperator]) -> float:
    """``|<psi|phi>|^2`` for a pure ``other`` and ``<psi|rho|psi>`` for a mixed one."""
    _check_same_cutoff(psi.cutoff, other.cutoff)
    if isinstance(other, FockVector):
        return abs(inner_product(psi, other)) ** 2
    return float(np.vdot(psi.amplitudes, other.matrix @ psi.amplitudes).real)


def trace_distance(a: Union[FockVector, DensityOperator], b: Union[FockVector, DensityOperator]) -> float:
    """``||rho - sigma||_1 / 2``"""
    rho = a.to_density() if isinstance(a, FockVector) else a
    sigma = b.to_density() if isinstance(b, FockVector) else b
    _check_same_cutoff(rho.cutoff, sigma.cutoff)
    return 0.5 * float(np.sum(np.abs(eigvalsh(rho.matrix - sigma.matrix))))


# ------------------------------------------------------------------------
# Two modes
# ------------------------------------------------------------------------

def tensor(a: FockVector, b: FockVector) -> TwoModeState:
    """``|a> ⊗ |b>``"""
    return TwoModeState(np.outer(a.amplitudes, b.amplitudes))


def partial_trace(state: Union[TwoModeState, DensityOperator], keep: Mode) -> DensityOperator:
    """
    Reduced state of mode ``keep``.

    Accepts a :class:`TwoModeState` or a two-mode :class:`DensityOperator` (one with ``dims``).
    """
    keep = Mode(keep)
    if isinstance(state, TwoModeState):
        psi = state.amplitudes
        reduced = psi @ psi.conj().T if keep is Mode.FIRST else psi.T @ psi.conj()
    elif isinstance(state, DensityOperator):
        if state.dims is None:
            raise DimensionError("partial trace needs a two-mode density operator (dims not set)")
        da, db = state.dims
        rho = state.matrix.reshape(da, db, da, db)
        reduced = np.einsum("ijkj->ik", rho) if keep is Mode.FIRST else np.einsum("ijil->jl", rho)
    else:
        raise TypeError("partial_trace expects a TwoModeState or a DensityOperator")
    return DensityOperator(0.5 * (reduced + reduced.conj().T))


def apply_number_conserving(state: TwoModeState, block: Callable[[int], np.ndarray],
                            cutoffs: Optional[Tuple[int, int]] = None) -> TwoModeState:
    """
    Apply a two-mode unitary that conserves the total photon number.

    ``block(N)`` returns the ``(N+1) x (N+1)`` matrix of the unitary on the sector of total photon
    number ``N`` in the basis ``|j>|N-j>`` indexed by ``j``, the first-mode count. Sectors are complete,
    so no truncation happens inside the evolution; amplitudes that do not fit the output ``cutoffs``
    (default: large enough for every sector) become leakage.
    """
    da, db = state.cutoffs
    top = da + db - 2
    out_a, out_b = cutoffs if cutoffs is not None else (top + 1, top + 1)
    amplitudes = state.amplitudes
    out = np.zeros((out_a, out_b), dtype=complex)
    for total in range(top + 1):
        j_in = np.arange(max(0, total - db + 1), min(total, da - 1) + 1)
        sector = np.zeros(total + 1, dtype=complex)
        sector[j_in] = amplitudes[j_in, total - j_in]
        if not sector.any():
            continue
        evolved = block(total) @ sector
        j_out = np.arange(max(0, total - out_b + 1), min(total, out_a - 1) + 1)
        out[j_out, total - j_out] = evolved[j_out]
    return TwoModeState(out)


def mean_total_photons(state: TwoModeState) -> float:
    """``<n_1 + n_2>``"""
    da, db = state.cutoffs
    totals = np.add.outer(np.arange(da), np.arange(db))
    return float(np.sum(totals * np.abs(state.amplitudes) ** 2))


# ------------------------------------------------------------------------
# Cutoff management
# ------------------------------------------------------------------------

def squeeze_tail(r: float, tol: float = LEAKAGE_TOL) -> int:
    """Photon number beyond which a squeezed vacuum carries less than ``tol`` (even, parity-aware)."""
    if r == 0:
        return 0
    ratio = math.tanh(abs(r)) ** 2
    if ratio == 0.0:
        return 2
    # two decades of headroom for the polynomial prefactor of squeezed number states
    return 2 * math.ceil(math.log(tol * 1e-2) / math.log(ratio))


def _column_extent(n: int, beta_abs: float, r: float, tol: float) -> float:
    # mean photon number of D(g) S(r) |n> plus a tail margin, g = |beta| e^|r|
    gain = math.exp(abs(r))
    g = beta_abs * gain
    mean = n * math.cosh(2 * r) + math.sinh(r) ** 2 + g * g
    spread = math.sqrt(2 * math.log(1 / tol)) * g * math.sqrt(2 * n * math.cosh(2 * r) + 1)
    return mean + max(spread, squeeze_tail(r, tol))


def interior_size(cutoff: int, beta_abs: float = 0.0, r: float = 0.0, tol: float = LEAKAGE_TOL) -> int:
    """
    Number of leading basis states whose image under ``D(beta) S(r)`` fits inside ``cutoff``.

    These columns are reliable in a truncated operator; the remaining ``cutoff - interior_size``
    states form the boundary buffer.
    """
    size = 0
    while size < cutoff and _column_extent(size, beta_abs, r, tol) < cutoff:
        size += 1
    return size


def recommended_cutoff(beta: ComplexLike, r: float = 0.0, n: int = 0, tol: float = LEAKAGE_TOL) -> int:
    """
    Basis size for ``D(beta e^r)|n>`` prepared through squeezing with factor ``r``.

    At least ``ceil(|beta e^r|^2 + 6 |beta e^r| + n e^(2r) + 10)``, raised where the displacement
    spread or the squeezed tail needs more room.

    Raises:
        InvalidParameterError: ``tol <= 0``.
        CutoffTooSmallError: the result exceeds :data:`fockgate.common.MAX_CUTOFF`.

    """
    if not tol > 0:
        raise InvalidParameterError(f"tol must be positive, got {tol!r}")
    g = abs(beta) * math.exp(r)
    floor = math.ceil(g * g + 6 * g + n * math.exp(2 * r) + 10)
    cutoff = max(floor, math.ceil(_column_extent(n, abs(beta), r, tol) + 4))
    if cutoff > MAX_CUTOFF:
        raise CutoffTooSmallError(f"recommended cutoff {cutoff} exceeds the hard cap {MAX_CUTOFF}")
    return cutoff


def cutoff_for_distance(beta: ComplexLike, r: float = 0.0, n: int = 0, distance: float = 1e-8) -> int:
    """
    :func:`recommended_cutoff` for comparisons of states by trace distance.

    The trace distance between a state and its truncation goes as the square root of the lost
    probability, so the probability budget is ``distance**2``.

    Raises:
        InvalidParameterError: ``distance <= 0``.
        CutoffTooSmallError: the result exceeds :data:`fockgate.common.MAX_CUTOFF`.

    """
    if not distance > 0:
        raise InvalidParameterError(f"distance must be positive, got {distance!r}")
    return recommended_cutoff(beta, r, n, tol=distance ** 2)


def escalate_cutoff(build: Callable[[int], T], cutoff: int, cap: int = MAX_CUTOFF) -> T:
    """
    Call ``build(cutoff)``, growing the cutoff by half each time it raises :exc:`CutoffTooSmallError`.

    Raises:
        CutoffTooSmallError: still failing at ``cap``.

    """
    while True:
        try:
            return build(cutoff)
        except CutoffTooSmallError:
            if cutoff >= cap:
                raise
            cutoff = min(cap, math.ceil(1.5 * cutoff))
            logging.debug("escalating cutoff to %d", cutoff)


def _check_cutoff(cutoff: int):
    if int(cutoff) != cutoff or not 1 <= cutoff <= MAX_CUTOFF:
        raise DimensionError(f"cutoff must be an integer in [1, {MAX_CUTOFF}], got {cutoff!r}")


def _check_same_cutoff(a: int, b: int):
    if a != b:
        raise DimensionError(f"cutoff mismatch: {a} != {b}")
