"""
Detector inefficiency as a linear loss channel, plus two-mode beamsplitters.

Beamsplitter convention (first mode = measured field ``c``, second mode = environment ``d``)::

    U = exp(theta (c^dagger d - c d^dagger)),  cos(theta) = sqrt(eta)
    U^dagger c U =  sqrt(eta) c + sqrt(1 - eta) d
    U^dagger d U = -sqrt(1 - eta) c + sqrt(eta) d

The unitary conserves the total photon number, so it is applied sector by sector and never
truncated internally.

"""

import dataclasses
import functools
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import eigh, expm
from scipy.stats import binom

from .analytic import check_eta
from .common import ComplexLike, Mode
from .exceptions import CutoffTooSmallError, DimensionError, NumericConvergenceError
from .fock import (DensityOperator, FockVector, OperatorMatrix, TwoModeState, apply_number_conserving,
                   displaced_fock_state, partial_trace, tensor, fock_state)

#: Completeness tolerance of a Kraus decomposition.
COMPLETENESS_TOL = 1e-10

#: Eigenvalues of magnitude below this are dropped from the dilation path.
EIGENVALUE_FLOOR = 1e-15


@dataclasses.dataclass(frozen=True, eq=False)
class LossChannel:
    """
    Loss channel of power transmissivity ``eta`` in Kraus form.

    ``kraus_ops[k]`` removes exactly ``k`` photons, ``<m|A_k|m+k> = sqrt(C(m+k, k) eta^m (1-eta)^k)``.
    Every ``A_k`` has a single nonzero diagonal, so only ``diagonals[k][m] = <m|A_k|m+k>`` is stored;
    the dense matrices are built on request. Use :func:`loss_channel` to build one.
    """
    eta: float
    cutoff: int
    diagonals: Tuple[np.ndarray, ...]

    def __post_init__(self):
        check_eta(self.eta)
        for k, d in enumerate(self.diagonals):
            if d.shape != (self.cutoff - k,):
                raise DimensionError(f"diagonal {k} has shape {d.shape}, expected ({self.cutoff - k},)")
        deviation = self.completeness_deviation()
        if deviation > COMPLETENESS_TOL:
            raise NumericConvergenceError(f"Kraus operators incomplete (deviation {deviation:.2e})")

    def completeness_deviation(self) -> float:
        # sum_k A_k^dagger A_k is diagonal
        total = np.zeros(self.cutoff)
        for k, d in enumerate(self.diagonals):
            total[k:] += np.abs(d) ** 2
        return float(np.max(np.abs(total - 1.0)))

    def kraus_operator(self, k: int) -> OperatorMatrix:
        d = self.diagonals[k]
        rows = np.arange(d.size)
        matrix = np.zeros((self.cutoff, self.cutoff))
        matrix[rows, rows + k] = d
        return OperatorMatrix(matrix)

    @property
    def kraus_ops(self) -> Tuple[OperatorMatrix, ...]:
        return tuple(self.kraus_operator(k) for k in range(len(self.diagonals)))

    def __call__(self, rho: DensityOperator) -> DensityOperator:
        return apply_loss_kraus(rho, self)

    def __repr__(self):
        return f"<LossChannel eta={self.eta!r} cutoff={self.cutoff}>"


def loss_channel(eta: float, cutoff: int) -> LossChannel:
    check_eta(eta)
    if cutoff < 1:
        raise DimensionError(f"cutoff must be positive, got {cutoff!r}")
    m = np.arange(cutoff)
    # C(m+k, k) eta^m (1-eta)^k is the binomial probability of losing k out of m+k photons
    diagonals = tuple(np.sqrt(binom.pmf(k, m[:cutoff - k] + k, 1.0 - eta)) for k in range(cutoff))
    return LossChannel(eta, cutoff, diagonals)


def apply_loss_kraus(rho: DensityOperator, channel: LossChannel) -> DensityOperator:
    """``sum_k A_k rho A_k^dagger``, evaluated diagonal by diagonal."""
    if rho.cutoff != channel.cutoff:
        raise DimensionError(f"channel cutoff {channel.cutoff} does not match state cutoff {rho.cutoff}")
    D = rho.cutoff
    out = np.zeros_like(rho.matrix)
    for k, d in enumerate(channel.diagonals):
        out[:D - k, :D - k] += np.outer(d, d) * rho.matrix[k:, k:]
    return DensityOperator(0.5 * (out + out.conj().T))


# ------------------------------------------------------------------------
# Beamsplitter
# ------------------------------------------------------------------------

def transmissivity_angle(transmissivity: float) -> float:
    check_eta(transmissivity)
    return math.acos(math.sqrt(transmissivity))


@functools.lru_cache(maxsize=4096)
def beamsplitter_block(theta: float, total: int) -> np.ndarray:
    """
    Beamsplitter of mixing angle ``theta`` on the sector with ``total`` photons.

    The basis is ``|j>|total-j>`` indexed by ``j``, the first-mode count. The result is read-only.
    """
    j = np.arange(total)
    generator = np.zeros((total + 1, total + 1))
    # c^dagger d raises j, c d^dagger lowers it
    generator[j + 1, j] = theta * np.sqrt((j + 1) * (total - j))
    generator[j, j + 1] = -theta * np.sqrt((j + 1) * (total - j))
    block = expm(generator).astype(complex)
    block.flags.writeable = False
    return block


def apply_beamsplitter(state: TwoModeState, transmissivity: float,
                       cutoffs: Optional[Tuple[int, int]] = None) -> TwoModeState:
    """Beamsplitter on a two-mode pure state; amplitudes outside ``cutoffs`` become leakage."""
    theta = transmissivity_angle(transmissivity)
    return apply_number_conserving(state, lambda total: beamsplitter_block(theta, total), cutoffs)


def beamsplitter_unitary(transmissivity: float, cutoff_a: int, cutoff_b: int) -> OperatorMatrix:
    """
    Dense beamsplitter matrix on the truncated product basis ``first ⊗ second`` (row-major).

    Sectors with more photons than the smaller cutoff are cut by the truncation, so unitarity is
    asserted on the complete sectors only.
    """
    if cutoff_a < 1 or cutoff_b < 1:
        raise DimensionError(f"cutoffs must be positive, got ({cutoff_a}, {cutoff_b})")
    theta = transmissivity_angle(transmissivity)
    dim = cutoff_a * cutoff_b
    matrix = np.zeros((dim, dim), dtype=complex)
    for total in range(cutoff_a + cutoff_b - 1):
        j = np.arange(max(0, total - cutoff_b + 1), min(total, cutoff_a - 1) + 1)
        index = j * cutoff_b + (total - j)
        block = beamsplitter_block(theta, total)
        matrix[np.ix_(index, index)] = block[np.ix_(j, j)]
    complete = min(cutoff_a, cutoff_b)
    a_count, b_count = np.divmod(np.arange(dim), cutoff_b)
    interior = np.nonzero(a_count + b_count < complete)[0]
    return OperatorMatrix(matrix, unitary_up_to_truncation=True, interior=interior)


# ------------------------------------------------------------------------
# Loss by dilation
# ------------------------------------------------------------------------

def apply_loss_dilation(rho: DensityOperator, eta: float, env_cutoff: Optional[int] = None) -> DensityOperator:
    """
    Loss channel by its physical definition: mix with an environment vacuum and trace it out.

    ``rho`` is diagonalised and every eigenvector is sent through the beamsplitter together with
    the environment vacuum. The environment cutoff defaults to the signal cutoff, which is enough
    to absorb every photon.

    Raises:
        CutoffTooSmallError: ``env_cutoff`` smaller than the signal cutoff.

    """
    theta = transmissivity_angle(eta)
    cutoff = rho.cutoff
    env_cutoff = cutoff if env_cutoff is None else env_cutoff
    if env_cutoff < cutoff:
        raise CutoffTooSmallError(f"environment cutoff {env_cutoff} below signal cutoff {cutoff}")

    weights, vectors = eigh(rho.matrix)
    env_vacuum = fock_state(0, env_cutoff)
    block = lambda total: beamsplitter_block(theta, total)  # noqa: E731
    out = np.zeros((cutoff, cutoff), dtype=complex)
    for weight, vector in zip(weights, vectors.T):
        if abs(weight) < EIGENVALUE_FLOOR:
            continue
        joint = apply_number_conserving(tensor(FockVector(vector), env_vacuum), block, (cutoff, env_cutoff))
        psi = joint.amplitudes
        out += weight * (psi @ psi.conj().T)
    logging.debug("dilation of rank-%d state at eta=%r", int(np.sum(np.abs(weights) >= EIGENVALUE_FLOOR)), eta)
    return DensityOperator(0.5 * (out + out.conj().T))


def apply_loss_dilation_pure(psi: FockVector, eta: float) -> DensityOperator:
    """Shortcut of :func:`apply_loss_dilation` for a pure input."""
    theta = transmissivity_angle(eta)
    joint = apply_number_conserving(tensor(psi, fock_state(0, psi.cutoff)),
                                    lambda total: beamsplitter_block(theta, total), (psi.cutoff, psi.cutoff))
    return partial_trace(joint, Mode.FIRST)


def lossy_mixture_analytic(beta: ComplexLike, r: float, eta: float, cutoff: int) -> DensityOperator:
    """
    Closed form of a lossy displaced single photon.

    ``eta |b, 1><b, 1| + (1 - eta) |b, 0><b, 0|`` with ``|b, n> = D(b)|n>`` and ``b = sqrt(eta) beta e^r``.
    """
    check_eta(eta)
    b = math.sqrt(eta) * complex(beta) * math.exp(r)
    one = displaced_fock_state(1, b, cutoff).amplitudes
    zero = displaced_fock_state(0, b, cutoff).amplitudes
    matrix = eta * np.outer(one, one.conj()) + (1.0 - eta) * np.outer(zero, zero.conj())
    return DensityOperator(matrix)
