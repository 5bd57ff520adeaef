"""
Dark-port states of the Mach-Zehnder interferometer.

Two models are provided:

* the asymptotic model (``phi -> 0``, ``alpha -> inf`` with ``alpha*phi`` finite) in which the
  dark port carries ``D(beta) S(r)|n>`` with ``beta = i alpha phi``, optionally unsqueezed by a
  second parametric amplifier;
* the exact two-mode model at finite ``alpha``. The network is a 50/50 beamsplitter, the
  differential phase ``exp(i phi (n_bright - n_dark))`` and the inverse beamsplitter, which maps
  the dark-port field to ``b cos(phi) + i a sin(phi)`` exactly (no global phase). It is evaluated
  sector by sector in the total photon number, so the two-mode evolution itself is not truncated.

"""

import dataclasses
import functools
import logging
import math
from typing import List, Optional, Sequence

import numpy as np
from scipy.stats import poisson

from .analytic import SignalParams
from .channels import beamsplitter_block, loss_channel
from .common import LEAKAGE_TOL, MAX_CUTOFF, MAX_EXACT_ALPHA, Mode
from .exceptions import CutoffTooSmallError, InvalidParameterError
from .fock import (DensityOperator, FockVector, OperatorMatrix, TwoModeState, apply_number_conserving, boundary_weight,
                   coherent_state, displacement_operator, escalate_cutoff, fidelity, fock_state, partial_trace,
                   recommended_cutoff, squeeze_operator, squeezed_fock_state, tensor)


@dataclasses.dataclass(frozen=True)
class InterferometerConfig:
    """
    Layout of one interferometer run.

    Cutoffs left at ``None`` are chosen by :func:`fockgate.fock.recommended_cutoff` and escalated
    automatically; an explicit cutoff that turns out too small raises :exc:`CutoffTooSmallError`.
    """
    signal: SignalParams
    cutoff_dark: Optional[int] = None  #: Basis size of the dark-port mode
    cutoff_bright: Optional[int] = None  #: Basis size of the bright-port mode (exact model only)
    apply_antisqueeze: bool = True  #: Whether the second amplifier ``S(-r)`` follows the interferometer

    def __post_init__(self):
        for name in ("cutoff_dark", "cutoff_bright"):
            value = getattr(self, name)
            if value is not None and (int(value) != value or not 1 <= value <= MAX_CUTOFF):
                raise InvalidParameterError(f"{name} must be an integer in [1, {MAX_CUTOFF}], got {value!r}")

    def replace(self, **changes) -> "InterferometerConfig":
        return dataclasses.replace(self, **changes)

    def default_cutoff_dark(self) -> int:
        s = self.signal
        return recommended_cutoff(s.beta, s.r, s.n)


# ------------------------------------------------------------------------
# Asymptotic model
# ------------------------------------------------------------------------

def dark_port_state_asymptotic(config: InterferometerConfig, tol: float = LEAKAGE_TOL) -> FockVector:
    """
    ``D(beta) S(r)|n>``, followed by ``S(-r)`` when ``apply_antisqueeze`` is set.

    With the amplifier pair the result equals ``D(beta e^r)|n>`` for the imaginary ``beta``.
    """
    s = config.signal

    def build(cutoff: int) -> FockVector:
        squeezed = s.r != 0
        psi = squeezed_fock_state(s.n, s.r, cutoff, tol) if squeezed else fock_state(s.n, cutoff)
        psi = displacement_operator(s.beta, cutoff) @ psi
        if squeezed and config.apply_antisqueeze:
            psi = squeeze_operator(-s.r, cutoff) @ psi
        _check_truncation(psi, cutoff, tol, squeezed)
        return psi

    if config.cutoff_dark is not None:
        return build(config.cutoff_dark)
    return escalate_cutoff(build, config.default_cutoff_dark())


def _check_truncation(state, cutoff: int, tol: float, squeezed: bool):
    error = max(state.leakage, boundary_weight(state) if squeezed else 0.0)
    if error >= tol:
        raise CutoffTooSmallError(f"dark-port state loses {error:.2e} to truncation at cutoff {cutoff}")


# ------------------------------------------------------------------------
# Exact two-mode model
# ------------------------------------------------------------------------

@functools.lru_cache(maxsize=4096)
def mach_zehnder_block(phi: float, total: int) -> np.ndarray:
    """Interferometer unitary on the sector with ``total`` photons, basis ``|j>_bright |total-j>_dark``."""
    splitter = beamsplitter_block(math.pi / 4, total)
    j = np.arange(total + 1)
    phase = np.exp(1j * phi * (2 * j - total))
    block = splitter.T @ (phase[:, None] * splitter)
    block.flags.writeable = False
    return block


def mach_zehnder(state: TwoModeState, phi: float) -> TwoModeState:
    """Exact interferometer acting on a bright ⊗ dark input; no amplitude is dropped."""
    return apply_number_conserving(state, lambda total: mach_zehnder_block(phi, total))


def bright_cutoff(alpha: float, tol: float = LEAKAGE_TOL) -> int:
    """
    Basis size of the bright mode that loses at most ``tol * 1e-4`` of the Poisson weight of ``|alpha>``.

    The bright mode is traced out, so its lost weight is the infidelity of the reduced dark-port
    state at ``phi = 0``.
    """
    mean = abs(alpha) ** 2
    if mean == 0:
        return 1
    return int(poisson.isf(tol * 1e-4, mean)) + 1


def unsqueeze(rho: DensityOperator, r: float) -> DensityOperator:
    """``S(-r) rho S(r)`` on at most :data:`fockgate.common.MAX_CUTOFF` basis states; cut weight becomes leakage."""
    rho = rho.truncated(min(rho.cutoff, MAX_CUTOFF))
    return squeeze_operator(-r, rho.cutoff).conjugate(rho)


def exact_input_state(config: InterferometerConfig, tol: float = LEAKAGE_TOL) -> TwoModeState:
    """
    ``|alpha>_bright ⊗ S(r)|n>_dark``.

    Raises:
        InvalidParameterError: ``alpha`` beyond :data:`fockgate.common.MAX_EXACT_ALPHA`.

    """
    s = config.signal
    if s.alpha > MAX_EXACT_ALPHA:
        raise InvalidParameterError(f"exact model limited to alpha <= {MAX_EXACT_ALPHA}, got {s.alpha!r}")
    cutoff_bright = config.cutoff_bright or bright_cutoff(s.alpha, tol)
    cutoff_dark = config.cutoff_dark or config.default_cutoff_dark()
    bright = coherent_state(s.alpha, cutoff_bright, tol)
    dark = squeezed_fock_state(s.n, s.r, cutoff_dark, tol) if s.r != 0 else fock_state(s.n, cutoff_dark)
    return tensor(bright, dark)


def dark_port_state_exact(config: InterferometerConfig, tol: float = LEAKAGE_TOL) -> DensityOperator:
    """
    Reduced dark-port state of the exact interferometer at finite ``alpha``.

    The bright output is traced out; ``S(-r)`` is applied to the reduced state when
    ``apply_antisqueeze`` is set, and the result is truncated to the dark cutoff with the
    dropped weight reported as leakage.
    """
    s = config.signal

    def build(cutoff_dark: int) -> DensityOperator:
        state = mach_zehnder(exact_input_state(config.replace(cutoff_dark=cutoff_dark), tol), s.phi)
        rho = partial_trace(state, Mode.SECOND)
        if s.r != 0 and config.apply_antisqueeze:
            rho = unsqueeze(rho, s.r)
        logging.debug("exact dark port: %d sectors, reduced to cutoff %d", rho.cutoff, cutoff_dark)
        rho = rho.truncated(cutoff_dark)
        _check_truncation(rho, cutoff_dark, tol, squeezed=False)
        return rho

    if config.cutoff_dark is not None:
        return build(config.cutoff_dark)
    return escalate_cutoff(build, config.default_cutoff_dark())


def dark_port_state_reference(config: InterferometerConfig) -> DensityOperator:
    """
    Closed-form counterpart of :func:`dark_port_state_exact`.

    With the bright port in a coherent state the interferometer acts on the dark input as the loss
    channel of transmissivity ``cos(phi)^2`` followed by the displacement ``D(i alpha sin(phi))``.
    """
    s = config.signal
    cutoff = config.cutoff_dark or config.default_cutoff_dark()
    psi = squeezed_fock_state(s.n, s.r, cutoff) if s.r != 0 else fock_state(s.n, cutoff)
    rho = loss_channel(math.cos(s.phi) ** 2, cutoff)(psi.to_density())
    if math.cos(s.phi) < 0:
        rho = OperatorMatrix(np.diag((-1.0) ** np.arange(cutoff))).conjugate(rho)
    rho = displacement_operator(1j * s.alpha * math.sin(s.phi), cutoff).conjugate(rho)
    if s.r != 0 and config.apply_antisqueeze:
        rho = squeeze_operator(-s.r, cutoff).conjugate(rho)
    return rho


def asymptotic_convergence_check(alpha_list: Sequence[float], alpha_phi: float, n: int = 1, r: float = 0.0,
                                 apply_antisqueeze: bool = False, cutoff: Optional[int] = None) -> List[float]:
    """
    Fidelity ``<psi|rho|psi>`` between the asymptotic state ``psi`` and the exact reduced state
    ``rho`` for every ``alpha`` in ``alpha_list`` at fixed ``alpha*phi``.

    Raises:
        InvalidParameterError: ``alpha_list`` empty, not ascending or not positive.

    """
    alphas = [float(a) for a in alpha_list]
    if not alphas or alphas[0] <= 0 or any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise InvalidParameterError(f"alpha_list must be positive and strictly ascending, got {alpha_list!r}")
    cutoff = cutoff or recommended_cutoff(1j * alpha_phi, r, n)
    fidelities = []
    for alpha in alphas:
        signal = SignalParams(alpha=alpha, phi=alpha_phi / alpha, r=r, n=n)
        config = InterferometerConfig(signal, cutoff_dark=cutoff, apply_antisqueeze=apply_antisqueeze)
        value = fidelity(dark_port_state_asymptotic(config), dark_port_state_exact(config))
        logging.debug("alpha=%r: fidelity %r", alpha, value)
        fidelities.append(value)
    return fidelities
