import math

import numpy as np
import pytest

from fockgate import (SignalParams, InterferometerConfig, dark_port_state_asymptotic, dark_port_state_exact,
                      asymptotic_convergence_check, fidelity, trace_distance, CutoffTooSmallError,
                      DensityOperator, InvalidParameterError)
from fockgate.analytic import p_fn_fock, poisson_count_prob
from fockgate.fock import (coherent_state, displaced_fock_state, fock_state, mean_total_photons, squeezed_fock_state,
                           conjugated_displacement)
from fockgate.common import MAX_CUTOFF
from fockgate.interferometer import (bright_cutoff, dark_port_state_reference, exact_input_state, mach_zehnder,
                                     mach_zehnder_block, unsqueeze)


def closed_form_fidelity(alpha, phi):
    shift = alpha * (phi - math.sin(phi))
    return math.cos(phi) ** 2 * p_fn_fock(1, shift) + math.sin(phi) ** 2 * poisson_count_prob(1, shift)


def test_no_phase_shift_leaves_input():
    psi = dark_port_state_asymptotic(InterferometerConfig(SignalParams(alpha=1e4, phi=0.0, n=2)))
    assert fidelity(fock_state(2, psi.cutoff), psi) == pytest.approx(1.0, abs=1e-12)


def test_unit_displacement_empties_reference_count():
    signal = SignalParams(alpha=1e4, phi=1e-4, n=1)
    psi = dark_port_state_asymptotic(InterferometerConfig(signal))
    assert psi.photon_pmf()[1] == pytest.approx(0.0, abs=1e-10)
    assert psi.leakage < 1e-10


def test_antisqueezed_unit_displacement():
    r = 0.5
    signal = SignalParams(alpha=100, phi=math.exp(-r) / 100, r=r, n=1)
    psi = dark_port_state_asymptotic(InterferometerConfig(signal))
    assert psi.photon_pmf()[1] == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize("r", [0.25, 0.5, 1.0])
def test_amplifier_pair_amplifies_displacement(r):
    signal = SignalParams(alpha=1.0, phi=1.5 * math.exp(-r), r=r, n=1)
    psi = dark_port_state_asymptotic(InterferometerConfig(signal))
    assert psi.cutoff <= 128
    target = displaced_fock_state(1, conjugated_displacement(signal.beta, r), psi.cutoff)
    assert abs(conjugated_displacement(signal.beta, r)) == pytest.approx(1.5)
    assert fidelity(target, psi) >= 1 - 1e-8


def test_without_antisqueeze_state_stays_squeezed():
    r = 0.5
    signal = SignalParams(alpha=1.0, phi=0.0, r=r, n=0)
    psi = dark_port_state_asymptotic(InterferometerConfig(signal, apply_antisqueeze=False))
    assert fidelity(squeezed_fock_state(0, r, psi.cutoff), psi) == pytest.approx(1.0, abs=1e-12)


def test_explicit_cutoff_too_small():
    signal = SignalParams(alpha=1.0, phi=3.0, n=1)
    with pytest.raises(CutoffTooSmallError):
        dark_port_state_asymptotic(InterferometerConfig(signal, cutoff_dark=12))


def test_config_validation():
    with pytest.raises(InvalidParameterError):
        InterferometerConfig(SignalParams(), cutoff_dark=0)
    with pytest.raises(InvalidParameterError):
        InterferometerConfig(SignalParams(), cutoff_bright=10_000)
    config = InterferometerConfig(SignalParams(alpha=1e4, phi=1e-4))
    assert config.default_cutoff_dark() == 18
    assert config.replace(cutoff_dark=30).cutoff_dark == 30


def test_mach_zehnder_block_is_unitary():
    for total in range(6):
        block = mach_zehnder_block(0.3, total)
        assert np.allclose(block.conj().T @ block, np.eye(total + 1), atol=1e-12)
    assert np.allclose(mach_zehnder_block(0.0, 4), np.eye(5), atol=1e-12)


def test_mach_zehnder_conserves_photons():
    config = InterferometerConfig(SignalParams(alpha=3.0, phi=0.3, r=0.2, n=1))
    state = exact_input_state(config)
    out = mach_zehnder(state, 0.3)
    assert mean_total_photons(out) == pytest.approx(mean_total_photons(state), rel=1e-10)
    assert out.leakage == pytest.approx(state.leakage, abs=1e-12)


def test_exact_without_pump_splits_the_photon():
    phi = 0.4
    rho = dark_port_state_exact(InterferometerConfig(SignalParams(alpha=0.0, phi=phi, n=1)))
    assert rho.photon_pmf()[:2] == pytest.approx([math.sin(phi) ** 2, math.cos(phi) ** 2], abs=1e-12)


def test_exact_without_phase_shift_is_squeezed_input():
    config = InterferometerConfig(SignalParams(alpha=3.0, phi=0.0, r=0.3, n=1), apply_antisqueeze=False)
    rho = dark_port_state_exact(config)
    assert fidelity(squeezed_fock_state(1, 0.3, rho.cutoff), rho) == pytest.approx(1.0, abs=1e-8)


def test_exact_fidelity_closed_form():
    fidelities = asymptotic_convergence_check([4.0], 1.0)
    assert fidelities[0] == pytest.approx(closed_form_fidelity(4.0, 0.25), abs=1e-8)
    assert fidelities[0] == pytest.approx(0.9385, abs=1e-4)


def test_exact_vacuum_input_is_coherent():
    alpha, phi = 4.0, 0.25
    config = InterferometerConfig(SignalParams(alpha=alpha, phi=phi, n=0))
    rho = dark_port_state_exact(config)
    target = coherent_state(1j * alpha * math.sin(phi), rho.cutoff)
    assert fidelity(target, rho) == pytest.approx(1.0, abs=1e-10)


def test_convergence_to_asymptotic_model():
    fidelities = asymptotic_convergence_check([2.0, 4.0, 6.0], 1.0)
    assert all(b >= a for a, b in zip(fidelities, fidelities[1:]))
    assert fidelities[-1] >= 0.97
    expected = [closed_form_fidelity(alpha, 1.0 / alpha) for alpha in (2.0, 4.0, 6.0)]
    assert fidelities == pytest.approx(expected, abs=1e-8)
    assert expected == pytest.approx([0.766635, 0.938494, 0.972417], abs=5e-6)


def test_convergence_at_zero_displacement():
    assert asymptotic_convergence_check([2.0, 4.0], 0.0) == pytest.approx([1.0, 1.0], abs=1e-12)


@pytest.mark.parametrize("alpha", [1.0, 4.0, 8.0])
def test_bright_cutoff_bounds_the_traced_out_weight(alpha):
    cutoff = bright_cutoff(alpha)
    assert coherent_state(alpha, cutoff).leakage < 1e-14
    assert cutoff <= MAX_CUTOFF
    assert bright_cutoff(0.0) == 1


def test_exact_model_at_zero_phase_keeps_the_photon():
    rho = dark_port_state_exact(InterferometerConfig(SignalParams(alpha=4.0, phi=0.0, n=1)))
    assert fidelity(fock_state(1, rho.cutoff), rho) == pytest.approx(1.0, abs=1e-12)


def test_unsqueeze_of_a_wide_reduced_state():
    D = 600
    psi = squeezed_fock_state(1, 0.5, 64)
    matrix = np.zeros((D, D), dtype=complex)
    matrix[:64, :64] = psi.to_density().matrix
    out = unsqueeze(DensityOperator(matrix), 0.5)
    assert out.cutoff == MAX_CUTOFF
    assert out.photon_pmf()[1] == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("r", [0.0, 0.5])
def test_exact_model_with_amplifier_pair(r):
    signal = SignalParams(alpha=4.0, phi=0.25 * math.exp(-r), r=r, n=1)
    config = InterferometerConfig(signal)
    rho = dark_port_state_exact(config)
    assert rho.leakage < 1e-8
    assert fidelity(dark_port_state_asymptotic(config), rho) > 0.9


def test_convergence_check_bad_alpha_list():
    with pytest.raises(InvalidParameterError):
        asymptotic_convergence_check([], 1.0)
    with pytest.raises(InvalidParameterError):
        asymptotic_convergence_check([4.0, 2.0], 1.0)
    with pytest.raises(InvalidParameterError):
        asymptotic_convergence_check([0.0, 2.0], 1.0)


def test_exact_model_pump_limit():
    with pytest.raises(InvalidParameterError):
        dark_port_state_exact(InterferometerConfig(SignalParams(alpha=9.0, phi=0.1)))


def test_exact_model_matches_reference():
    config = InterferometerConfig(SignalParams(alpha=4.0, phi=0.25, n=1))
    assert trace_distance(dark_port_state_exact(config), dark_port_state_reference(config)) < 1e-8


def test_exact_model_matches_reference_with_amplifiers():
    config = InterferometerConfig(SignalParams(alpha=4.0, phi=0.25, r=0.2, n=1))
    assert trace_distance(dark_port_state_exact(config), dark_port_state_reference(config)) < 1e-6


def test_exact_model_is_symmetric_in_phase():
    config = InterferometerConfig(SignalParams(alpha=3.0, phi=0.3, n=1), cutoff_dark=20)
    plus = dark_port_state_exact(config).photon_pmf()
    minus = dark_port_state_exact(config.replace(signal=config.signal.replace(phi=-0.3))).photon_pmf()
    assert np.allclose(plus, minus, atol=1e-12)
