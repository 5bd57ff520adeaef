import math

import numpy as np
import pytest

from fockgate import (DensityOperator, LossChannel, loss_channel, apply_loss_kraus, apply_loss_dilation,
                      lossy_mixture_analytic, coherent_state, fock_state, fidelity, trace_distance, Method, Mode,
                      CutoffTooSmallError, DimensionError, InvalidParameterError, NumericConvergenceError)
from fockgate.analytic import p_fn_lossy
from fockgate.channels import (apply_beamsplitter, apply_loss_dilation_pure, beamsplitter_block,
                               beamsplitter_unitary, transmissivity_angle)
from fockgate.experiment import sweep
from fockgate.fock import (annihilation_matrix, cutoff_for_distance, displaced_fock_state, mean_total_photons,
                           partial_trace, recommended_cutoff, squeezed_fock_state, tensor)


def test_loss_channel_is_complete():
    for eta in (0.0, 0.3, 0.95, 1.0):
        channel = loss_channel(eta, 24)
        assert channel.completeness_deviation() < 1e-10
        assert len(channel.kraus_ops) == 24


def test_loss_channel_rejects_incomplete_kraus_set():
    with pytest.raises(NumericConvergenceError):
        LossChannel(0.5, 2, (np.array([0.5, 0.5]), np.array([0.5])))
    with pytest.raises(DimensionError):
        LossChannel(1.0, 2, (np.ones(3),))
    with pytest.raises(InvalidParameterError):
        loss_channel(1.5, 4)


def test_unit_efficiency_is_identity():
    rho = displaced_fock_state(1, 0.8j, 24).to_density()
    out = loss_channel(1.0, 24)(rho)
    assert np.allclose(out.matrix, rho.matrix, atol=1e-14)


def test_zero_efficiency_gives_vacuum():
    rho = displaced_fock_state(2, 1.0, 32).to_density()
    out = loss_channel(0.0, 32)(rho)
    assert out.photon_pmf()[0] == pytest.approx(1.0, abs=1e-10)


def test_single_photon_loss():
    rho = fock_state(1, 4).to_density()
    out = apply_loss_kraus(rho, loss_channel(0.7, 4))
    assert out.photon_pmf()[:2] == pytest.approx([0.3, 0.7])


def test_loss_keeps_coherent_states_pure():
    D = 40
    gamma = 1.5 - 0.5j
    eta = 0.8
    out = loss_channel(eta, D)(coherent_state(gamma, D).to_density())
    assert fidelity(coherent_state(math.sqrt(eta) * gamma, D), out) == pytest.approx(1.0, abs=1e-10)


def test_loss_preserves_trace_and_positivity():
    rho = displaced_fock_state(3, 1.2 + 0.4j, 48).to_density()
    out = loss_channel(0.6, 48)(rho)
    assert out.trace == pytest.approx(rho.trace, abs=1e-12)
    assert out.min_eigenvalue() > -1e-9
    out.check_positive()


def test_loss_composition():
    D = 32
    rho = displaced_fock_state(2, 1.0, D).to_density()
    twice = loss_channel(0.8, D)(loss_channel(0.9, D)(rho))
    once = loss_channel(0.72, D)(rho)
    assert trace_distance(twice, once) < 1e-10


def test_loss_cutoff_mismatch():
    with pytest.raises(DimensionError):
        apply_loss_kraus(fock_state(1, 5).to_density(), loss_channel(0.9, 6))


def test_kraus_operators_match_diagonals():
    channel = loss_channel(0.7, 6)
    a2 = channel.kraus_operator(2).matrix
    assert a2[1, 3] == pytest.approx(math.sqrt(3 * 0.7 * 0.3 ** 2))
    assert np.count_nonzero(a2) == 4
    dense = sum(op.matrix.T @ op.matrix for op in channel.kraus_ops)
    assert np.allclose(dense, np.eye(6), atol=1e-12)
    rho = displaced_fock_state(1, 0.6 + 0.2j, 6).to_density()
    by_sum = sum(op.matrix @ rho.matrix @ op.matrix.T for op in channel.kraus_ops)
    assert np.allclose(channel(rho).matrix, by_sum, atol=1e-14)


def test_loss_channel_at_large_cutoff():
    D = 400
    channel = loss_channel(0.9, D)
    assert sum(d.size for d in channel.diagonals) == D * (D + 1) // 2
    assert channel.completeness_deviation() < 1e-10
    rho = displaced_fock_state(2, 6.0, D).to_density()
    out = channel(rho)
    assert out.trace == pytest.approx(rho.trace, abs=1e-10)
    assert out.photon_pmf() @ np.arange(D) == pytest.approx(0.9 * (rho.photon_pmf() @ np.arange(D)), rel=1e-10)


def test_sweep_with_strong_squeezing():
    rows = sweep([0.5, 1.0], n=2, eta=0.9, r=1.5)
    assert len(rows) == 2
    for row in rows:
        assert row.method is Method.NUMERIC
        assert 0.0 <= row.p_fn <= 1.0


def test_beamsplitter_block_is_unitary():
    theta = transmissivity_angle(0.7)
    for total in range(8):
        block = beamsplitter_block(theta, total)
        assert np.allclose(block.conj().T @ block, np.eye(total + 1), atol=1e-12)
    assert not beamsplitter_block(theta, 3).flags.writeable


def test_beamsplitter_identity_at_full_transmission():
    assert np.allclose(beamsplitter_unitary(1.0, 3, 3).matrix, np.eye(9))


def test_beamsplitter_splits_a_photon():
    state = tensor(fock_state(1, 2), fock_state(0, 2))
    out = apply_beamsplitter(state, 0.7)
    assert partial_trace(out, Mode.FIRST).photon_pmf()[:2] == pytest.approx([0.3, 0.7])


def test_beamsplitter_heisenberg_convention():
    # a coherent input leaves as |sqrt(eta) gamma> and |-sqrt(1 - eta) gamma>
    eta, gamma = 0.6, 1.2
    out = apply_beamsplitter(tensor(coherent_state(gamma, 24), fock_state(0, 2)), eta)
    first, second = partial_trace(out, Mode.FIRST), partial_trace(out, Mode.SECOND)
    a_first = annihilation_matrix(first.cutoff).matrix
    a_second = annihilation_matrix(second.cutoff).matrix
    assert np.trace(first.matrix @ a_first) == pytest.approx(math.sqrt(eta) * gamma, abs=1e-10)
    assert np.trace(second.matrix @ a_second) == pytest.approx(-math.sqrt(1 - eta) * gamma, abs=1e-10)


def test_beamsplitter_conserves_photons():
    state = tensor(coherent_state(1.5j, 32), displaced_fock_state(1, 0.5, 24))
    out = apply_beamsplitter(state, 0.35)
    assert mean_total_photons(out) == pytest.approx(mean_total_photons(state), rel=1e-10)


def test_dense_beamsplitter_matches_sectors():
    unitary = beamsplitter_unitary(0.6, 4, 4)
    assert unitary.unitarity_deviation() < 1e-12
    state = tensor(fock_state(1, 4), fock_state(1, 4))
    by_sector = apply_beamsplitter(state, 0.6, cutoffs=(4, 4))
    dense = unitary.matrix @ state.amplitudes.reshape(-1)
    assert np.allclose(dense, by_sector.amplitudes.reshape(-1), atol=1e-12)


def test_dilation_limits():
    rho = displaced_fock_state(1, 0.7j, 24).to_density()
    assert np.allclose(apply_loss_dilation(rho, 1.0).matrix, rho.matrix, atol=1e-12)
    assert apply_loss_dilation(rho, 0.0).photon_pmf()[0] == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("eta", [0.5, 0.9, 0.95])
@pytest.mark.parametrize("n, beta", [(0, 0.5), (1, 1.5j), (2, 1.0 + 0.5j), (3, 0.5)])
def test_kraus_matches_dilation(eta, n, beta):
    cutoff = recommended_cutoff(beta, 0.0, n)
    rho = displaced_fock_state(n, beta, cutoff).to_density()
    kraus = apply_loss_kraus(rho, loss_channel(eta, cutoff))
    assert trace_distance(kraus, apply_loss_dilation(rho, eta)) < 1e-8


def test_dilation_of_pure_state():
    psi = displaced_fock_state(1, 1j, 24)
    assert trace_distance(apply_loss_dilation_pure(psi, 0.8), apply_loss_dilation(psi.to_density(), 0.8)) < 1e-10


def test_dilation_environment_cutoff():
    rho = fock_state(2, 6).to_density()
    with pytest.raises(CutoffTooSmallError):
        apply_loss_dilation(rho, 0.5, env_cutoff=4)
    larger = apply_loss_dilation(rho, 0.5, env_cutoff=10)
    assert trace_distance(larger, apply_loss_dilation(rho, 0.5)) < 1e-12


@pytest.mark.parametrize("r", [0.0, 0.5, 1.0, 2.0])
@pytest.mark.parametrize("gain_beta", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("eta", [0.5, 0.9, 0.95])
def test_dilation_matches_lossy_mixture(r, gain_beta, eta):
    beta = 1j * gain_beta * math.exp(-r)
    cutoff = cutoff_for_distance(gain_beta, 0.0, 1)
    assert cutoff <= 96
    rho = displaced_fock_state(1, beta * math.exp(r), cutoff).to_density()
    assert trace_distance(apply_loss_dilation(rho, eta), lossy_mixture_analytic(beta, r, eta, cutoff)) < 1e-8


def test_lossy_mixture_false_negative_probability():
    eta = 0.95
    rho = lossy_mixture_analytic(1j / math.sqrt(eta), 0.0, eta, 32)
    assert rho.photon_pmf()[1] == pytest.approx(p_fn_lossy(1.0, eta), abs=1e-12)
    assert rho.photon_pmf()[1] == pytest.approx(0.05 / math.e, abs=1e-12)
    assert rho.trace == pytest.approx(1.0, abs=1e-12)
    assert isinstance(rho, DensityOperator)


def test_lossy_mixture_without_loss_is_pure():
    psi = displaced_fock_state(1, 0.9j, 32)
    rho = lossy_mixture_analytic(0.9j, 0.0, 1.0, 32)
    assert fidelity(psi, rho) == pytest.approx(1.0, abs=1e-12)


def test_distance_sized_cutoff_resolves_truncation():
    rho = displaced_fock_state(1, 1j, cutoff_for_distance(1.0, 0.0, 1)).to_density()
    mixture = lossy_mixture_analytic(1j, 0.0, 0.9, rho.cutoff)
    assert trace_distance(apply_loss_dilation(rho, 0.9), mixture) < 1e-8
    assert cutoff_for_distance(1.0, 0.0, 1) > recommended_cutoff(1.0, 0.0, 1)
    with pytest.raises(InvalidParameterError):
        cutoff_for_distance(1.0, distance=0.0)


@pytest.mark.parametrize("r", [0.0, 0.5, 1.0])
def test_kraus_matches_dilation_on_squeezed_photons(r):
    cutoff = recommended_cutoff(0.0, r, 1)
    psi = squeezed_fock_state(1, r, cutoff)
    kraus = loss_channel(0.9, cutoff)(psi.to_density())
    assert trace_distance(kraus, apply_loss_dilation_pure(psi, 0.9)) < 1e-8
