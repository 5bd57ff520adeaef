import math

import numpy as np
import pytest

from fockgate import (SignalParams, ErrorReport, Method, InvalidParameterError, laguerre, laguerre_roots,
                      displaced_fock_overlap, p_fn_fock, p_fn_vacuum, p_fn_lossy, p_fp_lossy, poisson_count_prob,
                      analytic_error_report, optimal_operating_point, single_photon_lobe, detection_gain,
                      sensitivity_bounds)
from fockgate.analytic import laguerre_roots_bisection, laguerre_table


def test_laguerre_low_orders():
    x = np.linspace(0, 10, 11)
    assert np.allclose(laguerre(0, 0, x), 1.0)
    assert np.allclose(laguerre(1, 0, x), 1 - x)
    assert np.allclose(laguerre(2, 0, x), (x**2 - 4*x + 2) / 2)
    assert np.allclose(laguerre(1, 3, x), 4 - x)
    assert laguerre(1, 0, 1.0) == 0.0
    assert isinstance(laguerre(3, 0, 0.5), float)


def test_laguerre_table_matches_scalar():
    table = laguerre_table(6, 5, 2.5)
    for j in range(7):
        for k in range(6):
            assert table[j, k] == pytest.approx(laguerre(j, k, 2.5), rel=1e-12, abs=1e-12)


def test_laguerre_negative_degree():
    with pytest.raises(InvalidParameterError):
        laguerre(-1, 0, 1.0)


def test_laguerre_roots_n2():
    roots = laguerre_roots(2)
    assert roots == pytest.approx([2 - math.sqrt(2), 2 + math.sqrt(2)], abs=1e-12)


def test_laguerre_roots_n1():
    assert laguerre_roots(1) == pytest.approx([1.0], abs=1e-14)


@pytest.mark.parametrize("n", [3, 5, 8, 12])
def test_laguerre_roots_against_bisection(n):
    roots = laguerre_roots(n, tol=1e-6)
    assert len(roots) == n
    assert all(b > a > 0 for a, b in zip(roots, roots[1:]))
    assert roots == pytest.approx(laguerre_roots_bisection(n), abs=1e-9)


def test_bisection_root_on_a_grid_node():
    # L_1 vanishes at x = 1, which is a node of the scan grid
    assert laguerre_roots_bisection(1) == [1.0]
    for n in range(1, 9):
        roots = laguerre_roots_bisection(n)
        assert len(roots) == n
        assert roots == pytest.approx(laguerre_roots(n, tol=1e-6), abs=1e-9)


def test_laguerre_roots_bad_input():
    with pytest.raises(InvalidParameterError):
        laguerre_roots(0)
    with pytest.raises(InvalidParameterError):
        laguerre_roots(3, tol=0)


def test_ideal_single_photon_vanishes_at_unit_displacement():
    assert p_fn_fock(1, 1.0) == pytest.approx(0.0, abs=1e-10)
    assert p_fn_fock(1, 1j) == pytest.approx(0.0, abs=1e-10)
    assert displaced_fock_overlap(1, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_vacuum_reference():
    assert p_fn_vacuum(1.0) == pytest.approx(0.3678794412, abs=1e-10)
    assert p_fn_vacuum(0.0) == 1.0
    assert p_fn_fock(0, 1.0) == pytest.approx(p_fn_vacuum(1.0), abs=1e-15)


def test_overlap_at_zero_displacement():
    for n in range(6):
        assert displaced_fock_overlap(n, 0.0) == pytest.approx(1.0)


def test_n2_orthogonality_at_laguerre_roots():
    for x in (2 - math.sqrt(2), 2 + math.sqrt(2)):
        assert p_fn_fock(2, math.sqrt(x)) == pytest.approx(0.0, abs=1e-12)


def test_lossy_optimum_values():
    assert p_fn_lossy(1.0, 0.95) == pytest.approx(0.05 / math.e, abs=1e-12)
    assert p_fn_lossy(1.0, 0.95) == pytest.approx(0.0183940, abs=1e-7)
    assert p_fp_lossy(0.95) == pytest.approx(0.05, abs=1e-12)
    assert p_fn_lossy(0.7, 1.0) == pytest.approx(p_fn_fock(1, 0.7), abs=1e-15)


def test_detection_gain():
    gain = p_fn_vacuum(1.0) / p_fn_lossy(1.0, 0.95)
    assert gain == pytest.approx(20.0, rel=1e-10)
    assert gain >= 10
    assert detection_gain(0.95) == pytest.approx(20.0, rel=1e-10)
    assert detection_gain(1.0) == math.inf


def test_poisson_count_prob():
    assert poisson_count_prob(2, 1.0) == pytest.approx(math.exp(-1) / 2, abs=1e-15)
    assert poisson_count_prob(0, 0.0) == 1.0
    assert poisson_count_prob(3, 0.0) == 0.0
    assert sum(poisson_count_prob(k, 1.3) for k in range(60)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(InvalidParameterError):
        poisson_count_prob(-1, 1.0)


def test_eta_out_of_range():
    with pytest.raises(InvalidParameterError):
        p_fn_lossy(1.0, 1.5)
    with pytest.raises(InvalidParameterError):
        p_fp_lossy(-0.1)


def test_analytic_error_report():
    report = analytic_error_report(1, 1.0, 0.95)
    assert report.method is Method.ANALYTIC
    assert report.p_false_negative == pytest.approx(0.05 / math.e)
    assert report.p_false_positive == pytest.approx(0.05)

    vacuum = analytic_error_report(0, 1.0, 0.95)
    assert vacuum.p_false_negative == pytest.approx(math.exp(-1))
    assert vacuum.p_false_positive == 0.0

    assert analytic_error_report(2, math.sqrt(2 - math.sqrt(2)), 1.0).p_false_negative == pytest.approx(0, abs=1e-12)

    with pytest.raises(InvalidParameterError):
        analytic_error_report(2, 1.0, 0.9)


def test_optimal_operating_point_lossy():
    beta_eta, phi, p_min = optimal_operating_point(0.95, r=0.0, alpha=1e4)
    assert beta_eta == pytest.approx(1.0, abs=1e-8)
    assert p_min == pytest.approx(0.0183940, abs=1e-7)
    assert phi == pytest.approx(1 / (math.sqrt(0.95) * 1e4), rel=1e-8)


def test_optimal_operating_point_squeezed():
    optimum = optimal_operating_point(1.0, r=1.0, alpha=100)
    assert optimum.beta_eta == pytest.approx(1.0, abs=1e-8)
    assert optimum.phi == pytest.approx(math.exp(-1) / 100, rel=1e-8)
    assert optimum.phi == pytest.approx(3.678794e-3, abs=1e-9)


@pytest.mark.parametrize("eta", [0.4, 0.6, 0.8, 0.99, 1.0])
def test_optimum_is_unit_displacement_above_one_third(eta):
    assert optimal_operating_point(eta, 0.0, 1.0).beta_eta == pytest.approx(1.0, abs=1e-8)


def test_optimal_operating_point_degenerate():
    with pytest.raises(InvalidParameterError):
        optimal_operating_point(0.0, 0.0, 1.0)
    for eta in (0.2, 0.25, 1 / 3):
        with pytest.raises(InvalidParameterError):
            optimal_operating_point(eta, 0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        optimal_operating_point(0.9, 0.0, 0.0)


@pytest.mark.parametrize("eta", [0.26, 0.3, 0.32])
def test_optimum_between_one_quarter_and_one_third(eta):
    x_min, x_max = single_photon_lobe(eta)
    assert x_max == 1.0
    assert x_min == pytest.approx((4 * eta - 1) / eta)
    optimum = optimal_operating_point(eta, 0.0, 1.0)
    assert optimum.beta_eta == pytest.approx(math.sqrt(x_min), abs=1e-8)
    assert optimum.p_fn_min < p_fn_lossy(0.0, eta)
    assert optimum.p_fn_min < p_fn_lossy(1.0, eta)
    for scale in (0.98, 1.02):
        assert optimum.p_fn_min <= p_fn_lossy(scale * optimum.beta_eta, eta)


def test_single_photon_lobe_above_one_third():
    assert single_photon_lobe(0.95) == pytest.approx((1.0, 2.8 / 0.95))


def test_min_p_fn_decreases_with_eta():
    minima = [optimal_operating_point(eta, 0.0, 1.0).p_fn_min for eta in (0.5, 0.7, 0.9, 0.95, 0.99)]
    assert all(b < a for a, b in zip(minima, minima[1:]))
    fps = [p_fp_lossy(eta) for eta in (0.5, 0.7, 0.9, 0.95, 0.99)]
    assert all(b < a for a, b in zip(fps, fps[1:]))


def test_signal_params():
    params = SignalParams(alpha=1e4, phi=1e-4, n=1, eta=0.95)
    assert params.beta == pytest.approx(1j)
    assert params.displacement.beta_eta == pytest.approx(1j * math.sqrt(0.95))

    params = SignalParams.from_beta_eta(1.0, eta=0.95, r=0.5, alpha=100)
    assert abs(params.displacement.beta_eta) == pytest.approx(1.0, rel=1e-12)
    assert params.replace(phi=0.0).beta == 0


def test_signal_params_invalid():
    with pytest.raises(InvalidParameterError):
        SignalParams(alpha=-1.0)
    with pytest.raises(InvalidParameterError):
        SignalParams(n=-1)
    with pytest.raises(InvalidParameterError):
        SignalParams(eta=1.1)
    with pytest.raises(InvalidParameterError):
        SignalParams.from_beta_eta(1.0, eta=0.0)
    assert SignalParams.from_beta_eta(0.0, eta=0.0).phi == 0.0


def test_error_report_invariants():
    with pytest.raises(InvalidParameterError):
        ErrorReport(1.2, 0.0)
    with pytest.raises(InvalidParameterError):
        ErrorReport(0.1, 0.0, Method.EMPIRICAL)
    with pytest.raises(InvalidParameterError):
        ErrorReport(0.1, 0.0, Method.ANALYTIC, trials=10, std_err=(0.1, 0.0))
    report = ErrorReport(0.1, 0.2, "empirical", trials=10, std_err=[0.01, 0.02])
    assert report.method is Method.EMPIRICAL
    assert report.std_err == (0.01, 0.02)
    assert report.as_dict()["trials"] == 10


def test_sensitivity_bounds():
    bounds = sensitivity_bounds(100, r=1.0)
    assert bounds.snl == pytest.approx(0.1)
    assert bounds.squeezed_snl == pytest.approx(0.1 * math.exp(-1))
    assert bounds.heisenberg == pytest.approx(0.01)
    with pytest.raises(InvalidParameterError):
        sensitivity_bounds(0.5)
