"""
Oracle-equivalence suites.

Every check compares two independent computations of the same quantity and records the
measured deviation next to its tolerance. ``fockgate verify`` runs these suites.

"""

import dataclasses
import logging
import math
from typing import Callable, Dict, List, Sequence

import numpy as np

from .analytic import (SignalParams, displaced_fock_overlap, laguerre_roots, laguerre_roots_bisection,
                       p_fn_fock, poisson_count_prob)
from .channels import apply_loss_dilation, apply_loss_kraus, loss_channel, lossy_mixture_analytic
from .exceptions import InvalidParameterError, VerificationError
from .fock import (conjugated_displacement, cutoff_for_distance, displaced_fock_state, displacement_operator,
                   fidelity, fock_state, inner_product, interior_size, recommended_cutoff, squeeze_operator,
                   trace_distance)
from .interferometer import (InterferometerConfig, asymptotic_convergence_check, dark_port_state_asymptotic,
                             dark_port_state_exact, dark_port_state_reference)

#: Lowest accepted exact-vs-asymptotic fidelity at alpha = 6, alpha*phi = 1 (closed form: 0.97242).
CONVERGENCE_FIDELITY = 0.97


@dataclasses.dataclass(frozen=True)
class Check:
    suite: str
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.deviation) and self.deviation <= self.tolerance

    def as_dict(self):
        return {"suite": self.suite, "name": self.name, "deviation": self.deviation,
                "tolerance": self.tolerance, "passed": self.passed}


def _max_abs(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def suite_laguerre() -> List[Check]:
    checks = [Check("laguerre", "L_2 roots 2 -+ sqrt(2)", _max_abs(laguerre_roots(2), [2 - math.sqrt(2), 2 + math.sqrt(2)]), 1e-12)]
    for n in range(1, 9):
        checks.append(Check("laguerre", f"L_{n} roots: eigenvalues vs bisection",
                            _max_abs(laguerre_roots(n, tol=1e-6), laguerre_roots_bisection(n)), 1e-9))
    return checks


def suite_overlaps() -> List[Check]:
    cutoff = 64
    checks = []
    for n in range(4):
        overlap_dev = pmf_dev = 0.0
        for x in np.linspace(0.0, 6.0, 13):
            beta = 1j * math.sqrt(x)
            state = displaced_fock_state(n, beta, cutoff)
            overlap_dev = max(overlap_dev, abs(inner_product(fock_state(n, cutoff), state) - displaced_fock_overlap(n, beta)))
            pmf_dev = max(pmf_dev, abs(state.photon_pmf()[n] - p_fn_fock(n, beta)))
        checks.append(Check("overlaps", f"<{n}|D(beta)|{n}> vs Laguerre closed form", overlap_dev, 1e-8))
        checks.append(Check("overlaps", f"pmf of D(beta)|{n}> at {n} vs p_fn_fock", pmf_dev, 1e-8))
    return checks


def suite_displacement() -> List[Check]:
    cutoff = 128
    checks = []
    for beta in (0.5, 1.0 + 1.0j, 2.0j, 3.0):
        k = interior_size(cutoff, abs(beta))
        analytic = displacement_operator(beta, cutoff).matrix[:k, :k]
        oracle = displacement_operator(beta, cutoff, method="expm").matrix[:k, :k]
        checks.append(Check("displacement", f"analytic vs expm, beta={beta}", _max_abs(analytic, oracle), 1e-8))

    beta1, beta2 = 0.7 + 0.2j, -0.3 + 0.5j
    k = interior_size(cutoff, abs(beta1) + abs(beta2))
    product = (displacement_operator(beta1, cutoff) @ displacement_operator(beta2, cutoff)).matrix[:k, :k]
    combined = np.exp(1j * (beta1 * beta2.conjugate()).imag) * displacement_operator(beta1 + beta2, cutoff).matrix[:k, :k]
    checks.append(Check("displacement", "D(b1) D(b2) = exp(i Im(b1 b2*)) D(b1 + b2)", _max_abs(product, combined), 1e-8))
    return checks


def suite_squeeze() -> List[Check]:
    r, cutoff, block = 0.5, 96, 6
    squeeze, unsqueeze = squeeze_operator(r, cutoff), squeeze_operator(-r, cutoff)
    k = interior_size(cutoff, 0.0, r)
    checks = [Check("squeeze", "S(-r) S(r) = I", _max_abs((unsqueeze @ squeeze).matrix[:k, :k], np.eye(k)), 1e-8)]

    beta = 0.5j
    conjugated = (unsqueeze @ displacement_operator(beta, cutoff) @ squeeze).matrix[:block, :block]
    direct = displacement_operator(conjugated_displacement(beta, r), cutoff).matrix[:block, :block]
    checks.append(Check("squeeze", "S^dagger D(beta) S = D(beta e^r)", _max_abs(conjugated, direct), 1e-8))

    for r in (0.25, 0.5, 1.0):
        signal = SignalParams(alpha=1.0, phi=1.5 * math.exp(-r), r=r, n=1)
        psi = dark_port_state_asymptotic(InterferometerConfig(signal))
        target = displaced_fock_state(1, conjugated_displacement(signal.beta, r), psi.cutoff)
        checks.append(Check("squeeze", f"S(-r) D(beta) S(r)|1> vs D(beta e^r)|1>, r={r}", 1.0 - fidelity(target, psi), 1e-8))
    return checks


def suite_kraus() -> List[Check]:
    checks = []
    for eta in (0.5, 0.9, 0.95, 1.0):
        worst = 0.0
        for n in range(4):
            for beta in (0.5, 1.5j):
                cutoff = recommended_cutoff(beta, 0.0, n)
                rho = displaced_fock_state(n, beta, cutoff).to_density()
                worst = max(worst, trace_distance(apply_loss_kraus(rho, loss_channel(eta, cutoff)),
                                                  apply_loss_dilation(rho, eta)))
        checks.append(Check("kraus", f"Kraus vs dilation, eta={eta}", worst, 1e-8))

    cutoff = 32
    rho = displaced_fock_state(2, 1.0, cutoff).to_density()
    twice = loss_channel(0.8, cutoff)(loss_channel(0.9, cutoff)(rho))
    once = loss_channel(0.8 * 0.9, cutoff)(rho)
    checks.append(Check("kraus", "loss(0.8) after loss(0.9) = loss(0.72)", trace_distance(twice, once), 1e-8))
    checks.append(Check("kraus", "completeness at eta=0.95", loss_channel(0.95, cutoff).completeness_deviation(), 1e-10))
    return checks


def suite_rho_eta() -> List[Check]:
    checks = []
    r = 0.5
    for gain_beta in (0.5, 1.0, 1.5):
        beta = 1j * gain_beta * math.exp(-r)
        cutoff = cutoff_for_distance(gain_beta, 0.0, 1)
        rho = displaced_fock_state(1, beta * math.exp(r), cutoff).to_density()
        for eta in (0.5, 0.9, 0.95):
            deviation = trace_distance(apply_loss_dilation(rho, eta), lossy_mixture_analytic(beta, r, eta, cutoff))
            checks.append(Check("rho-eta", f"dilation vs mixture, |beta e^r|={gain_beta}, eta={eta}", deviation, 1e-8))
    return checks


def suite_convergence() -> List[Check]:
    fidelities = asymptotic_convergence_check([2.0, 4.0, 6.0], 1.0)
    decrease = max(0.0, max(a - b for a, b in zip(fidelities, fidelities[1:])))
    checks = [Check("convergence", "fidelity non-decreasing in alpha", decrease, 0.0),
              Check("convergence", f"fidelity at alpha=6 >= {CONVERGENCE_FIDELITY}",
                    max(0.0, CONVERGENCE_FIDELITY - fidelities[-1]), 0.0)]

    closed_form = []
    for alpha in (2.0, 4.0, 6.0):
        phi = 1.0 / alpha
        shift = alpha * (phi - math.sin(phi))
        closed_form.append(math.cos(phi) ** 2 * p_fn_fock(1, shift) + math.sin(phi) ** 2 * poisson_count_prob(1, shift))
    checks.append(Check("convergence", "fidelities vs closed form", _max_abs(fidelities, closed_form), 1e-8))

    config = InterferometerConfig(SignalParams(alpha=4.0, phi=0.25, n=1))
    checks.append(Check("convergence", "exact model vs loss-and-displace reference",
                        trace_distance(dark_port_state_exact(config), dark_port_state_reference(config)), 1e-8))
    return checks


#: Suite name -> function returning its checks.
SUITES: Dict[str, Callable[[], List[Check]]] = {
    "laguerre": suite_laguerre,
    "overlaps": suite_overlaps,
    "displacement": suite_displacement,
    "squeeze": suite_squeeze,
    "kraus": suite_kraus,
    "rho-eta": suite_rho_eta,
    "convergence": suite_convergence,
}

SUITE_NAMES = list(SUITES.keys()) + ["all"]


def run_suites(names: Sequence[str], strict: bool = False) -> List[Check]:
    """
    Run the named suites (``"all"`` expands to every suite) and collect their checks.

    Raises:
        InvalidParameterError: unknown suite name.
        VerificationError: ``strict`` is set and some check failed.

    """
    selected: List[str] = []
    for name in names:
        if name == "all":
            selected.extend(SUITES)
        elif name in SUITES:
            selected.append(name)
        else:
            raise InvalidParameterError(f"unknown verification suite {name!r} (choose from {', '.join(SUITE_NAMES)})")

    checks: List[Check] = []
    for name in dict.fromkeys(selected):
        logging.debug("running suite %r", name)
        checks.extend(SUITES[name]())

    failed = [c for c in checks if not c.passed]
    if strict and failed:
        raise VerificationError(f"{len(failed)} of {len(checks)} checks failed, first: {failed[0].name}")
    return checks
