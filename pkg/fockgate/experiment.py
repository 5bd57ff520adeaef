"""
The detection protocol: count photons at the dark port and decide.

A run declares "no signal" exactly when the detector registers the reference count ``n_ref``
(the photon number of the dark-port input) and "signal" otherwise. The error probabilities of
this rule are obtained in closed form (:mod:`fockgate.analytic`), from truncated Fock-space states
(:func:`error_probabilities_numeric`) or by sampling (:func:`monte_carlo`).

"""

import concurrent.futures
import dataclasses
import logging
import math
import os
from typing import Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple, TypeVar

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .analytic import (ErrorReport, SignalParams, analytic_error_report, check_eta, laguerre_roots,
                       optimal_operating_point, p_fn_lossy, single_photon_lobe)
from .channels import loss_channel
from .common import Hypothesis, Method
from .exceptions import InvalidParameterError
from .interferometer import InterferometerConfig, dark_port_state_asymptotic, dark_port_state_exact

T = TypeVar("T")
R = TypeVar("R")

#: Monte-Carlo trials per worker task.
TRIAL_BLOCK = 10_000

#: Optimiser minima closer than this are considered tied.
TIE_TOL = 1e-12


@dataclasses.dataclass(frozen=True)
class DecisionRule:
    """Count equal to ``n_ref`` means no signal; any other count (including overflow) means signal."""
    n_ref: int = 1

    def __post_init__(self):
        if int(self.n_ref) != self.n_ref or self.n_ref < 0:
            raise InvalidParameterError(f"n_ref must be a non-negative integer, got {self.n_ref!r}")

    def __call__(self, count: int) -> Hypothesis:
        return decide(count, self)


@dataclasses.dataclass(frozen=True)
class TrialRecord:
    true_hypothesis: Hypothesis
    count: int
    decision: Hypothesis
    seed: int  #: Key of the counter-based generator used for this trial

    @property
    def is_error(self) -> bool:
        return self.true_hypothesis != self.decision


@dataclasses.dataclass(frozen=True)
class SweepRow:
    """One point of an error-probability curve."""
    beta_eta_abs: float
    p_fn: float
    p_fp: float
    method: Method

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        for name in ("p_fn", "p_fp"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise InvalidParameterError(f"{name} must lie in [0, 1], got {p!r}")

    def as_dict(self):
        return {field.name: getattr(self, field.name) for field in dataclasses.fields(self)}


class OperatingPoint(NamedTuple):
    beta: float  #: Dark-port displacement ``alpha*phi``
    phi: float
    report: ErrorReport
    beta_eta: float  #: Effective displacement at the detector


def decide(count: int, rule: DecisionRule) -> Hypothesis:
    if count < 0:
        raise InvalidParameterError(f"photon count must be non-negative, got {count!r}")
    return Hypothesis.NO_SIGNAL if count == rule.n_ref else Hypothesis.SIGNAL


# ------------------------------------------------------------------------
# Error probabilities from states
# ------------------------------------------------------------------------

def detected_pmfs(config: InterferometerConfig, exact: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    Photon-count distributions behind the detector with and without the phase shift.

    The dark-port states come from the asymptotic model, or from the exact two-mode model when
    ``exact`` is set, and pass through the loss channel of efficiency ``eta``.
    """
    s = config.signal
    build = dark_port_state_exact if exact else dark_port_state_asymptotic
    pmfs = []
    for params in (s, s.replace(phi=0.0)):
        state = build(config.replace(signal=params))
        rho = state if exact else state.to_density()
        if s.eta != 1.0:
            rho = loss_channel(s.eta, rho.cutoff)(rho)
        pmfs.append(rho.photon_pmf())
    return pmfs[0], pmfs[1]


def error_probabilities_numeric(config: InterferometerConfig, exact: bool = False) -> ErrorReport:
    """
    ``P_fn = pmf_signal[n]`` and ``P_fp = 1 - pmf_no_signal[n]`` from truncated states.

    Truncation leakage counts as "signal" (it never equals the reference count).
    """
    n = config.signal.n
    pmf_signal, pmf_no_signal = detected_pmfs(config, exact)
    p_fn = _clip(pmf_signal[n] if n < pmf_signal.size else 0.0)
    p_fp = _clip(1.0 - (pmf_no_signal[n] if n < pmf_no_signal.size else 0.0))
    return ErrorReport(p_fn, p_fp, Method.NUMERIC)


def _clip(p: float) -> float:
    return min(1.0, max(0.0, float(p)))


# ------------------------------------------------------------------------
# Monte Carlo
# ------------------------------------------------------------------------

def trial_generator(seed: int, index: int) -> np.random.Generator:
    """Counter-based generator of trial ``index``, keyed by ``seed XOR index``."""
    return np.random.Generator(np.random.Philox(key=(seed ^ index) & (2 ** 64 - 1)))


def _sample_count(cdf: np.ndarray, u: float) -> int:
    # an index equal to len(cdf) is the overflow bin holding the leakage
    return int(np.searchsorted(cdf, u, side="right"))


def _trial_cdfs(config: InterferometerConfig, exact: bool) -> Tuple[np.ndarray, np.ndarray]:
    pmf_signal, pmf_no_signal = detected_pmfs(config, exact)
    return np.cumsum(np.clip(pmf_signal, 0, None)), np.cumsum(np.clip(pmf_no_signal, 0, None))


def _simulate_block(cdfs: Tuple[np.ndarray, np.ndarray], rule: DecisionRule, seed: int,
                    start: int, stop: int) -> List[TrialRecord]:
    cdf_signal, cdf_no_signal = cdfs
    records = []
    for index in range(start, stop):
        u_signal, u_no_signal = trial_generator(seed, index).random(2)
        for hypothesis, cdf, u in ((Hypothesis.SIGNAL, cdf_signal, u_signal),
                                   (Hypothesis.NO_SIGNAL, cdf_no_signal, u_no_signal)):
            count = _sample_count(cdf, u)
            records.append(TrialRecord(hypothesis, count, decide(count, rule), seed ^ index))
    return records


def _count_block(cdfs: Tuple[np.ndarray, np.ndarray], rule: DecisionRule, seed: int,
                 start: int, stop: int) -> Tuple[int, int]:
    false_negatives = false_positives = 0
    for record in _simulate_block(cdfs, rule, seed, start, stop):
        if record.is_error:
            if record.true_hypothesis is Hypothesis.SIGNAL:
                false_negatives += 1
            else:
                false_positives += 1
    return false_negatives, false_positives


def _blocks(trials: int) -> List[Tuple[int, int]]:
    return [(start, min(start + TRIAL_BLOCK, trials)) for start in range(0, trials, TRIAL_BLOCK)]


def _check_trials(trials: int, seed: int):
    if int(trials) != trials or trials < 1:
        raise InvalidParameterError(f"trials must be a positive integer, got {trials!r}")
    if int(seed) != seed or not 0 <= seed < 2 ** 64:
        raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {seed!r}")


def simulate_trials(config: InterferometerConfig, trials: int, seed: int, exact: bool = False) -> List[TrialRecord]:
    """
    Two records per trial index, one under each hypothesis, in trial order.

    Each trial draws two uniforms from its own generator (see :func:`trial_generator`), so the
    records do not depend on how trials are split across workers.
    """
    _check_trials(trials, seed)
    cdfs = _trial_cdfs(config, exact)
    rule = DecisionRule(config.signal.n)
    blocks = parallel_map(lambda bounds: _simulate_block(cdfs, rule, seed, *bounds), _blocks(trials))
    return [record for block in blocks for record in block]


def monte_carlo(config: InterferometerConfig, trials: int, seed: int, exact: bool = False) -> ErrorReport:
    """
    Empirical error rates of ``trials`` runs under each hypothesis.

    Counts are drawn by inverse-CDF sampling from the same truncated distributions that
    :func:`error_probabilities_numeric` reads. ``std_err`` holds the binomial standard errors
    ``sqrt(p (1 - p) / trials)`` of both rates.
    """
    _check_trials(trials, seed)
    cdfs = _trial_cdfs(config, exact)
    rule = DecisionRule(config.signal.n)
    counts = parallel_map(lambda bounds: _count_block(cdfs, rule, seed, *bounds), _blocks(trials))
    false_negatives = sum(fn for fn, _ in counts)
    false_positives = sum(fp for _, fp in counts)
    p_fn, p_fp = false_negatives / trials, false_positives / trials
    std_err = (math.sqrt(p_fn * (1 - p_fn) / trials), math.sqrt(p_fp * (1 - p_fp) / trials))
    logging.debug("monte carlo: %d trials, seed %d, %d/%d errors", trials, seed, false_negatives, false_positives)
    return ErrorReport(p_fn, p_fp, Method.EMPIRICAL, trials=trials, std_err=std_err)


# ------------------------------------------------------------------------
# Sweeps and optimisation
# ------------------------------------------------------------------------

def sweep(beta_abs_grid: Iterable[float], n: int = 1, eta: float = 1.0, r: float = 0.0, vacuum: bool = False,
          cutoff: Optional[int] = None, alpha: float = 1e4) -> List[SweepRow]:
    """
    Error probabilities along a grid of effective displacements ``|beta_eta|``.

    Closed forms are used for ``n <= 1`` and the vacuum reference (``vacuum=True``);
    ``n >= 2`` goes through :func:`error_probabilities_numeric` with the amplifier pair in place.
    Rows keep the grid order.
    """
    grid = [float(b) for b in beta_abs_grid]
    if not grid:
        raise InvalidParameterError("sweep grid is empty")
    if any(not (math.isfinite(b) and b >= 0) for b in grid):
        raise InvalidParameterError("sweep grid values must be finite and non-negative")
    check_eta(eta)
    photons = 0 if vacuum else n
    if photons <= 1:
        return [SweepRow(b, *_report_pair(analytic_error_report(photons, b, eta))) for b in grid]

    def row(b: float) -> SweepRow:
        config = InterferometerConfig(SignalParams.from_beta_eta(b, eta, r, photons, alpha), cutoff_dark=cutoff)
        return SweepRow(b, *_report_pair(error_probabilities_numeric(config)))

    return parallel_map(row, grid)


def _report_pair(report: ErrorReport) -> Tuple[float, float, Method]:
    return report.p_false_negative, report.p_false_positive, report.method


def beta_grid(beta_min: float, beta_max: float, steps: int) -> np.ndarray:
    """``steps`` evenly spaced points from ``beta_min`` to ``beta_max`` inclusive."""
    if int(steps) != steps or steps < 1:
        raise InvalidParameterError(f"steps must be a positive integer, got {steps!r}")
    if not 0 <= beta_min <= beta_max:
        raise InvalidParameterError(f"need 0 <= beta_min <= beta_max, got {beta_min!r}, {beta_max!r}")
    if steps == 1 and beta_min != beta_max:
        raise InvalidParameterError("a single step needs beta_min == beta_max")
    return np.linspace(beta_min, beta_max, int(steps))


def optimize_operating_point(n: int, eta: float, r: float = 0.0, alpha: float = 1e4,
                             cutoff: Optional[int] = None) -> OperatingPoint:
    """
    Displacement minimising the false-negative probability.

    ``n = 1`` uses the closed form. For ``n >= 2`` the numeric ``P_fn`` is minimised around the
    square root of every root of ``L_n``; the lowest minimum wins, ties going to the smallest
    displacement.

    Raises:
        InvalidParameterError: ``alpha <= 0``, ``eta <= 0`` or ``n < 1`` (the vacuum reference has no
            interior minimum).

    """
    check_eta(eta)
    if not alpha > 0:
        raise InvalidParameterError(f"alpha must be positive, got {alpha!r}")
    if eta == 0:
        raise InvalidParameterError("eta = 0: no signal reaches the detector")
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"operating point needs n >= 1, got {n!r}")

    if n == 1:
        beta_eta, phi, _ = optimal_operating_point(eta, r, alpha)
        return OperatingPoint(alpha * phi, phi, analytic_error_report(1, beta_eta, eta), beta_eta)

    def config_at(b: float) -> InterferometerConfig:
        return InterferometerConfig(SignalParams.from_beta_eta(b, eta, r, n, alpha), cutoff_dark=cutoff)

    def objective(b: float) -> float:
        return error_probabilities_numeric(config_at(b)).p_false_negative

    centres = [math.sqrt(x) for x in laguerre_roots(n, tol=1e-6)]
    best_b, best_value = None, math.inf
    for i, centre in enumerate(centres):
        lower = 0.5 * (centres[i - 1] + centre) if i > 0 else 0.5 * centre
        upper = 0.5 * (centre + centres[i + 1]) if i + 1 < len(centres) else centre + (centre - lower)
        result = minimize_scalar(objective, bounds=(lower, upper), method="bounded", options={"xatol": 1e-10})
        logging.debug("root bracket [%r, %r]: minimum %r at %r", lower, upper, result.fun, result.x)
        if result.fun < best_value - TIE_TOL:
            best_b, best_value = float(result.x), float(result.fun)

    config = config_at(best_b)
    return OperatingPoint(config.signal.alpha * config.signal.phi, config.signal.phi,
                          error_probabilities_numeric(config), best_b)


def robustness_band(eta: float, factor: float = 2.0) -> Tuple[float, float]:
    """
    Interval of ``|beta_eta|`` around the single-photon optimum where ``P_fn <= factor * min P_fn``.

    The upper edge is ``inf`` when the band reaches the large-displacement tail.

    Raises:
        InvalidParameterError: ``factor < 1``, or no optimum exists (``eta <= 1/4`` or ``eta = 1/3``).

    """
    if not factor >= 1:
        raise InvalidParameterError(f"factor must be at least 1, got {factor!r}")
    optimum = optimal_operating_point(eta, 0.0, 1.0)
    level = factor * optimum.p_fn_min
    excess = lambda b: p_fn_lossy(b, eta) - level  # noqa: E731
    if excess(0.0) <= 0:
        lower = 0.0
    else:
        lower = brentq(excess, 0.0, optimum.beta_eta) if excess(optimum.beta_eta) < 0 else optimum.beta_eta
    lobe_top = math.sqrt(single_photon_lobe(eta)[1])
    if excess(lobe_top) <= 0:
        upper = math.inf
    else:
        upper = brentq(excess, optimum.beta_eta, lobe_top) if excess(optimum.beta_eta) < 0 else optimum.beta_eta
    return lower, upper


# ------------------------------------------------------------------------
# Parallel execution
# ------------------------------------------------------------------------

def max_workers() -> int:
    """
    Worker-thread cap from ``FOCKGATE_THREADS`` (default: CPU count).

    Raises:
        InvalidParameterError: the variable is set to something other than a positive integer.

    """
    value = os.environ.get("FOCKGATE_THREADS")
    if value is None or value.strip() == "":
        return os.cpu_count() or 1
    try:
        threads = int(value)
    except ValueError:
        raise InvalidParameterError(f"FOCKGATE_THREADS must be a positive integer, got {value!r}")
    if threads < 1:
        raise InvalidParameterError(f"FOCKGATE_THREADS must be a positive integer, got {value!r}")
    return threads


def parallel_map(func: Callable[[T], R], items: Sequence[T]) -> List[R]:
    """``list(map(func, items))`` on a bounded thread pool; result order follows ``items``."""
    workers = min(max_workers(), len(items))
    if workers <= 1:
        return [func(item) for item in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
