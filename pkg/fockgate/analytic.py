"""
Closed-form detection error probabilities of the non-Gaussian interferometer.

Every function here is a pure function of its arguments. Complex displacements are accepted
at the interface (the physical dark-port displacement ``beta = 1j*alpha*phi`` is imaginary),
but only ``abs(beta)**2`` enters the formulas.

"""

import dataclasses
import logging
import math
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq, minimize_scalar

from .common import ArrayLike, ComplexLike, Method
from .exceptions import InvalidParameterError, NumericConvergenceError


# ------------------------------------------------------------------------
# Domain types
# ------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class Displacement:
    """
    Dark-port displacement and its effective value at the detector.

    ``beta_eta`` includes the anti-squeezer gain ``e**r`` and the detector loss ``sqrt(eta)``.
    """
    beta: complex  #: Displacement of the dark-port mode
    beta_eta: complex  #: Effective displacement seen by the photon counter


@dataclasses.dataclass(frozen=True)
class SignalParams:
    """
    Physical scenario of one detection experiment.

    Example::

        >>> params = SignalParams(alpha=1e4, phi=1e-4, n=1, eta=0.95)
        >>> params.beta
        1j

    """
    alpha: float = 0.0  #: Coherent amplitude of the bright-port pump (real, non-negative)
    phi: float = 0.0  #: Differential phase shift (radians)
    r: float = 0.0  #: Logarithmic squeeze factor
    n: int = 1  #: Photon number of the dark-port input Fock state
    eta: float = 1.0  #: Detector quantum efficiency

    def __post_init__(self):
        if not self.alpha >= 0:
            raise InvalidParameterError(f"alpha must be non-negative, got {self.alpha!r}")
        if int(self.n) != self.n or self.n < 0:
            raise InvalidParameterError(f"n must be a non-negative integer, got {self.n!r}")
        check_eta(self.eta)
        if not math.isfinite(self.phi) or not math.isfinite(self.r):
            raise InvalidParameterError("phi and r must be finite")

    @property
    def beta(self) -> complex:
        """Dark-port displacement ``i*alpha*phi``."""
        return 1j * self.alpha * self.phi

    @property
    def displacement(self) -> Displacement:
        beta = self.beta
        return Displacement(beta=beta, beta_eta=math.sqrt(self.eta) * beta * math.exp(self.r))

    def replace(self, **changes) -> "SignalParams":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_beta_eta(cls, beta_eta: float, eta: float = 1.0, r: float = 0.0, n: int = 1,
                      alpha: float = 1e4) -> "SignalParams":
        """
        Scenario producing a given effective displacement ``|beta_eta|`` at the detector.

        The phase shift is ``|beta_eta| * exp(-r) / (sqrt(eta) * alpha)``.

        Raises:
            InvalidParameterError: ``alpha <= 0``, or a non-zero ``beta_eta`` with ``eta == 0``.

        """
        check_eta(eta)
        if not alpha > 0:
            raise InvalidParameterError(f"alpha must be positive, got {alpha!r}")
        beta_eta = abs(beta_eta)
        if eta == 0:
            if beta_eta != 0:
                raise InvalidParameterError("no displacement reaches a detector with eta = 0")
            return cls(alpha=alpha, phi=0.0, r=r, n=n, eta=eta)
        phi = beta_eta * math.exp(-r) / (math.sqrt(eta) * alpha)
        return cls(alpha=alpha, phi=phi, r=r, n=n, eta=eta)


@dataclasses.dataclass(frozen=True)
class ErrorReport:
    """
    False-negative and false-positive probabilities of the photon-count decision rule.

    ``trials`` and ``std_err`` are set exactly when ``method`` is :attr:`Method.EMPIRICAL`;
    ``std_err`` is the pair of binomial standard errors ``(fn, fp)``.
    """
    p_false_negative: float
    p_false_positive: float
    method: Method = Method.ANALYTIC
    trials: Optional[int] = None
    std_err: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        for name in ("p_false_negative", "p_false_positive"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise InvalidParameterError(f"{name} must lie in [0, 1], got {p!r}")
        empirical = self.method is Method.EMPIRICAL
        if empirical != (self.std_err is not None) or empirical != (self.trials is not None):
            raise InvalidParameterError("trials and std_err are present iff the method is empirical")
        if self.std_err is not None:
            object.__setattr__(self, "std_err", tuple(float(s) for s in self.std_err))

    def as_dict(self):
        return {field.name: getattr(self, field.name) for field in dataclasses.fields(self)}


@dataclasses.dataclass(frozen=True)
class SensitivityBounds:
    """Phase sensitivity scales for ``N`` mean photons: shot noise, squeezed shot noise, Heisenberg."""
    snl: float
    squeezed_snl: float
    heisenberg: float


class AnalyticOptimum(NamedTuple):
    beta_eta: float
    phi: float
    p_fn_min: float


# ------------------------------------------------------------------------
# Laguerre polynomials
# ------------------------------------------------------------------------

def laguerre(n: int, k: ArrayLike, x: ArrayLike) -> ArrayLike:
    """
    Associated Laguerre polynomial ``L_n^(k)(x)`` by the ascending three-term recurrence.

    ``k`` and ``x`` may be arrays (broadcast against each other); a scalar is returned
    for scalar arguments.

    Example:
        >>> laguerre(1, 0, 1.0)
        0.0
        >>> laguerre(0, 0, 7.3)
        1.0

    """
    if int(n) != n or n < 0:
        raise InvalidParameterError(f"Laguerre degree must be a non-negative integer, got {n!r}")
    k_arr = np.asarray(k, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    prev = np.ones(np.broadcast(k_arr, x_arr).shape)
    if n == 0:
        return _scalar_or_array(prev)
    cur = 1.0 + k_arr - x_arr + np.zeros_like(prev)
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + k_arr - x_arr) * cur - (j + k_arr) * prev) / (j + 1)
    return _scalar_or_array(cur)


def laguerre_table(nmax: int, kmax: int, x: float) -> np.ndarray:
    """
    Table ``T[j, k] = L_j^(k)(x)`` for ``0 <= j <= nmax``, ``0 <= k <= kmax``.

    Entries with large ``j + k`` may overflow to ``inf``; they are never needed for
    matrix elements inside a cutoff of :data:`fockgate.common.MAX_CUTOFF`.
    """
    k = np.arange(kmax + 1, dtype=float)
    table = np.empty((nmax + 1, kmax + 1))
    with np.errstate(over="ignore", invalid="ignore"):
        table[0] = 1.0
        if nmax >= 1:
            table[1] = 1.0 + k - x
        for j in range(1, nmax):
            table[j + 1] = ((2 * j + 1 + k - x) * table[j] - (j + k) * table[j - 1]) / (j + 1)
    return table


def laguerre_roots(n: int, tol: float = 1e-12) -> List[float]:
    """
    All roots of ``L_n`` in increasing order.

    The roots are the eigenvalues of the symmetric Jacobi matrix of Gauss–Laguerre quadrature
    (diagonal ``2j + 1``, off-diagonal ``j``), each polished inside a sign-change bracket.

    Raises:
        InvalidParameterError: ``n < 1`` or ``tol <= 0``.
        NumericConvergenceError: some root has ``|L_n(root)| > tol``.

    """
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"laguerre_roots needs n >= 1, got {n!r}")
    if not tol > 0:
        raise InvalidParameterError(f"tol must be positive, got {tol!r}")

    diagonal = 2.0 * np.arange(n) + 1.0
    off_diagonal = np.arange(1, n, dtype=float)
    if n == 1:
        eigenvalues = diagonal
    else:
        eigenvalues = eigh_tridiagonal(diagonal, off_diagonal, eigvals_only=True)

    roots = []
    for guess in np.sort(eigenvalues):
        root = _polish_root(n, float(guess))
        residual = abs(laguerre(n, 0, root))
        if residual > tol:
            raise NumericConvergenceError(f"root {root!r} of L_{n} has residual {residual:.3e} > {tol:.1e}")
        roots.append(root)

    if any(b <= a for a, b in zip(roots, roots[1:])) or roots[0] <= 0:
        raise NumericConvergenceError(f"roots of L_{n} are not positive and strictly increasing")
    return roots


def _polish_root(n: int, guess: float) -> float:
    f = lambda x: laguerre(n, 0, x)  # noqa: E731
    if f(guess) == 0.0:
        return guess
    half_width = 1e-10 * max(1.0, guess)
    for _ in range(40):
        lo, hi = max(guess - half_width, 0.0), guess + half_width
        if f(lo) * f(hi) < 0:
            return brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
        half_width *= 4
    logging.debug("no sign change around eigenvalue %r of the Jacobi matrix of L_%d", guess, n)
    return guess


def laguerre_roots_bisection(n: int, tol: float = 1e-14) -> List[float]:
    """
    Roots of ``L_n`` by a sign-change scan followed by plain bisection.

    This is an independent oracle for :func:`laguerre_roots` and is only used by the
    verification suites.
    """
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"laguerre_roots_bisection needs n >= 1, got {n!r}")
    upper = 4.0 * n + 6.0
    grid = np.linspace(0.0, upper, 4000 * n + 1)
    values = laguerre(n, 0, grid)
    # zeros landing on a grid node are taken as they are; brackets need a strict sign change
    roots = [float(x) for x in grid[values == 0.0]]
    for i in np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]:
        lo, hi = float(grid[i]), float(grid[i + 1])
        f_lo = float(values[i])
        while hi - lo > tol * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            f_mid = laguerre(n, 0, mid)
            if f_mid == 0.0:
                lo = hi = mid
                break
            if (f_mid > 0) == (f_lo > 0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    roots.sort()
    if len(roots) != n:
        raise NumericConvergenceError(f"bisection scan found {len(roots)} roots of L_{n}")
    return roots


# ------------------------------------------------------------------------
# Overlaps and error probabilities
# ------------------------------------------------------------------------

def displaced_fock_overlap(n: int, beta: ComplexLike) -> float:
    """``<n|D(beta)|n> = L_n(|beta|^2) exp(-|beta|^2/2)``, real for every beta."""
    x = abs(beta) ** 2
    return float(laguerre(n, 0, x) * math.exp(-x / 2))


def p_fn_fock(n: int, beta: ComplexLike) -> float:
    """False-negative probability ``|L_n(|beta|^2)|^2 exp(-|beta|^2)`` of the lossless n-photon scheme."""
    x = abs(beta) ** 2
    return float(laguerre(n, 0, x) ** 2 * math.exp(-x))


def p_fn_vacuum(beta: ComplexLike) -> float:
    """False-negative probability of the vacuum (coherent output) reference, ``exp(-|beta|^2)``."""
    return math.exp(-abs(beta) ** 2)


def poisson_count_prob(count: int, beta: ComplexLike) -> float:
    """
    Probability of detecting ``count`` photons in the coherent state ``|beta>``.

    Example:
        >>> round(poisson_count_prob(2, 1.0), 6)
        0.18394

    """
    if count < 0:
        raise InvalidParameterError(f"photon count must be non-negative, got {count!r}")
    x = abs(beta) ** 2
    if x == 0:
        return 1.0 if count == 0 else 0.0
    return math.exp(count * math.log(x) - x - math.lgamma(count + 1))


def p_fn_lossy(beta_eta: ComplexLike, eta: float) -> float:
    """
    False-negative probability of the single-photon scheme behind a detector of efficiency ``eta``.

    ``[eta (1 - |beta_eta|^2)^2 + (1 - eta) |beta_eta|^2] exp(-|beta_eta|^2)``; at ``eta = 1`` this is
    ``p_fn_fock(1, beta_eta)``. Only the ``n = 1`` input has this closed form.
    """
    check_eta(eta)
    x = abs(beta_eta) ** 2
    return (eta * (1.0 - x) ** 2 + (1.0 - eta) * x) * math.exp(-x)


def p_fp_lossy(eta: float) -> float:
    """False-positive probability ``1 - eta`` of the single-photon scheme."""
    check_eta(eta)
    return 1.0 - eta


def analytic_error_report(n: int, beta_eta: ComplexLike, eta: float) -> ErrorReport:
    """
    Closed-form :class:`ErrorReport` where one exists.

    Covers the vacuum reference (``n = 0``, any eta), the single photon (``n = 1``, any eta) and
    lossless n-photon inputs (``eta = 1``).

    Raises:
        InvalidParameterError: no closed form is known (``n >= 2`` with ``eta < 1``).

    """
    check_eta(eta)
    if n == 0:
        return ErrorReport(p_fn_vacuum(beta_eta), 0.0, Method.ANALYTIC)
    elif n == 1:
        return ErrorReport(p_fn_lossy(beta_eta, eta), p_fp_lossy(eta), Method.ANALYTIC)
    elif eta == 1.0:
        return ErrorReport(p_fn_fock(n, beta_eta), 0.0, Method.ANALYTIC)
    else:
        raise InvalidParameterError(f"no closed form for n={n} with eta={eta}; use the numeric path")


def single_photon_lobe(eta: float) -> Tuple[float, float]:
    """
    Squared displacements ``(x_min, x_max)`` of the local minimum of :func:`p_fn_lossy` and of the
    local maximum that closes the single-photon lobe.

    The stationary points are ``x = 1`` and ``x = (4 eta - 1) / eta``; the smaller one is the minimum.

    Raises:
        InvalidParameterError: ``eta <= 1/4`` (``p_fn_lossy`` rises from ``x = 0``) or ``eta = 1/3``
            (the two stationary points merge into an inflection point).

    """
    check_eta(eta)
    if eta <= 0.25:
        raise InvalidParameterError(f"eta = {eta} <= 1/4: the single-photon lobe has no interior minimum")
    other = (4.0 * eta - 1.0) / eta
    if abs(other - 1.0) <= 1e-12:
        raise InvalidParameterError("eta = 1/3: the single-photon lobe degenerates to an inflection point")
    return min(1.0, other), max(1.0, other)


def optimal_operating_point(eta: float, r: float, alpha: float, step: float = 1e-2,
                            tol: float = 1e-9) -> AnalyticOptimum:
    """
    Effective displacement minimising :func:`p_fn_lossy`, with the matching phase shift.

    The search covers the single-photon lobe up to the local maximum given by
    :func:`single_photon_lobe`, which separates it from the large-displacement tail. A grid scan
    with the given step picks the smallest grid minimiser; the stationarity condition
    ``(1 - b^2)(1 - 3 eta - eta (1 - b^2)) = 0`` is then solved inside the neighbouring cells.
    A bounded scalar minimisation takes over when those cells show no sign change.

    The minimum sits at ``|beta_eta| = 1`` for ``eta > 1/3`` and at ``sqrt((4 eta - 1) / eta)``
    for ``1/4 < eta < 1/3``.

    Returns:
        ``(beta_eta, phi, p_fn_min)`` with ``phi = beta_eta exp(-r) / (sqrt(eta) alpha)``.

    Raises:
        InvalidParameterError: ``alpha <= 0``, ``eta <= 1/4`` or ``eta = 1/3`` (no interior
            minimum; ``eta = 0`` lets no signal reach the detector).

    """
    check_eta(eta)
    if not alpha > 0:
        raise InvalidParameterError(f"alpha must be positive, got {alpha!r}")
    if eta == 0:
        raise InvalidParameterError("eta = 0: no signal reaches the detector")
    _, x_max = single_photon_lobe(eta)

    upper = math.sqrt(x_max)
    grid = np.append(np.arange(0.0, upper, step), upper)
    x = grid ** 2
    values = (eta * (1.0 - x) ** 2 + (1.0 - eta) * x) * np.exp(-x)
    i = int(np.argmin(values))
    lo, hi = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, len(grid) - 1)])
    logging.debug("operating point bracket [%r, %r] for eta=%r", lo, hi, eta)

    def stationarity(b: float) -> float:
        u = 1.0 - b * b
        return u * (1.0 - 3.0 * eta - eta * u)

    if stationarity(lo) * stationarity(hi) < 0:
        beta_eta = brentq(stationarity, lo, hi, xtol=tol * 1e-3)
    else:
        logging.debug("no sign change of the stationarity condition, minimising p_fn_lossy directly")
        result = minimize_scalar(lambda b: p_fn_lossy(b, eta), bounds=(lo, hi), method="bounded",
                                 options={"xatol": tol})
        beta_eta = float(result.x)
    phi = beta_eta * math.exp(-r) / (math.sqrt(eta) * alpha)
    return AnalyticOptimum(beta_eta, phi, p_fn_lossy(beta_eta, eta))


def detection_gain(eta: float) -> float:
    """
    Ratio of the vacuum-reference false-negative probability at ``|beta| = 1`` to the lossy
    single-photon minimum, ``1 / (1 - eta)``.
    """
    check_eta(eta)
    if eta == 1.0:
        return math.inf
    return p_fn_vacuum(1.0) / p_fn_lossy(1.0, eta)


def sensitivity_bounds(N: float, r: float = 0.0) -> SensitivityBounds:
    """
    Phase sensitivity scales ``1/sqrt(N)``, ``exp(-r)/sqrt(N)`` and ``1/N``.

    Raises:
        InvalidParameterError: ``N < 1``.

    """
    if not N >= 1:
        raise InvalidParameterError(f"mean photon number must be >= 1, got {N!r}")
    return SensitivityBounds(snl=1 / math.sqrt(N), squeezed_snl=math.exp(-r) / math.sqrt(N), heisenberg=1 / N)


def check_eta(eta: float):
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameterError(f"eta must lie in [0, 1], got {eta!r}")


def _scalar_or_array(value: np.ndarray) -> ArrayLike:
    return float(value) if value.ndim == 0 else value
