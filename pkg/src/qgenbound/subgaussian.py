"""Sub-Gaussian constants, moment generating functions and Hoeffding checks.

``mu`` bounds the centered log-MGF of a loss observable in a quantum state,
``tau`` the centered log-MGF of a classical loss value.  A constant is
certified only on a finite grid of lambda values; the grid is a falsification
tool, not a proof.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .divergences import ClassicalDist, quantum_relative_entropy
from .errors import ConfigurationError, DomainError, RangeError
from .linalg import hermitize, matrix_of

SOURCES = ("user_supplied", "norm_derived", "grid_fitted")
SPECTRUM_TOL = 1e-10
HOEFFDING_TOL = 1e-9
MGF_EXPONENT_CAP = 700.0


def default_lambda_grid() -> np.ndarray:
    return np.linspace(-10.0, 10.0, 101)


@dataclass(frozen=True)
class SubGaussianCert:
    mu: float
    tau: float
    source: str = "user_supplied"

    def __post_init__(self):
        for name in ("mu", "tau"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0:
                raise ConfigurationError(f"{name} must be finite and nonnegative, got {v!r}")
            object.__setattr__(self, name, v)
        if self.source not in SOURCES:
            raise ConfigurationError(f"unknown certificate source {self.source!r}")

    def to_json(self) -> dict:
        return {"mu": self.mu, "tau": self.tau, "source": self.source}


def _obs_state(obs, rho) -> tuple[np.ndarray, np.ndarray]:
    l = hermitize(matrix_of(obs))
    r = hermitize(matrix_of(rho))
    if l.shape != r.shape or l.ndim != 2:
        raise ConfigurationError(f"observable {l.shape} and state {r.shape} differ in shape")
    return l, r


def _centered_log_mgf(levels: np.ndarray, weights: np.ndarray, lam: float) -> float:
    """``log sum_k w_k exp(lam (x_k - mean))`` with a max shift."""
    weights = np.clip(weights, 0.0, None)
    total = float(weights.sum())
    if total <= 0:
        raise DomainError("distribution has no mass")
    weights = weights / total
    mean = float(weights @ levels)
    mask = weights > 0
    t = lam * (levels[mask] - mean)
    m = float(t.max())
    return m + math.log(float(weights[mask] @ np.exp(t - m)))


def quantum_mgf(obs, rho, lam: float) -> float:
    """``log Tr[exp(lam (L - Tr[L rho] I)) rho]`` from the eigenpairs of L."""
    l, r = _obs_state(obs, rho)
    w, v = np.linalg.eigh(l)
    norm = float(np.max(np.abs(w))) if w.size else 0.0
    if abs(lam) * norm > MGF_EXPONENT_CAP:
        raise RangeError(f"|lambda| * ||L|| = {abs(lam) * norm:.1f} exceeds {MGF_EXPONENT_CAP}")
    weights = np.real(np.einsum("ij,ik,kj->j", v.conj(), r, v))
    return _centered_log_mgf(w, weights, float(lam))


def spectral_range(obs) -> tuple[float, float]:
    w = np.linalg.eigvalsh(hermitize(matrix_of(obs)))
    return float(w[0]), float(w[-1])


def _slack_on_grid(mgf, a: float, b: float, grid) -> tuple[bool, float]:
    grid = default_lambda_grid() if grid is None else np.asarray(grid, dtype=float)
    worst = math.inf
    for lam in grid:
        slack = lam * lam * (b - a) ** 2 / 8.0 - mgf(float(lam))
        worst = min(worst, slack)
    return worst >= -HOEFFDING_TOL, float(worst)


def check_quantum_hoeffding(obs, rho, a: float, b: float, grid=None) -> tuple[bool, float]:
    """Check ``log-MGF <= lam^2 (b-a)^2 / 8`` on every grid point.

    Returns ``(holds, worst_slack)`` with slack = right side minus left side.
    """
    l, r = _obs_state(obs, rho)
    lo, hi = spectral_range(l)
    if lo < a - SPECTRUM_TOL or hi > b + SPECTRUM_TOL:
        raise DomainError(f"spectrum [{lo:.6g}, {hi:.6g}] not inside [{a}, {b}]")
    return _slack_on_grid(lambda lam: quantum_mgf(l, r, lam), a, b, grid)


def derive_mu_from_norm(obs) -> SubGaussianCert:
    """``mu = ||L||_inf / 2``.

    A valid constant when L is positive or negative semidefinite; for
    indefinite L use :func:`derive_mu_from_spectrum`.
    """
    l = hermitize(matrix_of(obs))
    mu = float(np.max(np.abs(np.linalg.eigvalsh(l)))) / 2.0 if l.size else 0.0
    return SubGaussianCert(mu, mu, "norm_derived")


def derive_mu_from_spectrum(obs) -> SubGaussianCert:
    """``mu = (lambda_max - lambda_min) / 2``, valid for every Hermitian L.

    Equals ``||L - cI||_inf`` for c the midpoint of the spectrum, and equals
    :func:`derive_mu_from_norm` when L is semidefinite.
    """
    lo, hi = spectral_range(obs)
    mu = (hi - lo) / 2.0
    return SubGaussianCert(mu, mu, "norm_derived")


def fit_mu_on_grid(obs, rho, grid=None) -> float:
    """Smallest mu with ``log-MGF <= lam^2 mu^2 / 2`` on the grid."""
    l, r = _obs_state(obs, rho)
    grid = default_lambda_grid() if grid is None else np.asarray(grid, dtype=float)
    best = 0.0
    for lam in grid:
        if lam == 0:
            continue
        best = max(best, math.sqrt(max(2.0 * quantum_mgf(l, r, float(lam)), 0.0)) / abs(lam))
    return best


def audit_mu(obs, rho, mu: float, grid=None, what: str = "loss") -> float:
    """Worst slack of ``lam^2 mu^2 / 2 - log-MGF`` on the grid; warns when negative."""
    l, r = _obs_state(obs, rho)
    grid = default_lambda_grid() if grid is None else np.asarray(grid, dtype=float)
    worst = min(lam * lam * mu * mu / 2.0 - quantum_mgf(l, r, float(lam)) for lam in grid)
    if worst < -HOEFFDING_TOL:
        warnings.warn(f"{what}: sub-Gaussian constant {mu} violated on the grid "
                      f"(slack {worst:.3e})", RuntimeWarning)
    return float(worst)


def change_of_measure_bound(obs, rho, sigma, mu: float | None = None) -> tuple[float, float]:
    """``Tr[L sigma] +- mu sqrt(2 D(rho||sigma))``, a sandwich for ``Tr[L rho]``.

    ``mu`` defaults to the spectral half-width of L.  Returns ``(inf, -inf)``
    when rho is not supported inside sigma.
    """
    l, r = _obs_state(obs, rho)
    _, s = _obs_state(obs, sigma)
    if mu is None:
        mu = derive_mu_from_spectrum(l).mu
    d = quantum_relative_entropy(r, s)
    if d.is_inf:
        return math.inf, -math.inf
    centre = float(np.real(np.trace(l @ s)))
    width = mu * math.sqrt(2.0 * max(d.finite, 0.0))
    return centre + width, centre - width


def _classical(values, dist) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(values, dtype=float).ravel()
    p = np.asarray(dist.probs if isinstance(dist, ClassicalDist) else dist, dtype=float).ravel()
    if x.shape != p.shape:
        raise ConfigurationError(f"{x.size} values for {p.size} outcomes")
    return x, p


def classical_mgf(values, dist, lam: float) -> float:
    """``log E[exp(lam (X - E X))]`` for X taking ``values`` with law ``dist``."""
    x, p = _classical(values, dist)
    norm = float(np.max(np.abs(x))) if x.size else 0.0
    if abs(lam) * norm > MGF_EXPONENT_CAP:
        raise RangeError(f"|lambda| * max|x| = {abs(lam) * norm:.1f} exceeds {MGF_EXPONENT_CAP}")
    return _centered_log_mgf(x, p, float(lam))


def check_classical_hoeffding(values, dist, a: float, b: float, grid=None) -> tuple[bool, float]:
    x, p = _classical(values, dist)
    if x.min() < a - SPECTRUM_TOL or x.max() > b + SPECTRUM_TOL:
        raise DomainError(f"values [{x.min():.6g}, {x.max():.6g}] not inside [{a}, {b}]")
    return _slack_on_grid(lambda lam: classical_mgf(x, p, lam), a, b, grid)


def tau_from_range(a: float, b: float) -> float:
    if b < a:
        raise DomainError(f"empty range [{a}, {b}]")
    return (b - a) / 2.0
