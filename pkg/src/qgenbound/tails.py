"""Single-draw tail radii and their Monte-Carlo coverage check.

A radius ``eps`` claims ``Pr{|gen(W,S)| <= eps} >= 1 - delta`` for one draw
of ``(W, S)`` from the induced joint.  Classical radii use the Renyi or
smooth-max mutual information of ``P_WS``; quantum radii add the
deviation term ``inf_a c1(a)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    classical_loss_tau,
    default_low_grid,
    local_mu,
    local_tau,
    minimize_on_grid,
    pair_divergences,
    renyi_mutual_information,
)
from .divergences import smooth_max_divergence
from .errors import ConfigurationError, DomainError
from .framework import DROP_TOL, InducedJoint, LearningInstance, gen_error, sample_ws

TAIL_KINDS = ("classical-renyi", "classical-smooth-max", "quantum-renyi", "quantum-smooth-max")
MIN_DRAWS = 1000


@dataclass
class TailReport:
    kind: str
    delta: float
    epsilon: float
    nu: float | None
    gamma: float | None
    alpha: float | None
    empirical_coverage: float
    exact_coverage: float
    draws: int
    threshold: float
    passed: bool
    details: dict = field(default_factory=dict)

    @property
    def vacuous(self) -> bool:
        return math.isinf(self.epsilon)

    def to_json(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            if isinstance(v, float) and math.isinf(v):
                v = "+inf"
            out[k] = v
        return out


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0,1), got {delta}")
    return delta


def _check_nu(nu: float, delta: float) -> float:
    nu = float(nu)
    if not 0.0 <= nu < delta:
        raise DomainError(f"nu must satisfy 0 <= nu < delta = {delta}, got {nu}")
    return nu


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not gamma > 1.0:
        raise DomainError(f"gamma must exceed 1, got {gamma}")
    return gamma


def _radius(tau: float, n: int, info: float, tail: float) -> float:
    if math.isinf(info):
        return math.inf
    return math.sqrt(2.0 * tau * tau / n * (info + math.log(2.0) + tail))


def smooth_max_information(j: InducedJoint, nu: float) -> float:
    """``I^(nu)_max[W;S] = D^(nu)_max(P_WS || P_W x P_S)``."""
    d = smooth_max_divergence(j.joint_matrix().ravel(), j.product_matrix().ravel(), nu)
    return math.inf if d.is_inf else float(d.value)


def classical_tail_renyi(j: InducedJoint, tau: float, n: int, gamma: float, delta: float) -> float:
    """``sqrt((2 tau^2 / n)(I_gamma + log 2 + gamma/(gamma-1) log(1/delta)))``."""
    gamma, delta = _check_gamma(gamma), _check_delta(delta)
    info = renyi_mutual_information(j, gamma)
    return _radius(tau, n, info, gamma / (gamma - 1.0) * math.log(1.0 / delta))


def classical_tail_smooth_max(j: InducedJoint, tau: float, n: int, nu: float, delta: float) -> float:
    """``sqrt((2 tau^2 / n)(I^(nu)_max + log 2 + log(1/(delta - nu))))``."""
    delta = _check_delta(delta)
    nu = _check_nu(nu, delta)
    return _radius(tau, n, smooth_max_information(j, nu), math.log(1.0 / (delta - nu)))


def c1(j: InducedJoint, inst: LearningInstance, alpha: float, mu: float | None = None) -> float:
    """``sup_w E_{S ~ P^n}`` of the two per-sample deviation radicals at order alpha.

    The supremum runs over hypotheses with ``P_W(w) > 1e-12``; samples
    whose pair was dropped (zero outcome probability) contribute nothing.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0,1), got {alpha}")
    mu = local_mu(inst) if mu is None else float(mu)
    c = 2.0 * mu * mu / (inst.n * alpha)
    best = 0.0
    for w in j.hypotheses:
        if j.marginal_w.prob(w) <= DROP_TOL:
            continue
        total = 0.0
        for s, ps in zip(j.samples, j.prior_n):
            if (w, s) not in j.pairs:
                continue
            d1, d2 = pair_divergences(j, w, s, alpha, "modified")
            if math.isinf(d1) or math.isinf(d2):
                return math.inf
            total += ps * (math.sqrt(c * d1) + math.sqrt(c * d2))
        best = max(best, total)
    return best


def _c1_inf(j, inst, alpha_grid, mu):
    grid = default_low_grid() if alpha_grid is None else [float(a) for a in alpha_grid]
    if any(not 0 < a < 1 for a in grid):
        raise DomainError("c1 is defined for alpha in (0,1) only")
    a, v, vals = minimize_on_grid(lambda x: c1(j, inst, x, mu), grid)
    return a, v, vals


def _quantum_constants(j, inst, mu, tau):
    if inst.mode != "iid_local":
        raise ConfigurationError("quantum tail radii need an iid_local instance")
    if inst.cert is not None:
        mu = inst.cert.mu if mu is None else mu
        tau = inst.cert.tau if tau is None else tau
    mu = local_mu(inst) if mu is None else float(mu)
    tau = local_tau(j, inst) if tau is None else float(tau)
    return mu, tau


def quantum_tail_renyi(j: InducedJoint, inst: LearningInstance, gamma: float, delta: float,
                       alpha_grid=None, mu: float | None = None,
                       tau: float | None = None) -> tuple:
    """``(eps, c1)``: the classical Renyi radius plus ``inf_a c1(a)``; also returns the argmin."""
    mu, tau = _quantum_constants(j, inst, mu, tau)
    base = classical_tail_renyi(j, tau, inst.n, gamma, delta)
    a, c, _ = _c1_inf(j, inst, alpha_grid, mu)
    return base + c, c, a


def quantum_tail_smooth_max(j: InducedJoint, inst: LearningInstance, nu: float, delta: float,
                            alpha_grid=None, mu: float | None = None,
                            tau: float | None = None) -> tuple:
    """``(eps, c1)``: the classical smooth-max radius plus ``inf_a c1(a)``; also the argmin."""
    mu, tau = _quantum_constants(j, inst, mu, tau)
    base = classical_tail_smooth_max(j, tau, inst.n, nu, delta)
    a, c, _ = _c1_inf(j, inst, alpha_grid, mu)
    return base + c, c, a


def _classical_tau(inst, tau):
    if tau is not None:
        return float(tau)
    if inst.cert is not None:
        return inst.cert.tau
    return classical_loss_tau(inst)


def tail_radius(j: InducedJoint, inst: LearningInstance, kind: str, delta: float,
                nu: float | None = None, gamma: float = 2.0, alpha_grid=None,
                mu: float | None = None, tau: float | None = None) -> dict:
    """Radius and parameters for one of :data:`TAIL_KINDS`."""
    delta = _check_delta(delta)
    nu = delta / 2.0 if nu is None else float(nu)
    out = {"kind": kind, "delta": delta, "nu": None, "gamma": None, "alpha": None, "c1": None}
    if kind == "classical-renyi":
        out.update(epsilon=classical_tail_renyi(j, _classical_tau(inst, tau), inst.n, gamma, delta),
                   gamma=float(gamma))
    elif kind == "classical-smooth-max":
        out.update(epsilon=classical_tail_smooth_max(j, _classical_tau(inst, tau), inst.n, nu, delta),
                   nu=nu)
    elif kind == "quantum-renyi":
        eps, c, a = quantum_tail_renyi(j, inst, gamma, delta, alpha_grid, mu, tau)
        out.update(epsilon=eps, c1=c, alpha=a, gamma=float(gamma))
    elif kind == "quantum-smooth-max":
        eps, c, a = quantum_tail_smooth_max(j, inst, nu, delta, alpha_grid, mu, tau)
        out.update(epsilon=eps, c1=c, alpha=a, nu=nu)
    else:
        raise ConfigurationError(f"unknown tail kind {kind!r}; choose from {TAIL_KINDS}")
    return out


def coverage_threshold(delta: float, draws: int) -> float:
    """``1 - delta - 3 sqrt(delta (1 - delta) / draws)``."""
    return 1.0 - delta - 3.0 * math.sqrt(delta * (1.0 - delta) / draws)


def verify_coverage(j: InducedJoint, inst: LearningInstance, tail_kind: str, params: dict | None = None,
                    draws: int = 10_000, seed=42) -> TailReport:
    """Monte-Carlo estimate of ``Pr{|gen(W,S)| <= eps}`` with exact per-draw ``gen``.

    ``params`` holds ``delta`` (default 0.1) and optionally ``nu``, ``gamma``,
    ``alpha_grid``, ``mu``, ``tau``.  The exact probability under the joint is
    reported alongside the estimate.
    """
    params = dict(params or {})
    if draws < MIN_DRAWS:
        raise ConfigurationError(f"draws must be at least {MIN_DRAWS}, got {draws}")
    delta = float(params.pop("delta", 0.1))
    r = tail_radius(j, inst, tail_kind, delta, **params)
    eps = r["epsilon"]
    gens = {key: abs(gen_error(j, inst, *key)) for key in j.pairs}
    inside = {key: g <= eps for key, g in gens.items()}
    exact = float(sum(rec.weight for key, rec in j.pairs.items() if inside[key]))
    hits = sum(inside[key] for key in sample_ws(j, draws, seed))
    cov = hits / draws
    thr = coverage_threshold(delta, draws)
    return TailReport(tail_kind, delta, float(eps), r["nu"], r["gamma"], r["alpha"], cov,
                      min(exact, 1.0), int(draws), thr, bool(cov >= thr),
                      {"c1": r["c1"], "max_abs_gen": max(gens.values())})
