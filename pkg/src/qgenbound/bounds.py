"""Expected generalization error bounds evaluated on an exact induced joint.

Every evaluator takes the :class:`InducedJoint` and the instance it came
from and returns a :class:`BoundReport`.  Quantum terms use the whole-sample
states ``sigma(w,s)``, ``rho_te(s) (x) sigma_hyp(w,s)`` and ``sigma_hyp(w)``;
classical terms use the posterior ``P_{S|W}`` against ``P^n``.

Sub-Gaussian constants come from the instance certificate when present (and
are then audited on a lambda grid) and otherwise from spectral half-widths
and scalar loss ranges, which are valid by Hoeffding's lemma.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .divergences import (
    classical_kl,
    classical_renyi,
    modified_sandwiched,
    petz_renyi,
    quantum_relative_entropy,
)
from .errors import ConfigurationError, DomainError
from .framework import (
    InducedJoint,
    LearningInstance,
    _tr,
    expected_gen,
    expected_gen_old,
)
from .linalg import partial_trace_matrix, schatten_norm
from .subgaussian import HOEFFDING_TOL, audit_mu, classical_mgf, default_lambda_grid

SOUND_TOL = 1e-9
GOLDEN_ITERATIONS = 20
KINDS = ("l1", "lp", "kl", "renyi-mod", "renyi-petz", "caro-old", "iid", "classical")
DIVERGENCE_KINDS = ("modified", "petz", "kl")


def default_low_grid() -> np.ndarray:
    return np.geomspace(0.05, 0.95, 25)


def default_high_grid() -> np.ndarray:
    return np.geomspace(1.05, 4.0, 25)


@dataclass
class BoundReport:
    bound_kind: str
    grid: list
    optimum: tuple
    realized_abs_gen: float
    sound: bool
    vacuous: bool
    details: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        return float(self.optimum[1])

    def to_json(self) -> dict:
        def num(x):
            if isinstance(x, float) and math.isinf(x):
                return "+inf" if x > 0 else "-inf"
            return x

        def clean(x):
            if isinstance(x, dict):
                return {str(k): clean(v) for k, v in x.items()}
            if isinstance(x, (list, tuple)):
                return [clean(v) for v in x]
            if isinstance(x, (np.floating, float)):
                return num(float(x))
            if isinstance(x, np.integer):
                return int(x)
            return x

        return {
            "bound_kind": self.bound_kind,
            "grid": clean([list(g) for g in self.grid]),
            "optimum": clean(list(self.optimum)),
            "realized_abs_gen": self.realized_abs_gen,
            "sound": self.sound,
            "vacuous": self.vacuous,
            "details": clean(self.details),
        }

    def csv_rows(self) -> list:
        """Rows of ``kind, param, value, optimum, realized_abs_gen, sound``."""
        opt = self.value
        rows = [(self.bound_kind, p, v, opt, self.realized_abs_gen, self.sound) for p, v in self.grid]
        if not rows:
            rows = [(self.bound_kind, self.optimum[0], opt, opt, self.realized_abs_gen, self.sound)]
        return rows


def _report(kind, grid, optimum, realized, details) -> BoundReport:
    value = float(optimum[1])
    vacuous = math.isinf(value) or any(math.isinf(v) for _, v in grid)
    sound = True if math.isinf(value) else realized <= value + SOUND_TOL
    return BoundReport(kind, list(grid), tuple(optimum), float(realized), bool(sound),
                       bool(vacuous), details)


# ---------------------------------------------------------------------------
# sub-Gaussian constants


def _pairs_all(j: InducedJoint):
    return [(w, s) for w in j.hypotheses for s in j.samples]


def _half_width(m: np.ndarray) -> float:
    ev = np.linalg.eigvalsh(m)
    return float(ev[-1] - ev[0]) / 2.0


def default_mu(j: InducedJoint, inst: LearningInstance) -> float:
    """Largest spectral half-width of ``L(w,s)`` over all pairs."""
    key = ("mu", id(inst))
    if key not in j._cache:
        j._cache[key] = max(_half_width(inst.loss(w, s)) for w, s in _pairs_all(j))
    return j._cache[key]


def local_mu(inst: LearningInstance) -> float:
    """Largest spectral half-width of the local losses ``L(w,z)``."""
    return max(_half_width(m) for m in inst.losses.values())


def scalar_new(j: InducedJoint, inst: LearningInstance, w: str, s) -> float:
    """``Tr[L(w,s) (rho_te(s) (x) sigma_hyp(w))]``."""
    key = ("fnew", id(inst), w, s)
    if key not in j._cache:
        j._cache[key] = _tr(inst.loss(w, s), np.kron(j.rho_te[s], j.sigma_hyp_w[w]))
    return j._cache[key]


def scalar_old(j: InducedJoint, inst: LearningInstance, w: str, s) -> float:
    """``Tr[L(w,s) (rho_te(s) (x) sigma_hyp(w,s))]``, defined for dropped pairs too."""
    key = ("fold", id(inst), w, s)
    if key not in j._cache:
        j._cache[key] = _tr(inst.loss(w, s), j.reference_state(w, s))
    return j._cache[key]


def _range_tau(values) -> float:
    values = list(values)
    return (max(values) - min(values)) / 2.0


def default_tau(j: InducedJoint, inst: LearningInstance, which: str = "new") -> float:
    """Half the largest range over s of the scalar loss seen by the classical term."""
    f = scalar_new if which == "new" else scalar_old
    ws = j.support_w() if which == "new" else list(j.hypotheses)
    return max(_range_tau(f(j, inst, w, s) for s in j.samples) for w in ws)


def _local_hyp(j: InducedJoint, inst: LearningInstance, w: str, i: int) -> np.ndarray:
    key = ("hyp_i", w, i)
    if key not in j._cache:
        d_hyp = inst.dims[2]
        j._cache[key] = partial_trace_matrix(j.sigma_hyp_w[w], [d_hyp] * inst.n, [i])
    return j._cache[key]


def local_tau(j: InducedJoint, inst: LearningInstance) -> float:
    """Per-sample scalar range ``Tr[L(w,z) (rho_te(z) (x) sigma_hyp_i(w))]`` over z."""
    _require_iid(inst)
    d_te = inst.dims[0]
    rte = {z: partial_trace_matrix(inst.data_states[z], [d_te, inst.dims[1]], [0])
           for z in inst.sample_space}
    best = 0.0
    for w in j.support_w():
        for i in range(inst.n):
            h = _local_hyp(j, inst, w, i)
            vals = [_tr(inst.losses[(w, z)], np.kron(rte[z], h)) for z in inst.sample_space]
            best = max(best, _range_tau(vals))
    return best


def audit_constants(j: InducedJoint, inst: LearningInstance, mu: float, tau: float,
                    grid=None) -> dict:
    """Worst grid slack of the user constants against every state they must cover.

    Warns (RuntimeWarning) when a constant is violated somewhere on the grid.
    """
    grid = default_lambda_grid() if grid is None else grid
    worst_mu = math.inf
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for (w, s), rec in j.pairs.items():
            l = inst.loss(w, s)
            for st in (rec.sigma, j.reference_state(w, s), np.kron(j.rho_te[s], j.sigma_hyp_w[w])):
                worst_mu = min(worst_mu, audit_mu(l, st, mu, grid))
    worst_tau = math.inf
    for w in j.support_w():
        vals = [scalar_new(j, inst, w, s) for s in j.samples]
        for lam in grid:
            lam = float(lam)
            worst_tau = min(worst_tau, lam * lam * tau * tau / 2.0 - classical_mgf(vals, j.prior_n, lam))
    for name, worst, val in (("mu", worst_mu, mu), ("tau", worst_tau, tau)):
        if worst < -HOEFFDING_TOL:
            warnings.warn(f"certified {name}={val} violated on the lambda grid (slack {worst:.3e})",
                          RuntimeWarning)
    return {"mu_slack": float(worst_mu), "tau_slack": float(worst_tau)}


def _constants(j, inst, mu, tau, which="new"):
    """Resolve (mu, tau, source, audit) with the precedence argument > certificate > default."""
    audit = None
    if mu is None and tau is None and inst.cert is not None:
        mu, tau = inst.cert.mu, inst.cert.tau
        key = ("audit", id(inst), mu, tau)
        if key not in j._cache:
            j._cache[key] = audit_constants(j, inst, mu, tau)
        audit = j._cache[key]
        return mu, tau, inst.cert.source, audit
    src = "argument" if (mu is not None or tau is not None) else "derived"
    if mu is None:
        mu = default_mu(j, inst)
    if tau is None:
        tau = default_tau(j, inst, which)
    return float(mu), float(tau), src, audit


# ---------------------------------------------------------------------------
# divergences with caching


def _divergence(kind: str, rho: np.ndarray, sigma: np.ndarray, alpha: float | None) -> float:
    if kind == "kl" or alpha is None:
        v = quantum_relative_entropy(rho, sigma)
    elif kind == "modified":
        v = modified_sandwiched(rho, sigma, alpha)
    elif kind == "petz":
        v = petz_renyi(rho, sigma, alpha)
    else:
        raise ConfigurationError(f"divergence kind must be one of {DIVERGENCE_KINDS}, got {kind!r}")
    return math.inf if v.is_inf else max(float(v.value), 0.0)


def pair_divergences(j: InducedJoint, w: str, s, alpha: float | None, kind: str) -> tuple:
    """``(D(sigma(w,s) || rho_te (x) sigma_hyp(w,s)), D(sigma_hyp(w,s) || sigma_hyp(w)))``."""
    a = None if kind == "kl" else float(alpha)
    key = ("div", kind, a, w, s)
    if key not in j._cache:
        rec = j.pairs[(w, s)]
        d1 = _divergence(kind, rec.sigma, j.reference_state(w, s), a)
        d2 = _divergence(kind, rec.sigma_hyp, j.sigma_hyp_w[w], a)
        j._cache[key] = (d1, d2)
    return j._cache[key]


def _radical(mu_sq2: float, d: float, c: float) -> float:
    return math.inf if math.isinf(d) else math.sqrt(mu_sq2 * d / c)


def _divisor(alpha: float | None) -> float:
    return float(alpha) if alpha is not None and alpha < 1 else 1.0


def deviation_terms(j: InducedJoint, inst: LearningInstance, w: str, s, alpha: float | None,
                    divergence_kind: str, mu: float | None = None) -> tuple:
    """``(d1, d2) = (sqrt(2 mu^2 D1 / c), sqrt(2 mu^2 D2 / c))``, c = alpha below one, else 1."""
    if divergence_kind != "kl":
        if alpha is None or alpha <= 0 or alpha == 1:
            raise DomainError(f"alpha must lie in (0,1) or (1,inf), got {alpha!r}")
    if (w, s) not in j.pairs:
        raise DomainError(f"pair ({w!r}, {s!r}) has zero probability")
    mu = default_mu(j, inst) if mu is None else mu
    d1, d2 = pair_divergences(j, w, s, alpha, divergence_kind)
    c = 1.0 if divergence_kind == "kl" else _divisor(alpha)
    return _radical(2 * mu * mu, d1, c), _radical(2 * mu * mu, d2, c)


def quantum_term(j, inst, alpha, kind, mu, which=("d1", "d2")) -> float:
    """``E_{P_WS}`` of the selected deviation terms; +inf if any is infinite."""
    total = 0.0
    for (w, s), rec in j.pairs.items():
        d1, d2 = deviation_terms(j, inst, w, s, alpha, kind, mu)
        t = (d1 if "d1" in which else 0.0) + (d2 if "d2" in which else 0.0)
        if math.isinf(t):
            return math.inf
        total += rec.weight * t
    return total


def classical_gamma_term(j: InducedJoint, gamma: float, tau: float) -> float:
    """``E_W sqrt(2 tau^2 D_gamma(P_{S|W} || P^n) / c)``, c = gamma below one, else 1."""
    if gamma <= 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    total = 0.0
    c = _divisor(gamma)
    for w in j.support_w():
        d = classical_renyi(j.posterior_vector(w), j.prior_n, gamma)
        if d.is_inf:
            return math.inf
        total += j.marginal_w.prob(w) * math.sqrt(2 * tau * tau * max(float(d.value), 0.0) / c)
    return total


def mutual_information(j: InducedJoint) -> float:
    """``I[S;W] = D(P_WS || P_W x P_S)``."""
    return max(float(classical_kl(j.joint_matrix().ravel(), j.product_matrix().ravel()).value), 0.0)


def renyi_mutual_information(j: InducedJoint, gamma: float) -> float:
    """``I^c_gamma[S;W] = D_gamma(P_WS || P_W x P_S)``."""
    d = classical_renyi(j.joint_matrix().ravel(), j.product_matrix().ravel(), gamma)
    return math.inf if d.is_inf else max(float(d.value), 0.0)


# ---------------------------------------------------------------------------
# grids


def _safe(fn, x):
    v = fn(float(x))
    return math.inf if v is None or not math.isfinite(v) else float(v)


def minimize_on_grid(fn, grid) -> tuple:
    """Grid argmin refined by golden section inside its neighbouring grid points.

    Returns ``(argmin, value, [(x, fn(x)) for x in grid])``.
    """
    grid = sorted(float(x) for x in grid)
    if not grid:
        raise ConfigurationError("empty parameter grid")
    vals = [(x, _safe(fn, x)) for x in grid]
    k = min(range(len(vals)), key=lambda i: vals[i][1])
    best_x, best_v = vals[k]
    if math.isfinite(best_v) and 0 < k < len(grid) - 1:
        lo, hi = grid[k - 1], grid[k + 1]
        if vals[k - 1][1] > best_v and vals[k + 1][1] > best_v:
            res = minimize_scalar(lambda x: _safe(fn, x), bracket=(lo, best_x, hi),
                                  method="golden", options={"maxiter": GOLDEN_ITERATIONS})
            if lo < res.x < hi and res.fun < best_v:
                best_x, best_v = float(res.x), float(res.fun)
    return best_x, best_v, vals


def _split(grid, name):
    if grid is None:
        return list(default_low_grid()), list(default_high_grid())
    g = [float(x) for x in grid]
    bad = [x for x in g if x <= 0 or x == 1]
    if bad:
        raise DomainError(f"{name} grid values must lie in (0,1) or (1,inf), got {bad}")
    return [x for x in g if x < 1], [x for x in g if x > 1]


def _two_displays(quantum, classical, alpha_grid, gamma_grid):
    """Separate infima over alpha and gamma, once per display (below and above one).

    The reported grid pairs ``quantum(a) + classical(a)`` at a shared parameter.
    """
    a_lo, a_hi = _split(alpha_grid, "alpha")
    g_lo, g_hi = _split(gamma_grid, "gamma")
    displays = {}
    grid = []
    for name, ag, gg in (("below_one", a_lo, g_lo), ("above_one", a_hi, g_hi)):
        if not ag or not gg:
            continue
        qa, qv, qgrid = minimize_on_grid(quantum, ag)
        ca, cv, cgrid = minimize_on_grid(classical, gg)
        displays[name] = {"alpha": qa, "quantum": qv, "gamma": ca, "classical": cv, "value": qv + cv}
        cmap = dict(cgrid)
        for a, v in qgrid:
            c = cmap[a] if a in cmap else _safe(classical, a)
            grid.append((a, v + c))
    if not displays:
        raise ConfigurationError("alpha and gamma grids share no display (both below or above one)")
    best = min(displays.values(), key=lambda d: d["value"])
    return (best["alpha"], best["gamma"]), best["value"], sorted(grid), displays


# ---------------------------------------------------------------------------
# bounds


def bound_renyi(j: InducedJoint, inst: LearningInstance, alpha_grid=None, gamma_grid=None,
                kind: str = "modified", mu: float | None = None,
                tau: float | None = None) -> BoundReport:
    """Renyi family bound: separate infima over alpha and gamma per display."""
    if kind not in ("modified", "petz"):
        raise ConfigurationError(f"kind must be 'modified' or 'petz', got {kind!r}")
    mu, tau, src, audit = _constants(j, inst, mu, tau)
    opt, value, grid, displays = _two_displays(
        lambda a: quantum_term(j, inst, a, kind, mu),
        lambda g: classical_gamma_term(j, g, tau), alpha_grid, gamma_grid)
    realized = abs(expected_gen(j, inst))
    return _report(f"renyi-{'mod' if kind == 'modified' else 'petz'}", grid, (opt, value), realized,
                   {"mu": mu, "tau": tau, "constants": src, "audit": audit, "displays": displays})


def bound_kl(j: InducedJoint, inst: LearningInstance, mu: float | None = None,
             tau: float | None = None) -> BoundReport:
    """Relative-entropy bound with ``sqrt(2 tau^2 I[S;W])``."""
    mu, tau, src, audit = _constants(j, inst, mu, tau)
    q = quantum_term(j, inst, None, "kl", mu)
    mi = mutual_information(j)
    c = math.sqrt(2 * tau * tau * mi)
    realized = abs(expected_gen(j, inst))
    return _report("kl", [], (1.0, q + c), realized,
                   {"mu": mu, "tau": tau, "constants": src, "audit": audit, "quantum": q,
                    "classical": c, "mutual_information": mi})


def bound_caro_old(j: InducedJoint, inst: LearningInstance, alpha_grid=None, gamma_grid=None,
                   mu: float | None = None, tau: float | None = None) -> BoundReport:
    """Old-definition bound: the ``d1`` quantum term only, against ``|gen_old|``."""
    mu, tau, src, audit = _constants(j, inst, mu, tau, which="old")
    opt, value, grid, displays = _two_displays(
        lambda a: quantum_term(j, inst, a, "modified", mu, which=("d1",)),
        lambda g: classical_gamma_term(j, g, tau), alpha_grid, gamma_grid)
    q1 = quantum_term(j, inst, None, "kl", mu, which=("d1",))
    limit = q1 + math.sqrt(2 * tau * tau * mutual_information(j))
    realized = abs(expected_gen_old(j, inst))
    return _report("caro-old", grid, (opt, value), realized,
                   {"mu": mu, "tau": tau, "constants": src, "audit": audit, "displays": displays,
                    "limit_value": limit})


def bound_l1(j: InducedJoint, inst: LearningInstance, p: float = 1.0, mu: float | None = None,
             tau: float | None = None) -> BoundReport:
    """Trace-distance style bound, p = 1, or its Holder variant for p > 1.

    For p = 1, ``tau' = mu``.  For p > 1 the constants default to the
    largest ``||L(w,s) - c I||_q`` (c the spectral midpoint) and to the
    q-norm of the centred scalar losses over all (w, s).
    """
    p = float(p)
    if not p >= 1:
        raise DomainError(f"p must be at least 1, got {p}")
    q = math.inf if p == 1 else (1.0 if math.isinf(p) else p / (p - 1.0))
    pairs = _pairs_all(j)
    src = "argument" if mu is not None or tau is not None else "derived"
    if inst.cert is not None and mu is None and tau is None:
        mu, src = inst.cert.mu, inst.cert.source
        tau = mu if p == 1 else inst.cert.tau
    if mu is None:
        if p == 1:
            lo = min(float(np.linalg.eigvalsh(inst.loss(w, s))[0]) for w, s in pairs)
            hi = max(float(np.linalg.eigvalsh(inst.loss(w, s))[-1]) for w, s in pairs)
            mu = (hi - lo) / 2.0
        else:
            mu = 0.0
            for w, s in pairs:
                ev = np.linalg.eigvalsh(inst.loss(w, s))
                mu = max(mu, float(schatten_norm(np.diag(ev - (ev[0] + ev[-1]) / 2.0), q)))
    if tau is None:
        if p == 1:
            tau = mu
        else:
            g = np.array([scalar_old(j, inst, w, s) for w, s in pairs])
            g = g - (g.max() + g.min()) / 2.0
            tau = float(np.linalg.norm(g, q))
    qterm = 0.0
    for (w, s), rec in j.pairs.items():
        qterm += rec.weight * mu * schatten_norm(rec.sigma - j.reference_state(w, s), p)
    delta = (j.joint_matrix() - j.product_matrix()).ravel()
    cterm = tau * float(np.linalg.norm(delta, p))
    realized = abs(expected_gen_old(j, inst))
    return _report("l1" if p == 1 else "lp", [(p, qterm + cterm)], (p, qterm + cterm), realized,
                   {"mu": mu, "tau": tau, "constants": src, "quantum": qterm, "classical": cterm})


def _require_iid(inst: LearningInstance):
    if inst.mode != "iid_local":
        raise ConfigurationError("this bound needs an iid_local instance")


def local_posteriors(j: InducedJoint, w: str, i: int, z_labels) -> np.ndarray:
    """``P_{Z_i | W = w}`` as a vector over the local sample space."""
    idx = {z: k for k, z in enumerate(z_labels)}
    out = np.zeros(len(z_labels))
    for s, q in j.posteriors[w].items():
        out[idx[s[i]]] += q
    return out


def _per_sample_term(j, inst, gamma, tau) -> float:
    z_labels = inst.sample_space
    prior = inst.prior.probs
    c = _divisor(gamma)
    total = 0.0
    for i in range(inst.n):
        for w in j.support_w():
            d = classical_renyi(local_posteriors(j, w, i, z_labels), prior, gamma)
            if d.is_inf:
                return math.inf
            total += j.marginal_w.prob(w) * math.sqrt(2 * tau * tau * max(float(d.value), 0.0) / c)
    return total / inst.n


def _per_sample_mi_term(j, inst, tau) -> float:
    """``(1/n) sum_i sqrt(2 tau^2 I[Z_i;W])``."""
    z_labels = inst.sample_space
    prior = inst.prior.probs
    pw = j.marginal_w.probs
    total = 0.0
    for i in range(inst.n):
        joint = np.array([j.marginal_w.prob(w) * local_posteriors(j, w, i, z_labels)
                          if w in j.posteriors else np.zeros(len(z_labels)) for w in j.hypotheses])
        mi = max(float(classical_kl(joint.ravel(), np.outer(pw, prior).ravel()).value), 0.0)
        total += math.sqrt(2 * tau * tau * mi)
    return total / inst.n


def _iid_quantum(j, inst, alpha, kind, mu) -> float:
    e1 = e2 = 0.0
    for (w, s), rec in j.pairs.items():
        d1, d2 = pair_divergences(j, w, s, alpha, kind)
        e1 += rec.weight * d1
        e2 += rec.weight * d2
    c = inst.n * (1.0 if kind == "kl" else _divisor(alpha))
    return _radical(2 * mu * mu, e1, c) + _radical(2 * mu * mu, e2, c)


def bound_iid_individual(j: InducedJoint, inst: LearningInstance, alpha_grid=None,
                         gamma_grid=None, kind: str = "modified", mu: float | None = None,
                         tau: float | None = None) -> BoundReport:
    """Per-sample bound for iid_local instances.

    Quantum terms are ``sqrt(2 mu^2 E[D] / (n c))`` over the whole-sample
    states; the classical term averages ``P_{Z_i|W}`` against ``P`` over i.
    With ``kind="kl"`` there is no grid and the classical term is
    ``(1/n) sum_i sqrt(2 tau^2 I[Z_i;W])``.  ``mu`` and ``tau`` are local
    constants.
    """
    _require_iid(inst)
    if kind not in ("modified", "petz", "kl"):
        raise ConfigurationError(f"kind must be 'modified', 'petz' or 'kl', got {kind!r}")
    src, audit = "derived", None
    if mu is None and tau is None and inst.cert is not None:
        mu, tau, src = inst.cert.mu, inst.cert.tau, inst.cert.source
    elif mu is not None or tau is not None:
        src = "argument"
    mu = local_mu(inst) if mu is None else float(mu)
    tau = local_tau(j, inst) if tau is None else float(tau)
    realized = abs(expected_gen(j, inst))
    if kind == "kl":
        q = _iid_quantum(j, inst, None, "kl", mu)
        c = _per_sample_mi_term(j, inst, tau)
        return _report("iid", [], (1.0, q + c), realized,
                       {"mu": mu, "tau": tau, "constants": src, "audit": audit, "quantum": q,
                        "classical": c, "divergence": kind})
    opt, value, grid, displays = _two_displays(
        lambda a: _iid_quantum(j, inst, a, kind, mu),
        lambda g: _per_sample_term(j, inst, g, tau), alpha_grid, gamma_grid)
    return _report("iid", grid, (opt, value), realized,
                   {"mu": mu, "tau": tau, "constants": src, "audit": audit, "displays": displays,
                    "divergence": kind})


def _is_classical(inst: LearningInstance) -> bool:
    return inst.mode == "iid_local" and inst.dims == (1, 1, 1)


def classical_loss_tau(inst: LearningInstance) -> float:
    """``max_w (max_z l(w,z) - min_z l(w,z)) / 2`` for a classical embedding."""
    best = 0.0
    for w in inst.hypotheses:
        vals = [float(inst.losses[(w, z)][0, 0].real) for z in inst.sample_space]
        best = max(best, _range_tau(vals))
    return best


def classical_bounds(j: InducedJoint, inst: LearningInstance, gamma_grid=None,
                     tau: float | None = None) -> dict:
    """Mutual-information bounds of the scalar theory on a classical embedding.

    Keys: ``xu_raginsky`` (whole sample), ``bu`` (per sample),
    ``modak`` (per-sample Renyi, optimum over both displays) and
    ``modak_grid``.
    """
    if not _is_classical(inst):
        raise ConfigurationError("classical_bounds needs a classical embedding (dims 1, iid_local)")
    if tau is None:
        tau = inst.cert.tau if inst.cert is not None else classical_loss_tau(inst)
    n = inst.n
    xr = math.sqrt(2 * tau * tau * mutual_information(j) / n)
    bu = _per_sample_mi_term(j, inst, tau)
    lo, hi = _split(gamma_grid, "gamma")
    best, grid = (None, math.inf), []
    for g in (lo, hi):
        if not g:
            continue
        x, v, vals = minimize_on_grid(lambda gm: _per_sample_term(j, inst, gm, tau), g)
        grid += vals
        if v < best[1]:
            best = (x, v)
    realized = abs(expected_gen(j, inst))
    return {"xu_raginsky": xr, "bu": bu, "modak": best[1], "modak_gamma": best[0],
            "modak_grid": sorted(grid), "tau": tau, "realized_abs_gen": realized}


def evaluate(kind: str, j: InducedJoint, inst: LearningInstance, alpha_grid=None,
             gamma_grid=None, p: float = 2.0) -> BoundReport:
    """Dispatch by CLI kind name."""
    if kind == "l1":
        return bound_l1(j, inst, 1.0)
    if kind == "lp":
        return bound_l1(j, inst, p)
    if kind == "kl":
        return bound_kl(j, inst)
    if kind == "renyi-mod":
        return bound_renyi(j, inst, alpha_grid, gamma_grid, "modified")
    if kind == "renyi-petz":
        return bound_renyi(j, inst, alpha_grid, gamma_grid, "petz")
    if kind == "caro-old":
        return bound_caro_old(j, inst, alpha_grid, gamma_grid)
    if kind == "iid":
        return bound_iid_individual(j, inst, alpha_grid, gamma_grid)
    if kind == "classical":
        cb = classical_bounds(j, inst, gamma_grid)
        grid = [("xu_raginsky", cb["xu_raginsky"]), ("bu", cb["bu"]), ("modak", cb["modak"])]
        best = min(grid, key=lambda t: t[1])
        return _report("classical", grid, best, cb["realized_abs_gen"],
                       {"tau": cb["tau"], "modak_gamma": cb["modak_gamma"]})
    raise ConfigurationError(f"unknown bound kind {kind!r}; choose from {KINDS}")
