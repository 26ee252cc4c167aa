"""Measured Renyi divergence and the variational lower-bound objective.

The measured divergence is estimated by maximizing the classical Renyi
divergence of the outcome distributions of a rank-one projective measurement
in the basis ``U = U0 exp(iA)``.  ``A`` is Hermitian with zero diagonal, since
diagonal phases leave the measurement unchanged.  Each restart starts from a
different ``U0`` and runs a local search over the real parameters of ``A``.
Every reported value is the classical divergence of an explicit measurement,
so it is a guaranteed lower estimate of the true measured divergence.
"""

from __future__ import annotations

import math
import warnings
import dataclasses
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from .divergences import (
    ALPHA_ONE_TOL,
    CONTAINMENT_TOL,
    DivergenceValue,
    POS_INF,
    _check_order,
    _kernel_weight,
    _state_pair,
    classical_kl,
    classical_renyi,
)
from .errors import ConfigurationError, DomainError, RangeError
from .linalg import hermitize, kron_all, matrix_of, psd_eig, random_unitary

_PENALTY = 1e30


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for the basis search.

    ``restarts`` counts the deterministic starts (identity, eigenbases of
    rho, sigma and rho - sigma) plus seeded Haar-random ones; ``extra_bases``
    adds caller-supplied warm starts on top.  ``method`` selects the local
    search run from every start: ``"bfgs"`` (quasi-Newton with the exact
    gradient of the chart ``U0 exp(iA)``) or ``"nelder-mead"``.  With BFGS
    every start is first run to the gradient norm ``screen_gtol`` and the
    best ``polish`` candidates are then refined to ``gtol``; Nelder-Mead runs every start
    to completion.  Both stop
    when the parameters move by less than ``xatol`` (relative for BFGS,
    simplex diameter for Nelder-Mead) or after ``max_iter`` iterations.
    """

    restarts: int = 8
    max_iter: int = 2000
    xatol: float = 1e-8
    initial_step: float = 0.4
    seed: int = 42
    extra_bases: tuple = field(default=(), compare=False)
    method: str = "bfgs"
    screen_gtol: float = 1e-2
    gtol: float = 1e-8
    polish: int = 2

    def with_extra(self, extra: tuple) -> "OptimizerConfig":
        return dataclasses.replace(self, extra_bases=tuple(extra))


def _hermitian_offdiag(x: np.ndarray, d: int, iu) -> np.ndarray:
    m = len(iu[0])
    a = np.zeros((d, d), dtype=complex)
    a[iu] = x[:m] + 1j * x[m:]
    return a + a.conj().T


def _expi(a: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(a)
    return (v * np.exp(1j * w)) @ v.conj().T


def pinched(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Outcome distribution of measuring ``rho`` in the columns of ``u``."""
    p = np.real(np.sum(u.conj() * (rho @ u), axis=0))
    return np.clip(p, 0.0, None)


def _classical_value(p: np.ndarray, q: np.ndarray, alpha: float):
    if abs(alpha - 1.0) < ALPHA_ONE_TOL:
        return classical_kl(p / p.sum(), q / q.sum())
    return classical_renyi(p / p.sum(), q / q.sum(), alpha)


def _lse(t: np.ndarray) -> float:
    m = float(np.max(t))
    return m + math.log(float(np.sum(np.exp(t - m))))


class _BasisObjective:
    """Classical divergence of the pinched pair and its partial derivatives.

    A fast path of :func:`classical_renyi` for strictly positive outcome
    distributions; returns None where the fast path does not apply.
    """

    def __init__(self, alpha: float):
        self.alpha = alpha
        self.kl = abs(alpha - 1.0) < ALPHA_ONE_TOL

    def value(self, p, q):
        if np.any(p <= 1e-300) or np.any(q <= 1e-300):
            return None
        a = self.alpha
        lp, lq = np.log(p), np.log(q)
        if self.kl:
            return float(np.sum(p * (lp - lq)))
        return _lse(a * lp + (1 - a) * lq) / (a - 1)

    def value_grad(self, p, q):
        if min(p.min(), q.min()) <= 1e-300:
            return None, None, None
        a = self.alpha
        lp, lq = np.log(p), np.log(q)
        if self.kl:
            dl = lp - lq
            return float((p * dl).sum()), dl + 1.0, -p / q
        t = a * lp + (1 - a) * lq
        tm = t.max()
        e = np.exp(t - tm)
        se = e.sum()
        w = e / se
        return (tm + math.log(se)) / (a - 1), (a / (a - 1)) * w / p, -w / q


def _as_value(v, alpha) -> DivergenceValue:
    return DivergenceValue(POS_INF if v is None else float(v), alpha, "measured")


def _safe_value(obj: _BasisObjective, r, s, u):
    p, q = pinched(r, u), pinched(s, u)
    v = obj.value(p, q)
    if v is None:
        dv = _classical_value(p, q, obj.alpha)
        return None if dv.is_inf else dv.finite
    return v


class _LocalChart:
    """``x -> -f(U0 exp(iA(x)))`` with its exact gradient.

    The derivative of the exponential uses the divided differences of ``exp``
    on the spectrum of ``iA``, which for eigenvalues l_j, l_k equal
    ``exp(i(l_j + l_k)/2) sinc((l_j - l_k)/2)``.
    """

    def __init__(self, r, s, alpha, u0):
        self.obj = _BasisObjective(alpha)
        self.r0 = u0.conj().T @ r @ u0
        self.s0 = u0.conj().T @ s @ u0
        self.u0 = u0
        d = r.shape[0]
        self.d = d
        self.iu = np.triu_indices(d, 1)
        self.m = len(self.iu[0])
        self.upper = self.iu[0] * d + self.iu[1]
        self.lower = self.iu[1] * d + self.iu[0]

    def _matrix(self, x):
        a = np.zeros(self.d * self.d, dtype=complex)
        c = x[:self.m] + 1j * x[self.m:]
        a[self.upper] = c
        a[self.lower] = c.conj()
        return a.reshape(self.d, self.d)

    def basis(self, x):
        return self.u0 @ _expi(self._matrix(x))

    def __call__(self, x):
        lam, v = np.linalg.eigh(self._matrix(x))
        vh = v.conj().T
        ph = np.exp(1j * lam)
        w = (v * ph) @ vh
        wh = w.conj().T
        whr = wh @ self.r0
        whs = wh @ self.s0
        wt = w.T
        p = (whr * wt).sum(1).real
        q = (whs * wt).sum(1).real
        f, g, h = self.obj.value_grad(p, q)
        if f is None:
            return _PENALTY, np.zeros_like(x)
        xm = g[:, None] * whr + h[:, None] * whs
        # divided differences of t -> exp(it), written as exp(i(a+b)/2) sinc((a-b)/2)
        half = 0.5 * (lam[:, None] - lam[None, :])
        small = np.abs(half) < 1e-8
        sinc = np.sin(half) / np.where(small, 1.0, half)
        sinc[small] = 1.0
        eh = np.exp(0.5j * lam)
        fmat = (eh[:, None] * eh[None, :]) * sinc
        z = (v @ ((vh @ xm @ v) * fmat) @ vh).ravel()
        zu, zl = z[self.upper], z[self.lower]
        return -f, np.concatenate([2.0 * (zu + zl).imag, 2.0 * (zl - zu).real])


def _bfgs_minimize(fun, x0, gtol: float, xrtol: float, max_iter: int):
    """Quasi-Newton descent with Armijo backtracking.

    A lean loop instead of scipy's BFGS: at these dimensions scipy's
    per-iteration bookkeeping costs more than the objective.
    """
    x = x0
    f, g = fun(x)
    n = x.size
    h = np.eye(n)
    it, status = 0, "max_iter"
    while it < max_iter:
        if float(np.abs(g).max()) <= gtol:
            status = "gtol"
            break
        p = -h @ g
        slope = float(p @ g)
        if slope >= 0:
            h = np.eye(n)
            p, slope = -g, -float(g @ g)
        pn = math.sqrt(float(p @ p))
        t = min(1.0, 1.0 / pn) if pn > 0 else 1.0
        while True:
            xn = x + t * p
            fn, gn = fun(xn)
            if fn <= f + 1e-4 * t * slope:
                break
            t *= 0.5
            if t * pn < 1e-14:
                return x, f, g, it, "stalled"
        step = xn - x
        y = gn - g
        sy = float(step @ y)
        ss, yy = float(step @ step), float(y @ y)
        if sy > 1e-12 * math.sqrt(ss * yy):
            if it == 0:
                h = (sy / yy) * np.eye(n)
            rho = 1.0 / sy
            hy = h @ y
            sc, hc = step[:, None], hy[:, None]
            h = (h - rho * (sc * hy + hc * step)
                 + (rho * rho * float(y @ hy) + rho) * (sc * step))
        x, f, g = xn, fn, gn
        it += 1
        if math.sqrt(ss) <= xrtol * (xrtol + math.sqrt(float(x @ x))):
            status = "xtol"
            break
    return x, f, g, it, status


def _bfgs(r, s, alpha, u0, cfg: OptimizerConfig, gtol: float = 1e-10):
    chart = _LocalChart(r, s, alpha, u0)
    x0 = np.zeros(2 * len(chart.iu[0]))
    f0, _ = chart(x0)
    if f0 >= _PENALTY:
        return u0, {"iterations": 0, "converged": False, "grad_norm": math.nan}
    x, f, g, it, status = _bfgs_minimize(chart, x0, gtol, cfg.xatol, cfg.max_iter)
    gn = float(np.linalg.norm(g))
    # a stalled line search at a small gradient is a flat optimum
    ok = status in ("gtol", "xtol") or (status == "stalled" and gn < max(gtol, 1e-6))
    return chart.basis(x), {"iterations": it, "converged": ok, "grad_norm": gn}


class _BatchChart:
    """:class:`_LocalChart` for a stack of start bases, evaluated together.

    Rows whose outcome distributions leave the fast path get the penalty
    value and a zero gradient.
    """

    def __init__(self, r, s, alpha, u0s):
        self.alpha = alpha
        self.kl = abs(alpha - 1.0) < ALPHA_ONE_TOL
        self.u0 = u0s
        u0h = np.conj(np.swapaxes(u0s, 1, 2))
        self.r0 = u0h @ r @ u0s
        self.s0 = u0h @ s @ u0s
        d = r.shape[0]
        self.d = d
        iu = np.triu_indices(d, 1)
        self.m = len(iu[0])
        self.upper = iu[0] * d + iu[1]
        self.lower = iu[1] * d + iu[0]

    def _matrix(self, x):
        k = x.shape[0]
        a = np.zeros((k, self.d * self.d), dtype=complex)
        c = x[:, :self.m] + 1j * x[:, self.m:]
        a[:, self.upper] = c
        a[:, self.lower] = c.conj()
        return a.reshape(k, self.d, self.d)

    def basis(self, x, idx):
        lam, v = np.linalg.eigh(self._matrix(x))
        w = (v * np.exp(1j * lam)[:, None, :]) @ np.conj(np.swapaxes(v, 1, 2))
        return self.u0[idx] @ w

    def __call__(self, x, idx):
        lam, v = np.linalg.eigh(self._matrix(x))
        vh = np.conj(np.swapaxes(v, 1, 2))
        w = (v * np.exp(1j * lam)[:, None, :]) @ vh
        wh = np.conj(np.swapaxes(w, 1, 2))
        whr = wh @ self.r0[idx]
        whs = wh @ self.s0[idx]
        wt = np.swapaxes(w, 1, 2)
        p = (whr * wt).sum(2).real
        q = (whs * wt).sum(2).real
        ok = np.minimum(p.min(1), q.min(1)) > 1e-300
        p = np.where(ok[:, None], p, 1.0)
        q = np.where(ok[:, None], q, 1.0)
        lp, lq = np.log(p), np.log(q)
        a = self.alpha
        if self.kl:
            dl = lp - lq
            f = (p * dl).sum(1)
            g, h = dl + 1.0, -p / q
        else:
            t = a * lp + (1 - a) * lq
            tm = t.max(1, keepdims=True)
            e = np.exp(t - tm)
            se = e.sum(1, keepdims=True)
            wgt = e / se
            f = (tm[:, 0] + np.log(se[:, 0])) / (a - 1)
            g, h = (a / (a - 1)) * wgt / p, -wgt / q
        xm = g[:, :, None] * whr + h[:, :, None] * whs
        half = 0.5 * (lam[:, :, None] - lam[:, None, :])
        small = np.abs(half) < 1e-8
        sinc = np.sin(half) / np.where(small, 1.0, half)
        sinc[small] = 1.0
        eh = np.exp(0.5j * lam)
        fmat = (eh[:, :, None] * eh[:, None, :]) * sinc
        z = (v @ ((vh @ xm @ v) * fmat) @ vh).reshape(len(idx), -1)
        zu, zl = z[:, self.upper], z[:, self.lower]
        grad = np.concatenate([2.0 * (zu + zl).imag, 2.0 * (zl - zu).real], axis=1)
        fval = np.where(ok, -f, _PENALTY)
        grad[~ok] = 0.0
        return fval, grad


def _bfgs_batch(fun, x0, gtol: float, xrtol: float, max_iter: int):
    """:func:`_bfgs_minimize` run in lockstep on the rows of ``x0``.

    Each row keeps its own inverse Hessian and step length; rows leave the
    loop independently when they converge or stall.
    """
    k, n = x0.shape
    rows = np.arange(k)
    x = x0.copy()
    f, g = fun(x, rows)
    h = np.tile(np.eye(n), (k, 1, 1))
    its = np.zeros(k, dtype=int)
    status = ["max_iter"] * k
    active = np.ones(k, dtype=bool)
    fresh = np.ones(k, dtype=bool)
    for _ in range(max_iter):
        for i in np.flatnonzero(active & (np.abs(g).max(1) <= gtol)):
            status[i] = "gtol"
            active[i] = False
        if not active.any():
            break
        p = -np.einsum("kij,kj->ki", h, g)
        slope = (p * g).sum(1)
        bad = active & (slope >= 0)
        h[bad] = np.eye(n)
        p[bad] = -g[bad]
        slope[bad] = -(g[bad] ** 2).sum(1)
        pn = np.sqrt((p * p).sum(1))
        t = np.where(pn > 0, np.minimum(1.0, 1.0 / np.where(pn > 0, pn, 1.0)), 1.0)
        xn, fn, gn = x.copy(), f.copy(), g.copy()
        need = active.copy()
        while need.any():
            idx = np.flatnonzero(need)
            trial = x[idx] + t[idx, None] * p[idx]
            ft, gt = fun(trial, idx)
            good = ft <= f[idx] + 1e-4 * t[idx] * slope[idx]
            acc = idx[good]
            xn[acc], fn[acc], gn[acc] = trial[good], ft[good], gt[good]
            need[acc] = False
            rej = idx[~good]
            t[rej] *= 0.5
            for i in rej[t[rej] * pn[rej] < 1e-14]:
                status[i] = "stalled"
                active[i] = need[i] = False
        for i in np.flatnonzero(active):
            step = xn[i] - x[i]
            y = gn[i] - g[i]
            sy = float(step @ y)
            ss, yy = float(step @ step), float(y @ y)
            if sy > 1e-12 * math.sqrt(ss * yy):
                if fresh[i]:
                    h[i] = (sy / yy) * np.eye(n)
                rho = 1.0 / sy
                hy = h[i] @ y
                h[i] = (h[i] - rho * (np.outer(step, hy) + np.outer(hy, step))
                        + (rho * rho * float(y @ hy) + rho) * np.outer(step, step))
            fresh[i] = False
            x[i], f[i], g[i] = xn[i], fn[i], gn[i]
            its[i] += 1
            if math.sqrt(ss) <= xrtol * (xrtol + math.sqrt(float(x[i] @ x[i]))):
                status[i] = "xtol"
                active[i] = False
    return x, f, g, its, status


def _screen_batch(r, s, alpha, starts, cfg: OptimizerConfig):
    """Screen every start to ``cfg.screen_gtol`` at once; same output as :func:`_optimize_basis`."""
    u0s = np.stack([u for _, u in starts])
    chart = _BatchChart(r, s, alpha, u0s)
    rows = np.arange(len(starts))
    x0 = np.zeros((len(starts), 2 * chart.m))
    x, _, g, its, status = _bfgs_batch(chart, x0, cfg.screen_gtol, cfg.xatol, cfg.max_iter)
    bases = chart.basis(x, rows)
    obj = _BasisObjective(alpha)
    out = []
    for i, (_, u0) in enumerate(starts):
        gn = float(np.linalg.norm(g[i]))
        ok = status[i] in ("gtol", "xtol") or (status[i] == "stalled" and gn < max(cfg.screen_gtol, 1e-6))
        info = {"iterations": int(its[i]), "converged": ok, "grad_norm": gn}
        v = _as_value(_safe_value(obj, r, s, bases[i]), alpha)
        v0 = _as_value(_safe_value(obj, r, s, u0), alpha)
        u = bases[i]
        if not v0.is_inf and (v.is_inf is False and v.finite < v0.finite):
            u, v = u0, v0
        out.append((v, u, info))
    return out


def _nelder_mead(r, s, alpha, u0, cfg: OptimizerConfig):
    obj = _BasisObjective(alpha)
    d = r.shape[0]
    iu = np.triu_indices(d, 1)
    nparam = 2 * len(iu[0])

    def basis(x):
        return u0 @ _expi(_hermitian_offdiag(x, d, iu))

    def objective(x):
        v = _safe_value(obj, r, s, basis(x))
        return _PENALTY if v is None else -v

    x0 = np.zeros(nparam)
    simplex = np.vstack([x0] + [cfg.initial_step * e for e in np.eye(nparam)])
    res = minimize(objective, x0, method="Nelder-Mead",
                   options={"maxiter": cfg.max_iter, "xatol": cfg.xatol, "fatol": np.inf,
                            "initial_simplex": simplex, "adaptive": nparam > 6})
    x = res.x if res.fun <= objective(x0) else x0
    h = 1e-6
    grad = np.array([(objective(x + h * e) - objective(x - h * e)) / (2 * h)
                     for e in np.eye(nparam)])
    grad = grad[np.abs(grad) < 1e20]
    return basis(x), {"iterations": int(res.nit), "converged": bool(res.success),
                      "grad_norm": float(np.linalg.norm(grad)) if grad.size else 0.0}


def _start_bases(r: np.ndarray, s: np.ndarray, cfg: OptimizerConfig) -> list[tuple[str, np.ndarray]]:
    d = r.shape[0]
    starts = [("identity", np.eye(d, dtype=complex))]
    for name, m in (("rho", r), ("sigma", s), ("rho-sigma", r - s)):
        _, v = np.linalg.eigh(hermitize(m))
        starts.append((name, v.astype(complex)))
    rng = np.random.default_rng(cfg.seed)
    for k in range(max(cfg.restarts - 4, 0)):
        starts.append((f"random{k}", random_unitary(d, rng)))
    starts = starts[:max(cfg.restarts, 1)]
    for k, u in enumerate(cfg.extra_bases):
        u = np.asarray(u, dtype=complex)
        if u.shape != (d, d):
            raise ConfigurationError(f"warm-start basis has shape {u.shape}, want {(d, d)}")
        starts.append((f"warm{k}", u))
    return starts


def _optimize_basis(r, s, alpha, u0, cfg: OptimizerConfig, gtol: float = 1e-10):
    if r.shape[0] == 1:
        u, info = u0, {"iterations": 0, "converged": True, "grad_norm": 0.0}
    elif cfg.method == "bfgs":
        u, info = _bfgs(r, s, alpha, u0, cfg, gtol)
    elif cfg.method == "nelder-mead":
        u, info = _nelder_mead(r, s, alpha, u0, cfg)
    else:
        raise ConfigurationError(f"unknown optimizer method {cfg.method!r}")
    obj = _BasisObjective(alpha)
    v = _as_value(_safe_value(obj, r, s, u), alpha)
    v0 = _as_value(_safe_value(obj, r, s, u0), alpha)
    if not v0.is_inf and (v.is_inf is False and v.finite < v0.finite):
        u, v = u0, v0
    return v, u, info


def measured_renyi(rho, sigma, alpha: float, config: OptimizerConfig | None = None,
                   return_basis: bool = False):
    """Lower estimate of the measured Renyi divergence by basis optimization.

    The value is the best classical divergence found over all restarts.
    ``diagnostics`` records per-restart values, iteration counts, the spread
    between restarts, a finite-difference gradient norm at the optimum and a
    ``warning`` flag set when no restart met the convergence criterion.
    """
    cfg = config or OptimizerConfig()
    alpha = _check_order(alpha)
    r, s = _state_pair(rho, sigma)
    d = r.shape[0]
    if alpha > 1 or abs(alpha - 1.0) < ALPHA_ONE_TOL:
        ws, vs = psd_eig(s)
        if _kernel_weight(r, ws, vs) > CONTAINMENT_TOL:
            basis = vs
            out = DivergenceValue(POS_INF, alpha, "measured",
                                  {"restarts": 0, "reason": "support not contained"})
            return (out, basis) if return_basis else out
    starts = _start_bases(r, s, cfg)
    names = [n for n, _ in starts]
    screen_gtol = cfg.screen_gtol if cfg.method == "bfgs" else 1e-10
    screened = []
    if cfg.method == "bfgs" and d > 1:
        screened = _screen_batch(r, s, alpha, starts, cfg)
        inf = [k for k, t in enumerate(screened) if t[0].is_inf]
        if inf:
            screened = screened[:inf[0] + 1]
    else:
        for name, u0 in starts:
            v, u, info = _optimize_basis(r, s, alpha, u0, cfg, screen_gtol)
            screened.append((v, u, info))
            if v.is_inf:
                break
    if screened[-1][0].is_inf:
        v, u, info = screened[-1]
        out = DivergenceValue(POS_INF, alpha, "measured",
                              {"restarts": len(screened), "starts": names[:len(screened)],
                               "reason": "a measurement separates the supports"})
        return (out, u) if return_basis else out
    order = sorted(range(len(screened)), key=lambda k: -screened[k][0].finite)
    finalists = order if cfg.method != "bfgs" else order[:max(cfg.polish, 1)]
    final = {}
    for k in finalists:
        v, u, info = screened[k]
        if cfg.method == "bfgs" and d > 1:
            v2, u2, info2 = _optimize_basis(r, s, alpha, u, cfg, cfg.gtol)
            info2 = dict(info2, iterations=info["iterations"] + info2["iterations"])
            if not v2.is_inf and v2.finite >= v.finite:
                v, u = v2, u2
            info = info2
        final[k] = (v, u, info)
    best_k = max(final, key=lambda k: final[k][0].finite)
    best_v, best_u, best_info = final[best_k]
    fvals = [final[k][0].finite for k in finalists]
    diag = {
        "restarts": len(screened),
        "starts": names,
        "values": [final[k][0].finite if k in final else screened[k][0].finite
                   for k in range(len(screened))],
        "polished": [names[k] for k in finalists],
        "iterations": [final[k][2]["iterations"] if k in final else screened[k][2]["iterations"]
                       for k in range(len(screened))],
        "converged": [final[k][2]["converged"] for k in finalists],
        "spread": float(max(fvals) - min(fvals)),
        "screen_spread": float(screened[order[0]][0].finite - screened[order[-1]][0].finite),
        "final_gradient_norm": best_info["grad_norm"],
        "warning": not best_info["converged"],
    }
    if diag["warning"]:
        warnings.warn("measured_renyi: no restart met the convergence criterion", RuntimeWarning)
    out = DivergenceValue(best_v.value, alpha, "measured", diag)
    return (out, best_u) if return_basis else out


def tensor_power_trend(rho, sigma, alpha: float, n_max: int,
                       config: OptimizerConfig | None = None, dim_cap: int = 8):
    """Per-copy measured divergence of ``rho^{(x)n}`` vs ``sigma^{(x)n}`` for n = 1..n_max.

    The basis found for ``n - 1`` copies, tensored with the single-copy basis,
    is passed as an extra warm start for ``n`` copies.
    """
    cfg = config or OptimizerConfig()
    r, s = _state_pair(rho, sigma)
    d = r.shape[0]
    if n_max < 1 or d ** n_max > dim_cap:
        raise ConfigurationError(f"tensor power dimension {d}^{n_max} exceeds the cap {dim_cap}")
    out = []
    bases = {}
    for n in range(1, n_max + 1):
        rn, sn = kron_all([r] * n), kron_all([s] * n)
        extra = ()
        if n > 1:
            extra = (np.kron(bases[n - 1], bases[1]),)
            if n > 2 and n % 2 == 0:
                extra = extra + (np.kron(bases[n // 2], bases[n // 2]),)
        c = cfg.with_extra(extra)
        v, u = measured_renyi(rn, sn, alpha, c, return_basis=True)
        bases[n] = u
        out.append((n, POS_INF if v.is_inf else v.finite / n))
    return out


# ---------------------------------------------------------------------------
# variational objective


def _log_trace_exp(h_w: np.ndarray, h_v: np.ndarray, state: np.ndarray, t: float) -> float:
    """``log Tr[e^{tH} state]`` from the eigenpairs of H, computed with a shift."""
    weights = np.real(np.einsum("ij,ik,kj->j", h_v.conj(), state, h_v))
    weights = np.clip(weights, 0.0, None)
    mask = weights > 0
    if not np.any(mask):
        return -math.inf
    return float(logsumexp(t * h_w[mask], b=weights[mask]))


def variational_objective(rho, sigma, alpha: float, h) -> float:
    """``a/(a-1) log Tr[e^{(a-1)H} rho] - log Tr[e^{aH} sigma]``.

    The expression is invariant under ``H -> H + cI``; H is shifted by its
    largest eigenvalue before exponentiating to avoid overflow.
    """
    alpha = _check_order(alpha)
    r, s = _state_pair(rho, sigma)
    hm = hermitize(matrix_of(h))
    if hm.shape != r.shape:
        raise ConfigurationError("H and the states must have the same dimension")
    w, v = np.linalg.eigh(hm)
    w = w - w[-1]
    if max(abs(alpha), abs(alpha - 1)) * float(w[-1] - w[0]) > 1400:
        raise RangeError("spectral width of H too large for double precision")
    a = _log_trace_exp(w, v, r, alpha - 1.0)
    b = _log_trace_exp(w, v, s, alpha)
    return alpha / (alpha - 1.0) * a - b


def variational_lower_bound(rho, sigma, alpha: float, config: OptimizerConfig | None = None,
                            basis: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """Maximize the variational objective over Hermitian H by Nelder-Mead.

    The start is ``H0 = U diag(log p/q) U^+`` with p, q the distributions of
    rho and sigma measured in ``basis`` (eigenbasis of rho by default).  Used
    as a self-test only: the result never exceeds the divergences it bounds.
    """
    cfg = config or OptimizerConfig()
    alpha = _check_order(alpha)
    r, s = _state_pair(rho, sigma)
    d = r.shape[0]
    if basis is None:
        _, basis = np.linalg.eigh(r)
    p, q = pinched(r, basis), pinched(s, basis)
    h0 = (basis * (np.log(np.maximum(p, 1e-300)) - np.log(np.maximum(q, 1e-300)))) @ basis.conj().T
    h0 = hermitize(h0)
    iu = np.triu_indices(d, 1)
    m = len(iu[0])

    def build(x):
        a = np.diag(x[:d]).astype(complex)
        a[iu] = x[d:d + m] + 1j * x[d + m:]
        a = a + np.triu(a, 1).conj().T
        return h0 + a

    def objective(x):
        try:
            val = variational_objective(r, s, alpha, build(x))
        except RangeError:
            return _PENALTY
        return -val if math.isfinite(val) else _PENALTY

    n = d + 2 * m
    x0 = np.zeros(n)
    simplex = np.vstack([x0] + [0.1 * e for e in np.eye(n)])
    res = minimize(objective, x0, method="Nelder-Mead",
                   options={"maxiter": cfg.max_iter, "xatol": cfg.xatol, "fatol": np.inf,
                            "initial_simplex": simplex, "adaptive": n > 6})
    x = res.x if res.fun <= objective(x0) else x0
    return -objective(x), build(x)


def classical_dual_variable(p, q) -> np.ndarray:
    """The maximizer ``h = log(p/q)`` of the classical variational form."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(p <= 0) or np.any(q <= 0):
        raise DomainError("the classical dual variable needs strictly positive distributions")
    return np.log(p) - np.log(q)

