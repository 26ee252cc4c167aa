"""Two-qubit worked example: p-sweep and alpha-sweep of the expectation bounds.

Data states are product ``|psi_z><psi_z|_te (x) |psi_z><psi_z|_tr`` with
``|psi_z> = cos t_z |phi_z> + sin t_z |phi_z^perp>``; the learner measures
``{|phi_z><phi_z|, |phi_z^perp><phi_z^perp|}`` on the training copy and keeps
the post-measurement state.  The bounds depend on the loss only through the
certified constants ``mu = tau = 0.8``.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .bounds import (
    bound_kl,
    bound_renyi,
    classical_gamma_term,
    default_low_grid,
    minimize_on_grid,
    quantum_term,
)
from .divergences import ClassicalDist
from .errors import DomainError
from .framework import LearningInstance, expected_gen, induce
from .subgaussian import SubGaussianCert


@dataclass(frozen=True)
class Fig2Config:
    p_grid: tuple = tuple(round(0.5 + 0.05 * k, 10) for k in range(7))
    alpha_grid: tuple = tuple(float(a) for a in np.linspace(0.4, 1.0, 25, endpoint=False))
    p_star: float = 0.6
    cos2_theta: float = 0.45
    cos2_beta: float = 0.5
    phi0: tuple = (complex(-0.59, -0.29), complex(-0.25, 0.71))
    phi1: tuple = (complex(0.34, -0.42), complex(-0.83, -0.12))
    mu: float = 0.8
    tau: float = 0.8
    perp_sign: int = 1
    loss_scale: float = 1.6
    # optimum search for the p-sweep: the default grid below one plus points near one
    search_grid: tuple = field(default_factory=lambda: tuple(
        sorted(set(float(a) for a in default_low_grid()) | {0.99, 0.999, 0.9999})))

    def __post_init__(self):
        if any(not 0 < p < 1 for p in self.p_grid) or not 0 < self.p_star < 1:
            raise DomainError("p values must lie in (0,1)")
        if any(not 0 < a < 1 for a in self.alpha_grid):
            raise DomainError("alpha grid must lie in (0,1)")
        if self.perp_sign not in (1, -1):
            raise DomainError("perp_sign must be +1 or -1")


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def perp(v) -> np.ndarray:
    """``-conj(b)|0> + conj(a)|1>`` for ``v = a|0> + b|1>``."""
    a, b = v
    return np.array([-np.conj(b), np.conj(a)])


def psi_states(cfg: Fig2Config) -> dict:
    """``{z: (phi_z, phi_z_perp, psi_z)}`` with the angles from the positive square roots."""
    out = {}
    for z, phi, c2 in (("0", cfg.phi0, cfg.cos2_theta), ("1", cfg.phi1, cfg.cos2_beta)):
        f = unit(phi)
        fp = cfg.perp_sign * perp(f)
        c, s = math.sqrt(c2), math.sqrt(1.0 - c2)
        out[z] = (f, fp, unit(c * f + s * fp))
    return out


def _proj(v) -> np.ndarray:
    return np.outer(v, v.conj())


def fig2_loss(cfg: Fig2Config) -> np.ndarray:
    """``1.6 |00><00| - 0.8 I`` on ``te (x) hyp``: spectrum {-0.8, 0.8}."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = cfg.loss_scale
    return m - cfg.loss_scale / 2.0 * np.eye(4)


def build_fig2_instance(cfg: Fig2Config, p: float) -> LearningInstance:
    if not 0 < p < 1:
        raise DomainError(f"p must lie in (0,1), got {p}")
    st = psi_states(cfg)
    states = {z: np.kron(_proj(psi), _proj(psi)) for z, (_, _, psi) in st.items()}
    povms = {(z,): {"0": _proj(f), "1": _proj(fp)} for z, (f, fp, _) in st.items()}
    loss = fig2_loss(cfg)
    losses = {(w, z): loss for w in ("0", "1") for z in ("0", "1")}
    return LearningInstance(("0", "1"), ClassicalDist(("0", "1"), np.array([p, 1.0 - p])), 1,
                            "iid_local", (2, 2, 2), states, povms, {}, losses,
                            SubGaussianCert(cfg.mu, cfg.tau), ("0", "1"))


def _below_one_optimum(j, inst, kind, cfg) -> float:
    grid = cfg.search_grid
    _, q, _ = minimize_on_grid(lambda a: quantum_term(j, inst, a, kind, cfg.mu), grid)
    _, c, _ = minimize_on_grid(lambda g: classical_gamma_term(j, g, cfg.tau), grid)
    return q + c


def _p_row(cfg: Fig2Config, p: float) -> tuple:
    inst = build_fig2_instance(cfg, p)
    j = induce(inst)
    b_kl = bound_kl(j, inst, cfg.mu, cfg.tau).value
    b_mod = _below_one_optimum(j, inst, "modified", cfg)
    b_petz = _below_one_optimum(j, inst, "petz", cfg)
    return (float(p), b_kl, b_mod, b_petz, abs(expected_gen(j, inst)))


def sweep_p(cfg: Fig2Config | None = None, threads: int = 1) -> list:
    """Rows ``(p, B_kl, B_mod, B_petz, |gen|)`` with alpha, gamma optimized over (0,1)."""
    cfg = cfg or Fig2Config()
    ps = sorted(cfg.p_grid)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda p: _p_row(cfg, p), ps))
    return [_p_row(cfg, p) for p in ps]


def sweep_alpha(cfg: Fig2Config | None = None) -> list:
    """Rows ``(alpha, B_kl, B_mod(alpha), B_petz(alpha))`` at ``p_star`` with gamma = alpha."""
    cfg = cfg or Fig2Config()
    inst = build_fig2_instance(cfg, cfg.p_star)
    j = induce(inst)
    b_kl = bound_kl(j, inst, cfg.mu, cfg.tau).value
    rows = []
    for a in sorted(cfg.alpha_grid):
        c = classical_gamma_term(j, a, cfg.tau)
        rows.append((float(a), b_kl, quantum_term(j, inst, a, "modified", cfg.mu) + c,
                     quantum_term(j, inst, a, "petz", cfg.mu) + c))
    return rows


def renyi_reports(cfg: Fig2Config, p: float) -> dict:
    """Full reports of the three bounds at one p, for inspection."""
    inst = build_fig2_instance(cfg, p)
    j = induce(inst)
    return {"kl": bound_kl(j, inst, cfg.mu, cfg.tau),
            "renyi-mod": bound_renyi(j, inst, kind="modified", mu=cfg.mu, tau=cfg.tau),
            "renyi-petz": bound_renyi(j, inst, kind="petz", mu=cfg.mu, tau=cfg.tau)}


# ---------------------------------------------------------------------------
# emission

P_HEADER = ("p", "B_kl", "B_mod", "B_petz", "abs_gen")
ALPHA_HEADER = ("alpha", "B_kl", "B_mod", "B_petz")


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for r in sorted(rows, key=lambda r: r[0]):
        wr.writerow([_fmt(x) for x in r])
    return buf.getvalue()


COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#7f7f7f")


def to_svg(header, rows, title: str, series=None, width: int = 640, height: int = 420) -> str:
    """Static line plot: one polyline per column, axis labels and a legend."""
    rows = sorted(rows, key=lambda r: r[0])
    series = list(series or range(1, len(header)))
    xs = [float(r[0]) for r in rows]
    ys = [float(r[k]) for r in rows for k in series if math.isfinite(float(r[k]))]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    pad = 0.05 * (y1 - y0 or 1.0)
    y0, y1 = y0 - pad, y1 + pad
    left, right, top, bottom = 70, 150, 40, 50
    pw, ph = width - left - right, height - top - bottom

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
           f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
           f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
           f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>']
    for k in range(5):
        xv = x0 + (x1 - x0) * k / 4
        yv = y0 + (y1 - y0) * k / 4
        out.append(f'<text x="{sx(xv):.1f}" y="{top + ph + 18}" text-anchor="middle" '
                   f'font-size="11">{xv:.3g}</text>')
        out.append(f'<text x="{left - 6}" y="{sy(yv) + 4:.1f}" text-anchor="end" '
                   f'font-size="11">{yv:.4g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle" '
               f'font-size="13">{escape(header[0])}</text>')
    out.append(f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="13" '
               f'transform="rotate(-90 16 {top + ph / 2:.1f})">bound value</text>')
    for i, k in enumerate(series):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{sx(float(r[0])):.2f},{sy(float(r[k])):.2f}" for r in rows
                       if math.isfinite(float(r[k])))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        ly = top + 14 + 20 * i
        out.append(f'<line x1="{left + pw + 12}" y1="{ly}" x2="{left + pw + 36}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 42}" y="{ly + 4}" font-size="12">{escape(header[k])}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit(header, rows, path, fmt: str | None = None, title: str = "") -> Path:
    """Write a CSV or SVG file; the format follows the suffix unless given."""
    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".").lower()
    if fmt == "csv":
        text = to_csv(header, rows)
    elif fmt == "svg":
        text = to_svg(header, rows, title, series=[1, 2, 3])
    else:
        raise DomainError(f"unknown output format {fmt!r}")
    path.write_text(text, encoding="utf-8")
    return path


def reproduce(which: str, out_dir, cfg: Fig2Config | None = None, threads: int = 1) -> dict:
    """Run one sweep and write ``fig2a`` (p) or ``fig2b`` (alpha) as CSV and SVG."""
    cfg = cfg or Fig2Config()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if which == "p":
        rows, header, stem, title = sweep_p(cfg, threads), P_HEADER, "fig2a", "bounds versus p"
    elif which == "alpha":
        rows, header, stem = sweep_alpha(cfg), ALPHA_HEADER, "fig2b"
        title = f"bounds versus alpha at p = {cfg.p_star}"
    else:
        raise DomainError(f"which must be 'p' or 'alpha', got {which!r}")
    files = [emit(header, rows, out_dir / f"{stem}.{ext}", title=title) for ext in ("csv", "svg")]
    return {"which": which, "rows": rows, "header": header, "files": [str(f) for f in files]}
