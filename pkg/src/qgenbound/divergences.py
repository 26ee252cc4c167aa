"""Classical and quantum divergences.

Every public function returns a :class:`DivergenceValue`.  Divergences that are
infinite carry the :data:`POS_INF` marker instead of a float, and the marker
refuses arithmetic so an infinite term can never silently flow into a sum.
Orders within ``ALPHA_ONE_TOL`` of one are routed to the relative entropy (or
KL divergence in the classical case).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import ConfigurationError, DomainError
from .linalg import SUPPORT_EPS, DensityOperator, hermitize, matrix_of, psd_eig

ALPHA_ONE_TOL = 1e-6
CONTAINMENT_TOL = 1e-12
SV_REL_TOL = 1e-14

KINDS = (
    "classical", "kl", "smooth_max", "petz", "sandwiched", "reverse_sandwiched",
    "modified_sandwiched", "measured", "relative_entropy",
)


class _PositiveInfinity:
    """Marker for a divergence equal to +infinity.

    It compares greater than every real number and raises on arithmetic.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "+inf"

    def __str__(self):
        return "+inf"

    def __reduce__(self):
        return (_PositiveInfinity, ())

    def _refuse(self, *_):
        raise TypeError("cannot do arithmetic with the +inf divergence marker")

    __add__ = __radd__ = __sub__ = __rsub__ = __mul__ = __rmul__ = _refuse
    __truediv__ = __rtruediv__ = __neg__ = __float__ = __pow__ = _refuse

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("+inf-marker")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


POS_INF = _PositiveInfinity()


@dataclass(frozen=True)
class DivergenceValue:
    value: Any
    alpha: float | None
    kind: str
    diagnostics: dict | None = field(default=None, compare=False)

    @property
    def is_inf(self) -> bool:
        return self.value is POS_INF

    @property
    def finite(self) -> float:
        """The value as a float; raises if it is the infinity marker."""
        if self.is_inf:
            raise DomainError(f"{self.kind} divergence is +inf")
        return float(self.value)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "alpha": self.alpha,
            "value": "+inf" if self.is_inf else float(self.value),
        }
        if self.diagnostics:
            out["diagnostics"] = {k: v for k, v in self.diagnostics.items() if _jsonable(v)}
        return out


def _jsonable(v) -> bool:
    if isinstance(v, (bool, int, float, str)) or v is None:
        return True
    if isinstance(v, (list, tuple)):
        return all(_jsonable(x) for x in v)
    return False


def _val(x: float, alpha, kind, diagnostics=None) -> DivergenceValue:
    return DivergenceValue(float(x), None if alpha is None else float(alpha), kind, diagnostics)


def _inf(alpha, kind, diagnostics=None) -> DivergenceValue:
    return DivergenceValue(POS_INF, None if alpha is None else float(alpha), kind, diagnostics)


# ---------------------------------------------------------------------------
# classical


@dataclass(frozen=True)
class ClassicalDist:
    labels: tuple
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).ravel()
        labels = tuple(self.labels)
        if len(labels) != p.size:
            raise ConfigurationError(f"{len(labels)} labels for {p.size} probabilities")
        if np.any(~np.isfinite(p)) or np.any(p < 0):
            raise DomainError("probabilities must be finite and nonnegative")
        if abs(float(p.sum()) - 1.0) > 1e-10:
            raise DomainError(f"probabilities sum to {p.sum()!r}")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_probs(cls, probs: Sequence[float]) -> "ClassicalDist":
        probs = np.asarray(probs, dtype=float)
        return cls(tuple(range(probs.size)), probs)

    def prob(self, label) -> float:
        return float(self.probs[self.labels.index(label)])


def _probs(p) -> np.ndarray:
    if isinstance(p, ClassicalDist):
        return np.asarray(p.probs, dtype=float)
    a = np.asarray(p, dtype=float).ravel()
    if np.any(~np.isfinite(a)):
        raise DomainError("probability vector has non-finite entries")
    return a


def _clip(p: np.ndarray) -> np.ndarray:
    top = float(np.max(p)) if p.size else 0.0
    return np.where(p < SUPPORT_EPS * max(top, 0.0), 0.0, p)


def _check_order(alpha: float, name: str = "alpha") -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0 or alpha == 1.0:
        raise DomainError(f"{name} must lie in (0,1) or (1,inf), got {alpha}")
    return alpha


def _near_one(alpha: float) -> bool:
    return abs(alpha - 1.0) < ALPHA_ONE_TOL


def _pair(p, q) -> tuple[np.ndarray, np.ndarray]:
    p, q = _probs(p), _probs(q)
    if p.shape != q.shape:
        raise ConfigurationError(f"distribution sizes differ: {p.size} vs {q.size}")
    return _clip(p), _clip(q)


def classical_kl(p, q) -> DivergenceValue:
    """Kullback-Leibler divergence with ``0 log 0 = 0``."""
    p, q = _pair(p, q)
    sp = p > 0
    if np.any(sp & (q <= 0)):
        return _inf(1.0, "kl")
    return _val(float(np.sum(p[sp] * (np.log(p[sp]) - np.log(q[sp])))), 1.0, "kl")


def classical_log_moment(p: np.ndarray, q: np.ndarray, gamma: float) -> float | None:
    """``log sum p^g q^(1-g)`` over the common support, or None when it is empty."""
    both = (p > 0) & (q > 0)
    if not np.any(both):
        return None
    return float(logsumexp(gamma * np.log(p[both]) + (1.0 - gamma) * np.log(q[both])))


def classical_renyi(p, q, gamma: float) -> DivergenceValue:
    """Classical Renyi divergence of order ``gamma``."""
    gamma = _check_order(gamma, "gamma")
    if _near_one(gamma):
        v = classical_kl(p, q)
        return DivergenceValue(v.value, gamma, "classical")
    p, q = _pair(p, q)
    if gamma > 1 and np.any((p > 0) & (q <= 0)):
        return _inf(gamma, "classical")
    lm = classical_log_moment(p, q, gamma)
    if lm is None:
        return _inf(gamma, "classical")
    return _val(lm / (gamma - 1.0), gamma, "classical")


def smooth_max_divergence(p, q, eps: float) -> DivergenceValue:
    """Smooth max divergence ``inf{a : P(log P/Q < a) >= 1 - eps}``.

    Atoms are sorted by log-likelihood ratio and P-mass is accumulated; the
    infimum is the ratio of the first atom at which the accumulated mass
    reaches ``1 - eps``.  Atoms with ``Q = 0 < P`` have an infinite ratio.
    """
    eps = float(eps)
    if not 0.0 <= eps < 1.0:
        raise DomainError(f"smoothing parameter must lie in [0,1), got {eps}")
    p, q = _pair(p, q)
    sp = p > 0
    ratios = np.full(p.shape, np.inf)
    ok = sp & (q > 0)
    ratios[ok] = np.log(p[ok]) - np.log(q[ok])
    ratios, mass = ratios[sp], p[sp]
    order = np.argsort(ratios, kind="stable")
    cum = np.cumsum(mass[order])
    need = (1.0 - eps) * float(mass.sum())
    k = int(np.searchsorted(cum, need - 1e-12, side="left"))
    k = min(k, cum.size - 1)
    r = float(ratios[order][k])
    if math.isinf(r):
        return _inf(None, "smooth_max", {"eps": eps})
    return _val(r, None, "smooth_max", {"eps": eps})


# ---------------------------------------------------------------------------
# quantum


def _state_pair(rho, sigma) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(rho, DensityOperator) and isinstance(sigma, DensityOperator):
        if rho.space.dims != sigma.space.dims:
            raise ConfigurationError(
                f"states live on different spaces: {rho.space.factors} vs {sigma.space.factors}")
    r, s = matrix_of(rho), matrix_of(sigma)
    if r.shape != s.shape or r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ConfigurationError(f"state shapes differ or are not square: {r.shape}, {s.shape}")
    return hermitize(r), hermitize(s)


def _kernel_weight(rho: np.ndarray, ws: np.ndarray, vs: np.ndarray) -> float:
    ker = vs[:, ws <= 0]
    if ker.shape[1] == 0:
        return 0.0
    return float(np.real(np.trace(ker.conj().T @ rho @ ker)))


def support_contained(rho, sigma, tol: float = CONTAINMENT_TOL) -> bool:
    """Whether ``supp(rho)`` lies inside ``supp(sigma)`` up to ``tol`` of trace weight."""
    r, s = _state_pair(rho, sigma)
    ws, vs = psd_eig(s)
    return _kernel_weight(r, ws, vs) <= tol


def quantum_relative_entropy(rho, sigma) -> DivergenceValue:
    """Umegaki relative entropy ``Tr rho (log rho - log sigma)`` on the supports."""
    r, s = _state_pair(rho, sigma)
    wr, vr = psd_eig(r)
    ws, vs = psd_eig(s)
    if _kernel_weight(r, ws, vs) > CONTAINMENT_TOL:
        return _inf(1.0, "relative_entropy")
    pr = wr > 0
    neg_ent = float(np.sum(wr[pr] * np.log(wr[pr])))
    ps = ws > 0
    diag = np.real(np.einsum("ij,ik,kj->j", vs.conj(), r, vs))
    cross = float(np.sum(np.log(ws[ps]) * diag[ps]))
    return _val(neg_ent - cross, 1.0, "relative_entropy")


def _routed(rho, sigma, alpha, kind) -> DivergenceValue:
    v = quantum_relative_entropy(rho, sigma)
    return DivergenceValue(v.value, alpha, kind, {"routed": "relative_entropy"})


def petz_log_moment(r: np.ndarray, s: np.ndarray, alpha: float) -> float | None:
    """``log Tr[rho^a sigma^(1-a)]`` with support-restricted powers, None if zero."""
    wr, vr = psd_eig(r)
    ws, vs = psd_eig(s)
    ir, js = wr > 0, ws > 0
    ov = np.abs(vr[:, ir].conj().T @ vs[:, js]) ** 2
    with np.errstate(divide="ignore"):
        terms = (alpha * np.log(wr[ir]))[:, None] + ((1 - alpha) * np.log(ws[js]))[None, :] \
            + np.log(ov)
    terms = terms[np.isfinite(terms) & (ov > 1e-300)]
    if terms.size == 0:
        return None
    val = float(logsumexp(terms))
    return val


def petz_renyi(rho, sigma, alpha: float) -> DivergenceValue:
    """Petz Renyi divergence ``log Tr[rho^a sigma^(1-a)] / (a - 1)``."""
    alpha = _check_order(alpha)
    if _near_one(alpha):
        return _routed(rho, sigma, alpha, "petz")
    r, s = _state_pair(rho, sigma)
    if alpha > 1:
        ws, vs = psd_eig(s)
        if _kernel_weight(r, ws, vs) > CONTAINMENT_TOL:
            return _inf(alpha, "petz")
    lm = petz_log_moment(r, s, alpha)
    if lm is None:
        return _inf(alpha, "petz")
    return _val(lm / (alpha - 1.0), alpha, "petz")


def sandwiched_log_moment(r: np.ndarray, s: np.ndarray, alpha: float) -> float | None:
    """``log Tr[(sigma^t rho sigma^t)^a]``, t = (1-a)/(2a), None if zero.

    The eigenvalues of the sandwich are the squared singular values of
    ``sigma^t rho^(1/2)``, which keeps small ones accurate when t is large.
    """
    ws, vs = psd_eig(s)
    wr, vr = psd_eig(r)
    t = (1.0 - alpha) / (2.0 * alpha)
    js = ws > 0
    fw = np.zeros_like(ws)
    fw[js] = ws[js] ** t
    x = ((vs * fw) @ vs.conj().T) @ ((vr * np.sqrt(wr)) @ vr.conj().T)
    sv = np.linalg.svd(x, compute_uv=False)
    if sv.size == 0 or sv[0] <= 0:
        return None
    sv = sv[sv > SV_REL_TOL * sv[0]]
    return float(logsumexp(2.0 * alpha * np.log(sv)))


def sandwiched_renyi(rho, sigma, alpha: float) -> DivergenceValue:
    """Sandwiched Renyi divergence."""
    alpha = _check_order(alpha)
    if _near_one(alpha):
        return _routed(rho, sigma, alpha, "sandwiched")
    r, s = _state_pair(rho, sigma)
    if alpha > 1:
        ws, vs = psd_eig(s)
        if _kernel_weight(r, ws, vs) > CONTAINMENT_TOL:
            return _inf(alpha, "sandwiched")
    lm = sandwiched_log_moment(r, s, alpha)
    if lm is None:
        return _inf(alpha, "sandwiched")
    return _val(lm / (alpha - 1.0), alpha, "sandwiched")


def reverse_sandwiched(rho, sigma, alpha: float) -> DivergenceValue:
    """Reverse sandwiched divergence ``a/(1-a) * D~_{1-a}(sigma || rho)`` for ``a`` in (0,1)."""
    alpha = _check_order(alpha)
    if alpha > 1:
        raise DomainError("the reverse sandwiched divergence is defined for alpha in (0,1)")
    if _near_one(alpha):
        return _routed(rho, sigma, alpha, "reverse_sandwiched")
    inner = sandwiched_renyi(sigma, rho, 1.0 - alpha)
    if inner.is_inf:
        return _inf(alpha, "reverse_sandwiched")
    return _val(alpha / (1.0 - alpha) * inner.finite, alpha, "reverse_sandwiched")


def modified_sandwiched(rho, sigma, alpha: float) -> DivergenceValue:
    """Reverse sandwiched branch below one half, sandwiched branch from one half on."""
    alpha = _check_order(alpha)
    if _near_one(alpha):
        return _routed(rho, sigma, alpha, "modified_sandwiched")
    v = reverse_sandwiched(rho, sigma, alpha) if alpha < 0.5 else sandwiched_renyi(rho, sigma, alpha)
    return DivergenceValue(v.value, alpha, "modified_sandwiched",
                           {"branch": "reverse" if alpha < 0.5 else "sandwiched"})


QUANTUM_DIVERGENCES = {
    "petz": petz_renyi,
    "sandwiched": sandwiched_renyi,
    "reverse_sandwiched": reverse_sandwiched,
    "modified_sandwiched": modified_sandwiched,
}


def quantum_divergence(kind: str, rho, sigma, alpha: float | None = None) -> DivergenceValue:
    """Dispatch by kind name; ``relative_entropy`` ignores ``alpha``."""
    if kind == "relative_entropy" or (alpha is not None and kind in QUANTUM_DIVERGENCES
                                      and _near_one(float(alpha))):
        v = quantum_relative_entropy(rho, sigma)
        return v if kind == "relative_entropy" else DivergenceValue(v.value, alpha, kind)
    try:
        fn = QUANTUM_DIVERGENCES[kind]
    except KeyError:
        raise ConfigurationError(f"unknown quantum divergence kind {kind!r}") from None
    return fn(rho, sigma, alpha)
