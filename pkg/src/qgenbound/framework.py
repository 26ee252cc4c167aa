"""Exact finite enumeration of a quantum learner.

A learner sees a sample ``s`` drawn from ``P^n`` together with a data state
``rho(s)`` on ``te (x) tr``.  It measures the training register with the POVM
``E_s``, records the outcome ``w`` and post-processes the training register
with the channel ``Lambda_{w,s}: tr -> hyp``.  Losses are observables on
``te (x) hyp``.

In ``iid_local`` mode the data state is ``rho(s) = (x)_i rho(z_i)``, the
channel is ``(x)_i Lambda_{w,z_i}`` and the loss is the average of local
losses ``L(w, z_i)`` acting on the i-th test and hypothesis factors.  Global
operators are ordered ``te_1 .. te_n`` then ``tr_1 .. tr_n`` (or
``hyp_1 .. hyp_n``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .divergences import ClassicalDist
from .errors import ConfigurationError, DomainError
from .linalg import (
    COMPLETENESS_TOL,
    HERMITIAN_TOL,
    PSD_TOL,
    TRACE_TOL,
    CptpChannel,
    HilbertSpace,
    Povm,
    hermitize,
    kron_all,
    matrix_of,
    partial_trace_matrix,
    permute_factors,
    psd_eig,
    random_cptp,
    random_density_matrix,
    random_hermitian,
    random_povm,
)
from .subgaussian import SubGaussianCert

MODES = ("general", "iid_local")
ENUMERATION_CAP = 4096
DROP_TOL = 1e-12

Sample = tuple


def sample_key(s: Sample) -> str:
    return ",".join(s)


def pair_key(w: str, s) -> str:
    return f"{w}|{sample_key(s) if isinstance(s, tuple) else s}"


def _parse_sample(key, n: int) -> Sample:
    if isinstance(key, tuple):
        s = tuple(str(z) for z in key)
    else:
        s = tuple(str(key).split(","))
    if len(s) != n:
        raise ConfigurationError(f"sample {key!r} has length {len(s)}, want {n}")
    return s


def _matrix(x, dim: int, what: str) -> np.ndarray:
    m = np.asarray(matrix_of(x), dtype=complex)
    if m.shape != (dim, dim):
        raise ConfigurationError(f"{what}: expected shape ({dim}, {dim}), got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ConfigurationError(f"{what}: non-finite entries")
    return m


def _check_density(m: np.ndarray, what: str) -> np.ndarray:
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
        raise DomainError(f"{what}: not Hermitian")
    m = hermitize(m)
    if abs(float(np.trace(m).real) - 1.0) > TRACE_TOL:
        raise DomainError(f"{what}: trace {np.trace(m).real!r}")
    if float(np.linalg.eigvalsh(m)[0]) < -PSD_TOL:
        raise DomainError(f"{what}: not positive semidefinite")
    return m


def _check_hermitian(m: np.ndarray, what: str) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL * scale:
        raise DomainError(f"{what}: not Hermitian")
    return hermitize(m)


def _kraus_list(x, din: int, dout: int, what: str) -> tuple:
    if isinstance(x, CptpChannel):
        ks = x.kraus
    else:
        ks = x
    out = []
    for k in ks:
        k = np.asarray(matrix_of(k), dtype=complex)
        if k.shape != (dout, din):
            raise ConfigurationError(f"{what}: Kraus operator shape {k.shape}, want {(dout, din)}")
        out.append(k)
    if not out:
        raise ConfigurationError(f"{what}: no Kraus operators")
    defect = float(np.max(np.abs(sum(k.conj().T @ k for k in out) - np.eye(din))))
    if defect > COMPLETENESS_TOL:
        raise DomainError(f"{what}: not trace preserving (defect {defect:.3e})")
    return tuple(out)


def _povm_dict(x, dim: int, what: str) -> dict:
    if isinstance(x, Povm):
        items = [(lbl, e.matrix) for lbl, e in x.elements]
    else:
        items = list(x.items())
    out = {}
    total = np.zeros((dim, dim), dtype=complex)
    for lbl, e in items:
        m = _check_hermitian(_matrix(e, dim, f"{what}[{lbl}]"), f"{what}[{lbl}]")
        if float(np.linalg.eigvalsh(m)[0]) < -PSD_TOL:
            raise DomainError(f"{what}[{lbl}]: not positive semidefinite")
        out[str(lbl)] = m
        total += m
    if not out:
        raise ConfigurationError(f"{what}: empty POVM")
    defect = float(np.max(np.abs(total - np.eye(dim))))
    if defect > COMPLETENESS_TOL:
        raise DomainError(f"{what}: elements sum to identity only within {defect:.3e}")
    return out


@dataclass(frozen=True)
class LearningInstance:
    """A finite learning problem.

    ``dims`` is ``(te, tr, hyp)``: local dimensions in ``iid_local`` mode,
    whole-register dimensions in ``general`` mode.  ``data_states`` is keyed
    by z (``iid_local``) or by sample tuples (``general``); ``povms`` by
    sample tuples (a bare z is accepted when n = 1); ``channels`` and
    ``losses`` by ``(w, z)`` (``iid_local``) or ``(w, s)`` (``general``).
    A missing channel is the identity.
    """

    sample_space: tuple
    prior: ClassicalDist
    n: int
    mode: str
    dims: tuple
    data_states: Mapping
    povms: Mapping
    channels: Mapping
    losses: Mapping
    cert: SubGaussianCert | None = None
    hypotheses: tuple = ()
    _loss_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        z_labels = tuple(str(z) for z in self.sample_space)
        if len(set(z_labels)) != len(z_labels) or not z_labels:
            raise ConfigurationError("sample space labels must be nonempty and distinct")
        object.__setattr__(self, "sample_space", z_labels)
        prior = self.prior
        if not isinstance(prior, ClassicalDist):
            prior = ClassicalDist(z_labels, np.asarray(prior, dtype=float))
        if tuple(str(l) for l in prior.labels) != z_labels:
            raise ConfigurationError("prior labels differ from the sample space")
        object.__setattr__(self, "prior", ClassicalDist(z_labels, prior.probs))
        if int(self.n) != self.n or self.n < 1:
            raise ConfigurationError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if self.mode not in MODES:
            raise ConfigurationError(f"mode must be one of {MODES}, got {self.mode!r}")
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or min(dims) < 1:
            raise ConfigurationError(f"dims must be three positive integers (te, tr, hyp), got {dims}")
        object.__setattr__(self, "dims", dims)
        te, tr, hyp = self.global_dims

        # data states
        states = {}
        if self.mode == "iid_local":
            for z in z_labels:
                if z not in self.data_states:
                    raise ConfigurationError(f"missing data state for z={z!r}")
                m = _matrix(self.data_states[z], dims[0] * dims[1], f"data_states[{z}]")
                states[z] = _check_density(m, f"data_states[{z}]")
        else:
            given = {_parse_sample(k, self.n): v for k, v in self.data_states.items()}
            for s in self.samples():
                if s not in given:
                    raise ConfigurationError(f"missing data state for s={sample_key(s)!r}")
                m = _matrix(given[s], te * tr, f"data_states[{sample_key(s)}]")
                states[s] = _check_density(m, f"data_states[{sample_key(s)}]")
        object.__setattr__(self, "data_states", states)

        # POVMs, keyed by sample tuples
        povms = {}
        given = {}
        for k, v in self.povms.items():
            given[_parse_sample(k, self.n)] = v
        for s in self.samples():
            if s not in given:
                raise ConfigurationError(f"missing POVM for s={sample_key(s)!r}")
            povms[s] = _povm_dict(given[s], tr, f"povms[{sample_key(s)}]")
        hyps = tuple(str(w) for w in self.hypotheses)
        if not hyps:
            seen = []
            for s in self.samples():
                for w in povms[s]:
                    if w not in seen:
                        seen.append(w)
            hyps = tuple(seen)
        for s in self.samples():
            unknown = set(povms[s]) - set(hyps)
            if unknown:
                raise ConfigurationError(f"POVM outcomes {sorted(unknown)} not among hypotheses")
        object.__setattr__(self, "hypotheses", hyps)
        object.__setattr__(self, "povms", povms)
        size = len(hyps) * len(z_labels) ** self.n
        if size > ENUMERATION_CAP:
            raise ConfigurationError(f"enumeration size |W| |Z|^n = {size} exceeds {ENUMERATION_CAP}")

        # channels and losses, keyed by (w, z) or (w, s)
        local = self.mode == "iid_local"
        keys = [(w, z) for w in hyps for z in z_labels] if local else \
            [(w, s) for w in hyps for s in self.samples()]

        def norm_key(k):
            if isinstance(k, str):
                w, _, rest = k.partition("|")
            else:
                w, rest = k
            w = str(w)
            return (w, str(rest)) if local else (w, _parse_sample(rest, self.n))

        given_ch = {norm_key(k): v for k, v in self.channels.items()}
        given_loss = {norm_key(k): v for k, v in self.losses.items()}
        din, dout = (dims[1], dims[2]) if local else (tr, hyp)
        dl = dims[0] * dims[2] if local else te * hyp
        channels, losses = {}, {}
        for k in keys:
            label = pair_key(*k)
            if k in given_ch:
                channels[k] = _kraus_list(given_ch[k], din, dout, f"channels[{label}]")
            elif din == dout:
                channels[k] = (np.eye(din, dtype=complex),)
            else:
                raise ConfigurationError(f"missing channel for {label} and tr, hyp dimensions differ")
            if k not in given_loss:
                raise ConfigurationError(f"missing loss for {label}")
            losses[k] = _check_hermitian(_matrix(given_loss[k], dl, f"losses[{label}]"),
                                         f"losses[{label}]")
        extra = (set(given_ch) | set(given_loss)) - set(keys)
        if extra:
            raise ConfigurationError(f"channels/losses for unknown pairs {sorted(map(str, extra))}")
        object.__setattr__(self, "channels", channels)
        object.__setattr__(self, "losses", losses)

    @property
    def global_dims(self) -> tuple[int, int, int]:
        if self.mode == "iid_local":
            return tuple(d ** self.n for d in self.dims)
        return self.dims

    def samples(self) -> list:
        return list(itertools.product(self.sample_space, repeat=self.n))

    def sample_prob(self, s: Sample) -> float:
        return float(np.prod([self.prior.prob(z) for z in s]))

    def data_state(self, s: Sample) -> np.ndarray:
        if self.mode == "general":
            return self.data_states[s]
        n = self.n
        d_te, d_tr, _ = self.dims
        m = kron_all([self.data_states[z] for z in s])
        # factors te_1 tr_1 te_2 tr_2 ... -> te_1 .. te_n tr_1 .. tr_n
        dims = [d_te, d_tr] * n
        perm = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
        return permute_factors(m, dims, perm)

    def povm(self, s: Sample) -> dict:
        return self.povms[s]

    def kraus(self, w: str, s: Sample) -> tuple:
        if self.mode == "general":
            return self.channels[(w, s)]
        lists = [self.channels[(w, z)] for z in s]
        return tuple(kron_all(combo) for combo in itertools.product(*lists))

    def loss(self, w: str, s: Sample) -> np.ndarray:
        if self.mode == "general":
            return self.losses[(w, s)]
        key = (w, s)
        if key not in self._loss_cache:
            self._loss_cache[key] = self._local_average(w, s)
        return self._loss_cache[key]

    def local_loss(self, w: str, z: str) -> np.ndarray:
        if self.mode != "iid_local":
            raise ConfigurationError("local losses exist only in iid_local mode")
        return self.losses[(w, z)]

    def _local_average(self, w: str, s: Sample) -> np.ndarray:
        n = self.n
        d_te, _, d_hyp = self.dims
        total = None
        for i, z in enumerate(s):
            rest = np.eye((d_te * d_hyp) ** (n - 1), dtype=complex)
            m = np.kron(self.losses[(w, z)], rest)
            # factors te_i hyp_i (te hyp)_{j != i} -> te_1 .. te_n hyp_1 .. hyp_n
            order = [("te", i), ("hyp", i)]
            for j in range(n):
                if j != i:
                    order += [("te", j), ("hyp", j)]
            dims = [d_te if r == "te" else d_hyp for r, _ in order]
            target = [("te", j) for j in range(n)] + [("hyp", j) for j in range(n)]
            perm = [order.index(t) for t in target]
            m = permute_factors(m, dims, perm)
            total = m if total is None else total + m
        return total / n

    def loss_range(self) -> tuple[float, float]:
        """Smallest and largest eigenvalue over every loss observable."""
        lo, hi = math.inf, -math.inf
        for m in self.losses.values():
            w = np.linalg.eigvalsh(m)
            lo, hi = min(lo, float(w[0])), max(hi, float(w[-1]))
        return lo, hi


@dataclass(frozen=True)
class PairRecord:
    w: str
    s: Sample
    p_w_given_s: float
    weight: float
    sigma: np.ndarray
    sigma_hyp: np.ndarray


@dataclass
class InducedJoint:
    """Everything the learner induces, enumerated exactly."""

    instance: LearningInstance
    hypotheses: tuple
    samples: list
    joint: ClassicalDist
    marginal_w: ClassicalDist
    marginal_s: ClassicalDist
    prior_n: np.ndarray
    weights: np.ndarray
    posteriors: dict
    pairs: dict
    sigma_hyp_w: dict
    rho_te: dict
    rho_tr: dict
    dropped: list
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def pair_list(self) -> list:
        return list(self.pairs)

    def support_w(self) -> list:
        return [w for w in self.hypotheses if self.marginal_w.prob(w) > DROP_TOL]

    def posterior_vector(self, w: str) -> np.ndarray:
        post = self.posteriors[w]
        return np.array([post.get(s, 0.0) for s in self.samples])

    def joint_matrix(self) -> np.ndarray:
        """``P_WS`` as a |W| x |Z^n| array."""
        out = np.zeros((len(self.hypotheses), len(self.samples)))
        wi = {w: i for i, w in enumerate(self.hypotheses)}
        si = {s: i for i, s in enumerate(self.samples)}
        for (w, s), rec in self.pairs.items():
            out[wi[w], si[s]] = rec.weight
        return out

    def product_matrix(self) -> np.ndarray:
        return np.outer(self.marginal_w.probs, self.prior_n)

    def hyp_state(self, w: str, s: Sample) -> np.ndarray:
        """``sigma_hyp(w, s)``; for a dropped pair, the channel applied to ``rho_tr(s)``."""
        rec = self.pairs.get((w, s))
        if rec is not None:
            return rec.sigma_hyp
        key = ("hyp_fallback", w, s)
        if key not in self._cache:
            ks = self.instance.kraus(w, s)
            r = self.rho_tr[s]
            self._cache[key] = hermitize(sum(k @ r @ k.conj().T for k in ks))
        return self._cache[key]

    def reference_state(self, w: str, s: Sample) -> np.ndarray:
        """``rho_te(s) (x) sigma_hyp(w, s)``."""
        return np.kron(self.rho_te[s], self.hyp_state(w, s))


def _sqrt_psd(m: np.ndarray) -> np.ndarray:
    w, v = psd_eig(m)
    return (v * np.sqrt(w)) @ v.conj().T


def induce(instance: LearningInstance) -> InducedJoint:
    """Enumerate every (w, s) with ``p(w|s) > 1e-12``.

    Pairs at or below the threshold get zero weight; the joint is
    renormalized over the remaining pairs.
    """
    inst = instance
    te, tr, hyp = inst.global_dims
    samples = inst.samples()
    prior_n = np.array([inst.sample_prob(s) for s in samples])
    rho_te, rho_tr = {}, {}
    raw = {}
    dropped = []
    for s, ps in zip(samples, prior_n):
        rho = inst.data_state(s)
        rho_te[s] = hermitize(partial_trace_matrix(rho, [te, tr], [0]))
        rho_tr[s] = hermitize(partial_trace_matrix(rho, [te, tr], [1]))
        povm = inst.povm(s)
        for w in inst.hypotheses:
            e = povm.get(w)
            if e is None:
                dropped.append((w, s))
                continue
            p = float(np.real(np.trace(e @ rho_tr[s])))
            if p < -DROP_TOL:
                raise DomainError(f"negative outcome probability {p} for {pair_key(w, s)}")
            if p <= DROP_TOL:
                dropped.append((w, s))
                continue
            root = np.kron(np.eye(te), _sqrt_psd(e))
            post = root @ rho @ root / p
            ks = inst.kraus(w, s)
            sigma = sum(np.kron(np.eye(te), k) @ post @ np.kron(np.eye(te), k).conj().T
                        for k in ks)
            sigma = hermitize(sigma)
            sigma = sigma / float(np.trace(sigma).real)
            sigma_hyp = hermitize(partial_trace_matrix(sigma, [te, hyp], [1]))
            raw[(w, s)] = (p, p * ps, sigma, sigma_hyp)
    total = sum(v[1] for v in raw.values())
    if total <= 0:
        raise DomainError("the learner induces no outcome with positive probability")
    pairs = {}
    for (w, s), (p, wt, sigma, sh) in raw.items():
        pairs[(w, s)] = PairRecord(w, s, p, wt / total, sigma, sh)
    labels = [pair_key(w, s) for (w, s) in pairs]
    weights = np.array([r.weight for r in pairs.values()])
    joint = ClassicalDist(tuple(labels), weights / weights.sum())
    pw = np.array([sum(r.weight for (w2, _), r in pairs.items() if w2 == w) for w in inst.hypotheses])
    marginal_w = ClassicalDist(inst.hypotheses, pw / pw.sum())
    pss = np.array([sum(r.weight for (_, s2), r in pairs.items() if s2 == s) for s in samples])
    marginal_s = ClassicalDist(tuple(sample_key(s) for s in samples), pss / pss.sum())
    posteriors, sigma_hyp_w = {}, {}
    for w, mw in zip(inst.hypotheses, marginal_w.probs):
        if mw <= 0:
            continue
        post = {s: r.weight / mw for (w2, s), r in pairs.items() if w2 == w}
        posteriors[w] = post
        sigma_hyp_w[w] = hermitize(sum(q * pairs[(w, s)].sigma_hyp for s, q in post.items()))
    return InducedJoint(inst, inst.hypotheses, samples, joint, marginal_w, marginal_s, prior_n,
                        weights, posteriors, pairs, sigma_hyp_w, rho_te, rho_tr, dropped)


# ---------------------------------------------------------------------------
# losses and generalization error


def _tr(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.real(np.sum(a * b.T)))


def _cached(j: InducedJoint, inst, key, fn):
    key = (id(inst),) + key
    if key not in j._cache:
        j._cache[key] = fn()
    return j._cache[key]


def empirical_loss(j: InducedJoint, inst: LearningInstance, w: str, s: Sample) -> float:
    """``Tr[L(w,s) sigma(w,s)]``."""
    rec = j.pairs.get((w, s))
    if rec is None:
        raise DomainError(f"pair {pair_key(w, s)} has zero probability")
    return _cached(j, inst, ("emp", w, s), lambda: _tr(inst.loss(w, s), rec.sigma))


def true_loss_new(j: InducedJoint, inst: LearningInstance, w: str) -> float:
    """``E_{S ~ P^n} Tr[L(w,S) (rho_te(S) (x) sigma_hyp(w))]``."""
    if w not in j.sigma_hyp_w:
        raise DomainError(f"hypothesis {w!r} has zero probability")

    def f():
        h = j.sigma_hyp_w[w]
        return float(sum(ps * _tr(inst.loss(w, s), np.kron(j.rho_te[s], h))
                         for s, ps in zip(j.samples, j.prior_n)))
    return _cached(j, inst, ("true", w), f)


def true_loss_old(j: InducedJoint, inst: LearningInstance, w: str) -> float:
    """``E_{S ~ P^n} Tr[L(w,S) (rho_te(S) (x) sigma_hyp(w,S))]``."""
    def f():
        return float(sum(ps * _tr(inst.loss(w, s), j.reference_state(w, s))
                         for s, ps in zip(j.samples, j.prior_n)))
    return _cached(j, inst, ("old", w), f)


def expected_losses(j: InducedJoint, inst: LearningInstance) -> dict:
    emp = sum(r.weight * empirical_loss(j, inst, w, s) for (w, s), r in j.pairs.items())
    pw = dict(zip(j.hypotheses, j.marginal_w.probs))
    true = sum(pw[w] * true_loss_new(j, inst, w) for w in j.sigma_hyp_w)
    old = sum(pw[w] * true_loss_old(j, inst, w) for w in j.sigma_hyp_w)
    return {"empirical": float(emp), "true": float(true), "true_old": float(old)}


def gen_error(j: InducedJoint, inst: LearningInstance, w: str, s: Sample) -> float:
    return true_loss_new(j, inst, w) - empirical_loss(j, inst, w, s)


def gen_error_old(j: InducedJoint, inst: LearningInstance, w: str, s: Sample) -> float:
    return true_loss_old(j, inst, w) - empirical_loss(j, inst, w, s)


def expected_gen(j: InducedJoint, inst: LearningInstance) -> float:
    e = expected_losses(j, inst)
    return e["true"] - e["empirical"]


def expected_gen_old(j: InducedJoint, inst: LearningInstance) -> float:
    e = expected_losses(j, inst)
    return e["true_old"] - e["empirical"]


def sample_ws(j: InducedJoint, count: int, seed=None) -> list:
    """I.i.d. draws of (w, s) from the exact joint."""
    if count < 0:
        raise ConfigurationError("count must be nonnegative")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    keys = list(j.pairs)
    idx = rng.choice(len(keys), size=count, p=j.joint.probs)
    return [keys[i] for i in idx]


# ---------------------------------------------------------------------------
# constructors


def classical_instance(sample_space, prior, n: int, learner: Mapping, loss: Mapping,
                       hypotheses=(), cert: SubGaussianCert | None = None) -> LearningInstance:
    """Embed a classical learner: one-dimensional registers, scalar losses.

    ``learner`` maps each sample (tuple or comma-joined key) to ``{w: P(w|s)}``;
    ``loss`` maps ``(w, z)`` to the scalar ``l(w, z)``.
    """
    z_labels = tuple(str(z) for z in sample_space)
    one = np.ones((1, 1), dtype=complex)
    povms = {}
    for k, dist in learner.items():
        povms[_parse_sample(k, n)] = {str(w): float(p) * one for w, p in dist.items()}
    losses = {}
    for k, v in loss.items():
        w, z = k if isinstance(k, tuple) else str(k).split("|", 1)
        losses[(str(w), str(z))] = float(v) * one
    return LearningInstance(z_labels, prior, n, "iid_local", (1, 1, 1),
                            {z: one for z in z_labels}, povms, {}, losses, cert,
                            tuple(str(w) for w in hypotheses))


def classical_gen(prior: ClassicalDist, loss: Mapping, w: str, s: Sample) -> float:
    """Scalar ``E_Z l(w, Z) - (1/n) sum_i l(w, z_i)``."""
    true = float(sum(pz * loss[(w, z)] for z, pz in zip(prior.labels, prior.probs)))
    return true - float(np.mean([loss[(w, z)] for z in s]))


def random_instance(seed=None, n_hyp: int = 2, n_z: int = 2, dim: int = 2, n: int = 1,
                    kraus_count: int = 2, product_data: bool = False,
                    cert: SubGaussianCert | None = None) -> LearningInstance:
    """Seeded random ``iid_local`` instance with all local dimensions ``dim``.

    Data states are random (correlated) states on ``te (x) tr`` unless
    ``product_data``; POVMs are random per full sample; channels and losses
    are random per ``(w, z)``.
    """
    rng = np.random.default_rng(seed)
    z_labels = tuple(str(k) for k in range(n_z))
    hyps = tuple(str(k) for k in range(n_hyp))
    prior = rng.dirichlet(np.full(n_z, 2.0))
    states = {}
    for z in z_labels:
        if product_data:
            states[z] = np.kron(random_density_matrix(dim, seed=rng),
                                random_density_matrix(dim, seed=rng))
        else:
            states[z] = random_density_matrix(dim * dim, seed=rng)
    tr_space = HilbertSpace.single("tr", dim ** n)
    loc = HilbertSpace.single("tr", dim)
    hyp = HilbertSpace.single("hyp", dim)
    povms = {}
    for s in itertools.product(z_labels, repeat=n):
        povms[s] = random_povm(tr_space, n_hyp, seed=rng, labels=hyps)
    channels, losses = {}, {}
    for w in hyps:
        for z in z_labels:
            channels[(w, z)] = random_cptp(loc, hyp, kraus_count, seed=rng)
            losses[(w, z)] = random_hermitian(dim * dim, seed=rng, scale=0.5)
    return LearningInstance(z_labels, prior, n, "iid_local", (dim, dim, dim), states, povms,
                            channels, losses, cert, hyps)


def random_classical_instance(seed=None, n_hyp: int = 2, n_z: int = 2, n: int = 1,
                              concentration: float = 1.0) -> LearningInstance:
    """Seeded random classical learner with losses in [0, 1]."""
    rng = np.random.default_rng(seed)
    z_labels = tuple(str(k) for k in range(n_z))
    hyps = tuple(str(k) for k in range(n_hyp))
    prior = rng.dirichlet(np.full(n_z, 2.0))
    learner = {s: dict(zip(hyps, rng.dirichlet(np.full(n_hyp, concentration))))
               for s in itertools.product(z_labels, repeat=n)}
    loss = {(w, z): float(rng.uniform()) for w in hyps for z in z_labels}
    return classical_instance(z_labels, prior, n, learner, loss, hyps)
