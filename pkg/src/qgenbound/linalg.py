"""Dense Hermitian linear algebra on small labeled tensor-product spaces.

Matrices are plain complex ``numpy`` arrays.  The wrapper types below attach a
:class:`HilbertSpace` and enforce the physical invariants on construction
(Hermiticity, positivity, unit trace, POVM completeness, trace preservation).
All wrappers are frozen and their arrays are marked read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError, NumericalError

SUPPORT_EPS = 1e-12
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
COMPLETENESS_TOL = 1e-8
DEFAULT_DIM_CAP = 256

_JACOBI_MAX_SWEEPS = 64


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class HilbertSpace:
    """Ordered tensor factorization ``(label, dim), ...`` of a finite space."""

    factors: tuple[tuple[str, int], ...]
    dim_cap: int = field(default=DEFAULT_DIM_CAP, compare=False)

    def __post_init__(self):
        factors = tuple((str(lbl), int(d)) for lbl, d in self.factors)
        object.__setattr__(self, "factors", factors)
        if not factors:
            raise ConfigurationError("a Hilbert space needs at least one factor")
        labels = [lbl for lbl, _ in factors]
        if len(set(labels)) != len(labels):
            raise ConfigurationError(f"duplicate factor labels in {labels}")
        for lbl, d in factors:
            if d < 1:
                raise ConfigurationError(f"factor {lbl!r} has dimension {d} < 1")
        if self.total_dim > self.dim_cap:
            raise ConfigurationError(
                f"total dimension {self.total_dim} exceeds the cap {self.dim_cap}"
            )

    @classmethod
    def single(cls, label: str, dim: int) -> "HilbertSpace":
        return cls(((label, dim),))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, _ in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.factors)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def dim_of(self, label: str) -> int:
        for lbl, d in self.factors:
            if lbl == label:
                return d
        raise ConfigurationError(f"unknown factor label {label!r}; have {self.labels}")

    def subspace(self, keep: Iterable[str]) -> "HilbertSpace":
        keep = set(keep)
        unknown = keep - set(self.labels)
        if unknown:
            raise ConfigurationError(f"unknown factor labels {sorted(unknown)}")
        return HilbertSpace(tuple(f for f in self.factors if f[0] in keep), self.dim_cap)

    def __matmul__(self, other: "HilbertSpace") -> "HilbertSpace":
        return HilbertSpace(self.factors + other.factors, max(self.dim_cap, other.dim_cap))

    def relabel(self, suffix: str) -> "HilbertSpace":
        return HilbertSpace(tuple((lbl + suffix, d) for lbl, d in self.factors), self.dim_cap)


def _check_square(m: np.ndarray, dim: int, what: str) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape != (dim, dim):
        raise ConfigurationError(f"{what}: expected shape ({dim}, {dim}), got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericalError(f"{what}: non-finite entries")
    return m


def hermitize(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class HermitianObservable:
    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = _check_square(self.matrix, self.space.total_dim, "observable")
        scale = max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL * scale:
            raise DomainError("observable is not Hermitian within tolerance")
        object.__setattr__(self, "matrix", _frozen(hermitize(m)))

    @property
    def dim(self) -> int:
        return self.space.total_dim


@dataclass(frozen=True)
class DensityOperator:
    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = _check_square(self.matrix, self.space.total_dim, "density operator")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise DomainError("density operator is not Hermitian within tolerance")
        m = hermitize(m)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise DomainError(f"density operator has trace {tr!r}")
        lam_min = float(np.linalg.eigvalsh(m)[0])
        if lam_min < -PSD_TOL:
            raise DomainError(f"density operator has eigenvalue {lam_min:.3e} < 0")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.space.total_dim

    @classmethod
    def from_vector(cls, space: HilbertSpace, psi: Sequence[complex]) -> "DensityOperator":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(space, np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, space: HilbertSpace) -> "DensityOperator":
        d = space.total_dim
        return cls(space, np.eye(d) / d)


@dataclass(frozen=True)
class Povm:
    space: HilbertSpace
    elements: tuple[tuple[str, HermitianObservable], ...]

    def __post_init__(self):
        elems = tuple((str(lbl), e) for lbl, e in self.elements)
        object.__setattr__(self, "elements", elems)
        if not elems:
            raise ConfigurationError("a POVM needs at least one element")
        d = self.space.total_dim
        total = np.zeros((d, d), dtype=complex)
        for lbl, e in elems:
            if e.dim != d:
                raise ConfigurationError(f"POVM element {lbl!r} has dimension {e.dim} != {d}")
            if np.linalg.eigvalsh(e.matrix)[0] < -PSD_TOL:
                raise DomainError(f"POVM element {lbl!r} is not positive semidefinite")
            total += e.matrix
        defect = float(np.max(np.abs(total - np.eye(d)))) if d else 0.0
        if defect > COMPLETENESS_TOL:
            raise DomainError(f"POVM elements sum to identity only within {defect:.3e}")

    @property
    def outcomes(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, _ in self.elements)

    def element(self, outcome: str) -> HermitianObservable:
        for lbl, e in self.elements:
            if lbl == outcome:
                return e
        raise ConfigurationError(f"unknown POVM outcome {outcome!r}")

    @classmethod
    def from_matrices(cls, space: HilbertSpace, mats: dict) -> "Povm":
        return cls(space, tuple((k, HermitianObservable(space, m)) for k, m in mats.items()))


@dataclass(frozen=True)
class CptpChannel:
    input_space: HilbertSpace
    output_space: HilbertSpace
    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        din, dout = self.input_space.total_dim, self.output_space.total_dim
        ks = []
        for k in self.kraus:
            k = np.asarray(k, dtype=complex)
            if k.shape != (dout, din):
                raise ConfigurationError(f"Kraus operator has shape {k.shape}, want {(dout, din)}")
            ks.append(_frozen(k))
        if not ks:
            raise ConfigurationError("a channel needs at least one Kraus operator")
        s = sum(k.conj().T @ k for k in ks)
        defect = float(np.max(np.abs(s - np.eye(din))))
        if defect > COMPLETENESS_TOL:
            raise DomainError(f"channel is not trace preserving (defect {defect:.3e})")
        object.__setattr__(self, "kraus", tuple(ks))

    @classmethod
    def identity(cls, space: HilbertSpace, output_space: HilbertSpace | None = None) -> "CptpChannel":
        out = output_space if output_space is not None else space
        if out.total_dim != space.total_dim:
            raise ConfigurationError("identity channel needs equal input and output dimensions")
        return cls(space, out, (np.eye(space.total_dim),))

    def apply_matrix(self, m: np.ndarray) -> np.ndarray:
        return sum(k @ m @ k.conj().T for k in self.kraus)

    def __call__(self, rho: DensityOperator) -> DensityOperator:
        if rho.dim != self.input_space.total_dim:
            raise ConfigurationError("channel input dimension mismatch")
        return DensityOperator(self.output_space, hermitize(self.apply_matrix(rho.matrix)))

    def tensor(self, other: "CptpChannel") -> "CptpChannel":
        ks = tuple(np.kron(a, b) for a in self.kraus for b in other.kraus)
        return CptpChannel(self.input_space @ other.input_space,
                           self.output_space @ other.output_space, ks)


def matrix_of(x) -> np.ndarray:
    """Return the underlying complex array of a wrapper or array-like."""
    if isinstance(x, (DensityOperator, HermitianObservable)):
        return x.matrix
    return np.asarray(x, dtype=complex)


# ---------------------------------------------------------------------------
# eigendecomposition


def jacobi_eigh(h: np.ndarray, tol: float = 1e-15, max_sweeps: int = _JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Each step zeroes one off-diagonal pair with a 2x2 unitary
    ``diag(1, e^{-i phi}) @ rotation(theta)``.  Sweeps visit pairs in row-major
    order, so the result is fully deterministic.  Returns eigenvalues in
    descending order and the matching unitary with eigenvectors as columns.
    """
    a = hermitize(h).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n == 1:
        return a.diagonal().real.copy(), v
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n), v
    target = tol * scale
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(max_sweeps):
        off = math.sqrt(2.0 * float(np.sum(np.abs(np.triu(a, 1)) ** 2)))
        if off <= target:
            break
        for p, q in pairs:
            apq = a[p, q]
            r = abs(apq)
            if r <= 1e-300:
                continue
            phase = apq / r
            app, aqq = a[p, p].real, a[q, q].real
            theta = 0.5 * math.atan2(2.0 * r, app - aqq)
            c, s = math.cos(theta), math.sin(theta)
            g = np.array([[c, -s], [s * phase.conjugate(), c * phase.conjugate()]])
            idx = [p, q]
            a[:, idx] = a[:, idx] @ g
            a[idx, :] = g.conj().T @ a[idx, :]
            a[p, q] = a[q, p] = 0.0
            v[:, idx] = v[:, idx] @ g
    else:
        off = math.sqrt(2.0 * float(np.sum(np.abs(np.triu(a, 1)) ** 2)))
        if off > 1e3 * target:
            raise NumericalError(f"Jacobi did not converge in {max_sweeps} sweeps (off={off:.3e})")
    w = a.diagonal().real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


_EIG_BACKEND = "lapack"


def set_eig_backend(name: str) -> None:
    """Select the eigensolver used by every matrix function: ``jacobi`` or ``lapack``."""
    global _EIG_BACKEND
    if name not in ("jacobi", "lapack"):
        raise ConfigurationError(f"unknown eigen backend {name!r}")
    _EIG_BACKEND = name


def get_eig_backend() -> str:
    return _EIG_BACKEND


def _eigh(m: np.ndarray, backend: str | None = None):
    backend = backend or _EIG_BACKEND
    if backend == "jacobi":
        return jacobi_eigh(m)
    w, v = np.linalg.eigh(hermitize(m))
    return w[::-1].copy(), v[:, ::-1].copy()


def herm_eig(h, backend: str | None = "jacobi"):
    """Eigenvalues (descending) and eigenvector unitary of a Hermitian matrix.

    Uses cyclic Jacobi unless ``backend`` says otherwise; ``None`` selects the
    process-wide backend of :func:`set_eig_backend`, which the matrix
    functions below also use.
    """
    m = matrix_of(h)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ConfigurationError(f"herm_eig needs a square matrix, got {m.shape}")
    w, v = _eigh(m, backend)
    recon = (v * w) @ v.conj().T
    err = float(np.max(np.abs(recon - hermitize(m)))) if m.size else 0.0
    if not np.isfinite(err) or err > 1e-9 * max(1.0, float(np.max(np.abs(m)))):
        raise NumericalError(f"eigendecomposition reconstruction error {err:.3e}")
    return w, v


# ---------------------------------------------------------------------------
# matrix functions


def psd_eig(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition with eigenvalues below ``SUPPORT_EPS * max`` set to 0."""
    w, v = _eigh(matrix_of(a))
    top = max(float(w[0]), 0.0) if w.size else 0.0
    w = np.where(w < SUPPORT_EPS * top, 0.0, w)
    return w, v


def support_projector(a) -> np.ndarray:
    w, v = psd_eig(a)
    vs = v[:, w > 0]
    return vs @ vs.conj().T


def apply_on_eigs(w: np.ndarray, v: np.ndarray, fw: np.ndarray) -> np.ndarray:
    return (v * fw) @ v.conj().T


def matrix_function(a, f: Callable[[np.ndarray], np.ndarray], support_only: bool = True,
                    psd: bool = True) -> np.ndarray:
    """Apply a real function to the spectrum of a Hermitian matrix.

    With ``psd`` the input must be positive semidefinite after clipping
    eigenvalues below ``SUPPORT_EPS`` (relative to the largest) to zero.  With
    ``support_only`` zero eigenvalues map to zero, which realizes the ``0^t = 0``
    convention and restricts logarithms to the support.
    """
    m = matrix_of(a)
    if psd:
        w_raw, v = _eigh(m)
        top = max(float(w_raw[0]), 0.0)
        if w_raw[-1] < -max(PSD_TOL, 1e-9 * top):
            raise DomainError(f"matrix has eigenvalue {w_raw[-1]:.3e} < 0")
        w = np.where(w_raw < SUPPORT_EPS * top, 0.0, w_raw)
    else:
        w, v = _eigh(m)
    if support_only:
        mask = w != 0.0
        fw = np.zeros_like(w)
        with np.errstate(all="ignore"):
            fw[mask] = f(w[mask])
    else:
        with np.errstate(all="ignore"):
            fw = np.asarray(f(w), dtype=float)
    if not np.all(np.isfinite(fw)):
        raise DomainError("function undefined on a retained eigenvalue")
    return hermitize(apply_on_eigs(w, v, fw))


def mpow(a, t: float) -> np.ndarray:
    """``A^t`` on the support of a PSD matrix (pseudo-inverse powers for t < 0)."""
    return matrix_function(a, lambda x: np.power(x, t), support_only=True)


def mlog(a) -> np.ndarray:
    """Logarithm restricted to the support of a PSD matrix."""
    return matrix_function(a, np.log, support_only=True)


def mexp(h) -> np.ndarray:
    return matrix_function(h, np.exp, support_only=False, psd=False)


# ---------------------------------------------------------------------------
# tensor structure


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def partial_trace_matrix(m: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every factor whose index is not in ``keep`` (indices into ``dims``)."""
    dims = list(dims)
    n = len(dims)
    keep = sorted(set(keep))
    t = np.asarray(m, dtype=complex).reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    upper = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if n > 26:
        raise ConfigurationError("too many tensor factors")
    row = [letters[i] for i in range(n)]
    col = [upper[i] if i in keep else letters[i] for i in range(n)]
    out = "".join(letters[i] for i in keep) + "".join(upper[i] for i in keep)
    res = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    return res.reshape(dk, dk)


def permute_factors(m: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: factor ``perm[k]`` of the input becomes factor k."""
    dims = list(dims)
    n = len(dims)
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ConfigurationError(f"{perm} is not a permutation of {n} factors")
    t = np.asarray(m, dtype=complex).reshape(dims + dims)
    t = t.transpose(perm + [n + k for k in perm])
    d = int(np.prod(dims))
    return t.reshape(d, d)


def partial_trace(a, keep: Iterable[str]):
    """Partial trace of a wrapped operator onto the named factors.

    Returns the same wrapper type on the kept subspace; keeping nothing
    returns the scalar trace.
    """
    keep = list(keep)
    space = a.space
    unknown = set(keep) - set(space.labels)
    if unknown:
        raise ConfigurationError(f"unknown factor labels {sorted(unknown)}")
    idx = [i for i, lbl in enumerate(space.labels) if lbl in keep]
    red = partial_trace_matrix(a.matrix, space.dims, idx)
    if not idx:
        return complex(red[0, 0]).real
    sub = space.subspace(keep)
    if isinstance(a, DensityOperator):
        return DensityOperator(sub, red)
    return HermitianObservable(sub, red)


def tensor(*ops):
    """Tensor product of wrapped operators; the spaces are concatenated."""
    space = ops[0].space
    for o in ops[1:]:
        space = space @ o.space
    m = kron_all([o.matrix for o in ops])
    if all(isinstance(o, DensityOperator) for o in ops):
        return DensityOperator(space, m)
    return HermitianObservable(space, m)


def tensor_power(op, n: int):
    if n < 1:
        raise DomainError("tensor power needs n >= 1")
    parts = []
    for i in range(n):
        sp = op.space.relabel(f"_{i + 1}")
        parts.append(type(op)(sp, op.matrix))
    return tensor(*parts)


def schatten_norm(a, p: float) -> float:
    """Schatten p-norm; ``p = inf`` gives the operator norm."""
    p = float(p)
    if not p >= 1.0:
        raise DomainError(f"Schatten norm needs p >= 1, got {p}")
    m = matrix_of(a)
    if np.allclose(m, m.conj().T, atol=1e-13, rtol=0):
        sv = np.abs(np.linalg.eigvalsh(hermitize(m)))
    else:
        sv = np.linalg.svd(m, compute_uv=False)
    if math.isinf(p):
        return float(np.max(sv)) if sv.size else 0.0
    if sv.size == 0 or np.max(sv) == 0:
        return 0.0
    top = float(np.max(sv))
    return top * float(np.sum((sv / top) ** p) ** (1.0 / p))


def expectation(obs, rho) -> float:
    return float(np.real(np.trace(matrix_of(obs) @ matrix_of(rho))))


# ---------------------------------------------------------------------------
# seeded generators


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_density_matrix(dim: int, rank: int | None = None, seed=None) -> np.ndarray:
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise DomainError(f"rank must lie in [1, {dim}], got {rank}")
    g = _ginibre(_rng(seed), dim, rank)
    m = g @ g.conj().T
    return hermitize(m / np.trace(m).real)


def random_density(space: HilbertSpace, rank: int | None = None, seed=None) -> DensityOperator:
    """Ginibre-distributed state of the given rank (full rank by default)."""
    return DensityOperator(space, random_density_matrix(space.total_dim, rank, seed))


def random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar unitary from the QR decomposition of a Ginibre matrix."""
    q, r = np.linalg.qr(_ginibre(_rng(seed), dim, dim))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(dim: int, seed=None, scale: float = 1.0) -> np.ndarray:
    g = _ginibre(_rng(seed), dim, dim)
    return hermitize(g) * scale


def _inv_sqrt_psd(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(hermitize(m))
    return (v / np.sqrt(w)) @ v.conj().T


def random_povm(space: HilbertSpace, k: int, seed=None, labels: Sequence[str] | None = None) -> Povm:
    """k-outcome POVM ``E_j = S^{-1/2} G_j G_j^+ S^{-1/2}`` with ``S = sum G_j G_j^+``."""
    if k < 1:
        raise DomainError("a POVM needs k >= 1 outcomes")
    rng = _rng(seed)
    d = space.total_dim
    gs = [_ginibre(rng, d, d) for _ in range(k)]
    ms = [g @ g.conj().T for g in gs]
    t = _inv_sqrt_psd(sum(ms))
    labels = list(labels) if labels is not None else [str(j) for j in range(k)]
    if len(labels) != k:
        raise ConfigurationError("label count does not match k")
    return Povm(space, tuple((labels[j], HermitianObservable(space, t @ ms[j] @ t)) for j in range(k)))


def random_cptp(input_space: HilbertSpace, output_space: HilbertSpace, kraus_count: int,
                seed=None) -> CptpChannel:
    """Random channel from an isometry built by orthonormalizing a Ginibre stack."""
    if kraus_count < 1:
        raise DomainError("need at least one Kraus operator")
    din, dout = input_space.total_dim, output_space.total_dim
    if dout * kraus_count < din:
        raise DomainError(f"{kraus_count} Kraus operators of shape {(dout, din)} cannot be trace "
                          f"preserving; need at least {-(-din // dout)}")
    g = _ginibre(_rng(seed), dout * kraus_count, din)
    t = _inv_sqrt_psd(g.conj().T @ g)
    iso = g @ t
    ks = tuple(iso[j * dout:(j + 1) * dout, :] for j in range(kraus_count))
    return CptpChannel(input_space, output_space, ks)
