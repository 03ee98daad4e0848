"""Hamiltonians on tensor-product spaces and the local-unitary mixture map.

All objects here are immutable value types backed by read-only numpy arrays.
Basis layout is row-major over the parties in declared order, so the basis
index of ``|a_1 a_2 ... a_p>`` is ``np.ravel_multi_index((a_1, ..., a_p), dims)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .tolerances import Tolerances, ValidationError, resolve

PARTY_LABELS = "ABCDEFGHIJKLMNOP"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpaceShape:
    """Ordered party dimensions ``m_1, ..., m_p`` of a tensor-product space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValidationError("a space needs at least one party")
        if any(d < 1 for d in dims):
            raise ValidationError(f"party dimensions must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    @property
    def nparties(self) -> int:
        return len(self.dims)

    def label(self, party: int) -> str:
        return PARTY_LABELS[party]

    def cut_label(self, parties: Sequence[int]) -> str:
        return ":".join(self.label(p) for p in parties)

    def complement(self, parties: Sequence[int]) -> tuple[int, ...]:
        chosen = set(parties)
        return tuple(i for i in range(self.nparties) if i not in chosen)

    def parse_parties(self, spec) -> tuple[int, ...]:
        """Turn ``"A"``, ``"A,B"``, ``"A:B"``, ``"AB"``, ``0`` or ``[0, 1]`` into sorted party indices."""
        if isinstance(spec, (int, np.integer)):
            items = [int(spec)]
        elif isinstance(spec, str):
            text = spec.replace(",", " ").replace(":", " ").replace("|", " ").split()
            if len(text) == 1 and text[0].isalpha() and len(text[0]) > 1:
                text = list(text[0])
            items = []
            for tok in text:
                if tok.isdigit():
                    items.append(int(tok))
                elif len(tok) == 1 and tok.upper() in PARTY_LABELS:
                    items.append(PARTY_LABELS.index(tok.upper()))
                else:
                    raise ValidationError(f"cannot parse party {tok!r}")
        else:
            items = [int(x) for x in spec]
        parties = tuple(sorted(set(items)))
        if not parties or any(p < 0 or p >= self.nparties for p in parties):
            raise ValidationError(f"invalid party selection {spec!r} for dims {self.dims}")
        return parties


def _as_shape(shape) -> SpaceShape:
    return shape if isinstance(shape, SpaceShape) else SpaceShape(tuple(shape))


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A Hermitian (by default positive semidefinite) operator on ``shape``.

    The stored matrix is the exact Hermitian part of the input, so downstream
    eigen-solvers see a symmetric matrix bit for bit.
    """

    matrix: np.ndarray
    shape: SpaceShape
    psd: bool = True
    tol: Tolerances | None = field(default=None, repr=False)

    def __post_init__(self):
        tol = resolve(self.tol)
        shape = _as_shape(self.shape)
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (shape.total, shape.total):
            raise ValidationError(
                f"matrix shape {m.shape} does not match dims {shape.dims} (total {shape.total})")
        if not np.all(np.isfinite(m)):
            raise ValidationError("matrix has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
        skew = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if skew > tol.herm * scale:
            raise ValidationError(f"matrix is not Hermitian (max |M - M^dag| = {skew:.3e})")
        m = (m + m.conj().T) / 2
        if self.psd:
            ev = np.linalg.eigvalsh(m)
            top = max(float(ev[-1]), 0.0)
            if ev[0] < -tol.psd * top - tol.herm:
                raise ValidationError(
                    f"operator is not positive semidefinite (min eigenvalue {ev[0]:.3e})")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def from_vectors(cls, vectors, weights=None, shape=None, tol=None) -> "HermitianOperator":
        """Build ``sum_l w_l |v_l><v_l|`` from state vectors (arrays or :class:`PureStateVector`)."""
        vecs = [v.amplitudes if isinstance(v, PureStateVector) else np.asarray(v, dtype=complex)
                for v in vectors]
        if shape is None:
            if vectors and isinstance(vectors[0], PureStateVector):
                shape = vectors[0].shape
            else:
                raise ValidationError("shape is required when passing raw amplitude arrays")
        shape = _as_shape(shape)
        if weights is None:
            weights = np.ones(len(vecs))
        weights = np.asarray(weights, dtype=float)
        if len(weights) != len(vecs):
            raise ValidationError("one weight per vector is required")
        if np.any(weights <= 0):
            raise ValidationError("weights must be positive")
        m = np.zeros((shape.total, shape.total), dtype=complex)
        for w, v in zip(weights, vecs):
            if v.shape != (shape.total,):
                raise ValidationError(f"vector of length {v.shape} does not match dims {shape.dims}")
            m += w * np.outer(v, v.conj())
        return cls(m, shape, True, tol)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.shape.dims

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def __repr__(self):
        return f"HermitianOperator(dims={self.dims}, trace={self.trace():.6g})"


@dataclass(frozen=True, eq=False)
class PureStateVector:
    amplitudes: np.ndarray
    shape: SpaceShape
    tol: Tolerances | None = field(default=None, repr=False)

    def __post_init__(self):
        tol = resolve(self.tol)
        shape = _as_shape(self.shape)
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if a.shape != (shape.total,):
            raise ValidationError(f"amplitude vector of length {a.size} does not match dims {shape.dims}")
        n = np.linalg.norm(a)
        if abs(n - 1.0) > tol.norm:
            raise ValidationError(f"state vector is not normalized (norm {n:.15g})")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "amplitudes", _frozen(a))

    @classmethod
    def normalized(cls, amplitudes, shape, tol=None) -> "PureStateVector":
        a = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = np.linalg.norm(a)
        if n == 0:
            raise ValidationError("cannot normalize the zero vector")
        return cls(a / n, shape, tol)

    @classmethod
    def from_kets(cls, shape, kets: dict, tol=None) -> "PureStateVector":
        """Build a normalized state from ``{(a_1, ..., a_p): amplitude}`` (0-based indices)."""
        shape = _as_shape(shape)
        a = np.zeros(shape.total, dtype=complex)
        for idx, amp in kets.items():
            a[np.ravel_multi_index(tuple(idx), shape.dims)] += amp
        return cls.normalized(a, shape, tol)

    def projector(self) -> HermitianOperator:
        return HermitianOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.shape, True, self.tol)


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """A product ``U^(1) (x) ... (x) U^(p)`` stored factor by factor."""

    factors: tuple[np.ndarray, ...]
    tol: Tolerances | None = field(default=None, repr=False)

    def __post_init__(self):
        tol = resolve(self.tol)
        facs = []
        for i, u in enumerate(self.factors):
            u = np.asarray(u, dtype=complex)
            if u.ndim != 2 or u.shape[0] != u.shape[1]:
                raise ValidationError(f"factor {i} is not square")
            err = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
            if err > tol.unit:
                raise ValidationError(f"factor {i} is not unitary (max |U^dag U - I| = {err:.3e})")
            facs.append(_frozen(u))
        object.__setattr__(self, "factors", tuple(facs))

    @classmethod
    def identity(cls, shape) -> "LocalUnitary":
        return cls(tuple(np.eye(d) for d in _as_shape(shape).dims))

    @property
    def shape(self) -> SpaceShape:
        return SpaceShape(tuple(u.shape[0] for u in self.factors))

    def matrix(self) -> np.ndarray:
        out = np.ones((1, 1), dtype=complex)
        for u in self.factors:
            out = np.kron(out, u)
        return out


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigvecs: np.ndarray
    rank: int
    shape: SpaceShape

    @property
    def eigenvectors(self) -> list[PureStateVector]:
        return [PureStateVector(self.eigvecs[:, i], self.shape, Tolerances(norm=1e-10))
                for i in range(self.eigvecs.shape[1])]

    def reconstruct(self) -> np.ndarray:
        v = self.eigvecs
        return (v * self.eigenvalues) @ v.conj().T


def spectral_decompose(H: HermitianOperator, tol: Tolerances | None = None) -> SpectralDecomposition:
    """Eigen-decomposition with eigenvalues in descending order."""
    tol = resolve(tol)
    if not isinstance(H, HermitianOperator):
        H = HermitianOperator(H, (np.asarray(H).shape[0],), psd=False)
    w, v = np.linalg.eigh(H.matrix)
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    top = float(np.max(np.abs(w))) if w.size else 0.0
    rank = int(np.sum(w > tol.rank * top)) if top > 0 else 0
    w = _frozen(w).real.copy()
    w.setflags(write=False)
    return SpectralDecomposition(w, _frozen(v), rank, H.shape)


def operator_rank(H: HermitianOperator, tol: Tolerances | None = None) -> int:
    return spectral_decompose(H, tol).rank


def numerical_rank(m: np.ndarray, rel: float = 1e-9, scale: float | None = None) -> int:
    """Count singular values above ``rel * scale`` (``scale`` defaults to the largest one)."""
    m = np.asarray(m)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    ref = s[0] if scale is None else scale
    if ref <= 0:
        return 0
    return int(np.sum(s > rel * ref))


def _side_matrix(amplitudes: np.ndarray, shape: SpaceShape, side: Sequence[int]) -> np.ndarray:
    rest = shape.complement(side)
    t = np.asarray(amplitudes).reshape(shape.dims).transpose(tuple(side) + rest)
    rows = int(np.prod([shape.dims[i] for i in side]))
    return t.reshape(rows, -1)


def _check_cut(shape: SpaceShape, cut) -> tuple[int, ...]:
    side = shape.parse_parties(cut)
    if len(side) == shape.nparties:
        raise ValidationError("both sides of a cut must be nonempty")
    return side


def schmidt_rank(v: PureStateVector, cut=(0,), tol: Tolerances | None = None) -> int:
    """Rank of the amplitude matrix of ``v`` across the bipartition ``cut | rest``."""
    tol = resolve(tol)
    side = _check_cut(v.shape, cut)
    return numerical_rank(_side_matrix(v.amplitudes, v.shape, side), tol.rank)


def apply_local_unitary(H: HermitianOperator, U: LocalUnitary) -> HermitianOperator:
    if U.shape.dims != H.shape.dims:
        raise ValidationError(f"local unitary dims {U.shape.dims} do not match operator dims {H.dims}")
    u = U.matrix()
    return HermitianOperator(u @ H.matrix @ u.conj().T, H.shape, H.psd, H.tol)


def lu_mixture(H: HermitianOperator, terms: Iterable, tol: Tolerances | None = None) -> HermitianOperator:
    """Convex combination ``sum_s p_s U_s H U_s^dag`` of local-unitary conjugates."""
    tol = resolve(tol)
    terms = list(terms)
    if not terms:
        raise ValidationError("a mixture needs at least one term")
    weights = np.array([float(w) for w, _ in terms])
    if np.any(weights <= 0):
        raise ValidationError("mixture weights must be positive")
    if abs(weights.sum() - 1.0) > tol.prob:
        raise ValidationError(f"mixture weights sum to {weights.sum():.15g}, not 1")
    out = np.zeros_like(H.matrix)
    for w, U in terms:
        if U.shape.dims != H.shape.dims:
            raise ValidationError(f"local unitary dims {U.shape.dims} do not match operator dims {H.dims}")
        u = U.matrix()
        out = out + w * (u @ H.matrix @ u.conj().T)
    return HermitianOperator(out, H.shape, H.psd, H.tol)


def swap_conjugate(H: HermitianOperator) -> HermitianOperator:
    """``S H S^dag`` with ``S|ij> = |ji>`` on a bipartite space with equal dimensions."""
    if H.shape.nparties != 2 or H.dims[0] != H.dims[1]:
        raise ValidationError(f"swap needs a bipartite space with m = n, got dims {H.dims}")
    n = H.dims[0]
    t = np.asarray(H.matrix).reshape(n, n, n, n).transpose(1, 0, 3, 2)
    return HermitianOperator(t.reshape(n * n, n * n), H.shape, H.psd, H.tol)


def partial_trace(H: HermitianOperator, keep: int) -> np.ndarray:
    """Reduced operator on party ``keep`` (all other parties traced out)."""
    p = H.shape.nparties
    if not isinstance(keep, (int, np.integer)) or not 0 <= keep < p:
        raise ValidationError(f"party index {keep!r} out of range for {p} parties")
    t = np.asarray(H.matrix).reshape(H.dims + H.dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:p])
    cols = list(letters[:p])
    cols[keep] = letters[p]
    expr = "".join(rows) + "".join(cols) + "->" + rows[keep] + cols[keep]
    return np.einsum(expr, t)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_local_unitary(shape, seed) -> LocalUnitary:
    """Per-party Haar-random unitaries, deterministic in ``seed``."""
    shape = _as_shape(shape)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return LocalUnitary(tuple(haar_unitary(d, rng) for d in shape.dims))


def max_schmidt_rank_in_range(H: HermitianOperator, cut=(0,), trials: int = 64, seed=0,
                              tol: Tolerances | None = None) -> int:
    """Largest Schmidt rank found among range eigenvectors and random combinations of them.

    The maximal rank in a linear space of matrices is attained on a dense open
    set, so each random combination hits it with probability one.
    """
    tol = resolve(tol)
    side = _check_cut(H.shape, cut)
    dec = spectral_decompose(H, tol)
    if dec.rank == 0:
        raise ValidationError("the zero operator has an empty range")
    basis = np.asarray(dec.eigvecs[:, :dec.rank])
    rng = np.random.default_rng(seed)
    cands = [basis[:, i] for i in range(dec.rank)]
    for _ in range(trials):
        c = rng.standard_normal(dec.rank) + 1j * rng.standard_normal(dec.rank)
        cands.append(basis @ c)
    best = 0
    for v in cands:
        v = v / np.linalg.norm(v)
        best = max(best, numerical_rank(_side_matrix(v, H.shape, side), tol.rank))
    return best
