"""Blocked coordinate matrices of range vectors and their determinantal minors.

For state vectors ``v_1, ..., v_s`` and a set of row parties, the pencil is
the tensor ``T[a, c, l]`` = amplitude of ``v_l`` at the basis index built from
the row-party multi-index ``a`` and the column-party multi-index ``c``.
Contracting every row-party axis with a coordinate vector gives the
``column_dim x s`` matrix whose rank defines the degenerating loci.  With a
single row party ``A`` on ``A (x) B`` the slices ``T[i]`` are exactly the
``n x s`` blocks ``X_i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Sequence

import numpy as np

from .operators import HermitianOperator, PureStateVector, SpaceShape, spectral_decompose
from .points import ProjectivePoint
from .polynomial import HomogeneousPolynomial
from .tolerances import Tolerances, ValidationError, resolve


@dataclass(frozen=True, eq=False)
class LinearPencil:
    """Multilinear matrix pencil ``sum_a (prod_g r^(g)_{a_g}) T[a]``."""

    shape: SpaceShape
    row_parties: tuple[int, ...]
    blocks: np.ndarray

    def __post_init__(self):
        b = np.array(self.blocks, dtype=complex)
        if b.ndim != len(self.row_parties) + 2:
            raise ValidationError("blocks must have one axis per row party plus (rows, s)")
        b.setflags(write=False)
        object.__setattr__(self, "blocks", b)
        object.__setattr__(self, "row_parties", tuple(int(p) for p in self.row_parties))

    @property
    def row_dims(self) -> tuple[int, ...]:
        return self.blocks.shape[:-2]

    @property
    def groups(self) -> tuple[tuple[int, int], ...]:
        return tuple(zip(self.row_parties, self.row_dims))

    @property
    def column_parties(self) -> tuple[int, ...]:
        return self.shape.complement(self.row_parties)

    @property
    def column_dim(self) -> int:
        return self.blocks.shape[-2]

    @property
    def s(self) -> int:
        return self.blocks.shape[-1]

    @property
    def nblocks(self) -> int:
        return int(np.prod(self.row_dims))

    @cached_property
    def scale(self) -> float:
        """Frobenius norm of the coefficient tensor; bounds the spectral norm at unit points."""
        return float(np.linalg.norm(self.blocks.reshape(-1)))

    def block(self, *index) -> np.ndarray:
        return self.blocks[tuple(index)]

    def restrict(self, maps: Sequence[np.ndarray]) -> "LinearPencil":
        """Pull back along ``r_g = maps[g] @ y_g``; groups mapped to a single point are absorbed."""
        if len(maps) != len(self.row_dims):
            raise ValidationError("one map per row group is required")
        t = self.blocks
        keep = []
        for g, m in enumerate(maps):
            m = np.asarray(m, dtype=complex)
            if m.ndim == 1:
                m = m[:, None]
            if m.shape[0] != self.row_dims[g]:
                raise ValidationError("restriction map has the wrong number of rows")
            # contract axis 0 (current group) and move the new axis to the end of the row axes
            t = np.tensordot(m, t, axes=([0], [0]))  # (k, rest..., rows, s)
            t = np.moveaxis(t, 0, len(self.row_dims) - 1)
            if m.shape[1] > 1:
                keep.append(g)
        # squeeze absorbed groups
        squeeze = tuple(g for g in range(len(maps)) if g not in keep)
        t = t.reshape(tuple(t.shape[g] for g in keep) + t.shape[-2:]) if squeeze else t
        return LinearPencil(self.shape, tuple(self.row_parties[g] for g in keep), t)


def _as_vectors(vectors, shape=None) -> tuple[np.ndarray, SpaceShape]:
    if len(vectors) == 0:
        raise ValidationError("a pencil needs at least one generating vector")
    arrs = []
    for v in vectors:
        if isinstance(v, PureStateVector):
            if shape is not None and v.shape.dims != shape.dims:
                raise ValidationError("vectors live on different spaces")
            shape = v.shape
            arrs.append(np.asarray(v.amplitudes))
        else:
            arrs.append(np.asarray(v, dtype=complex).reshape(-1))
    if shape is None:
        raise ValidationError("shape is required for raw amplitude arrays")
    shape = shape if isinstance(shape, SpaceShape) else SpaceShape(tuple(shape))
    V = np.array(arrs)
    if V.shape[1] != shape.total:
        raise ValidationError(f"vector length {V.shape[1]} does not match dims {shape.dims}")
    return V, shape


def _check_rows(shape: SpaceShape, row_parties) -> tuple[int, ...]:
    rows = shape.parse_parties(row_parties)
    if len(rows) == shape.nparties:
        raise ValidationError("row parties must be a proper subset of the parties")
    if any(shape.dims[p] < 2 for p in rows):
        raise ValidationError("row parties need dimension at least 2")
    return rows


def _pencil_from_matrix(V: np.ndarray, shape: SpaceShape, rows: tuple[int, ...]) -> LinearPencil:
    s = V.shape[0]
    cols = shape.complement(rows)
    t = V.reshape((s,) + shape.dims)
    t = np.transpose(t, tuple(1 + p for p in rows) + tuple(1 + p for p in cols) + (0,))
    row_dims = tuple(shape.dims[p] for p in rows)
    coldim = int(np.prod([shape.dims[p] for p in cols]))
    return LinearPencil(shape, rows, t.reshape(row_dims + (coldim, s)))


def build_pencil(vectors, row_parties, shape=None) -> LinearPencil:
    """Pencil of ``vectors`` (unweighted) with the given row parties."""
    V, shape = _as_vectors(vectors, shape)
    return _pencil_from_matrix(V, shape, _check_rows(shape, row_parties))


def range_basis(H: HermitianOperator, tol: Tolerances | None = None) -> list[PureStateVector]:
    """Eigenvectors of ``H`` whose eigenvalues clear the rank threshold; they span ``range(H)``."""
    dec = spectral_decompose(H, tol)
    return dec.eigenvectors[:dec.rank]


def pencil_from_operator(H: HermitianOperator, row_parties, tol: Tolerances | None = None) -> LinearPencil:
    """Pencil of the spectral range basis.  The zero operator gives a pencil with no columns."""
    dec = spectral_decompose(H, tol)
    rows = _check_rows(H.shape, row_parties)
    V = np.asarray(dec.eigvecs[:, :dec.rank]).T.reshape(dec.rank, H.shape.total)
    return _pencil_from_matrix(V, H.shape, rows)


def _point_parts(P: LinearPencil, point) -> list[np.ndarray]:
    coords = point.coords if isinstance(point, ProjectivePoint) else point
    if len(P.row_dims) == 1 and not isinstance(point, ProjectivePoint):
        arr = np.asarray(point)
        if arr.ndim == 1 and arr.size == P.row_dims[0] and not isinstance(point[0], (list, tuple, np.ndarray)):
            coords = [arr]
    parts = [np.asarray(c, dtype=complex).reshape(-1) for c in coords]
    if len(parts) != len(P.row_dims) or any(p.size != d for p, d in zip(parts, P.row_dims)):
        raise ValidationError(
            f"point with group sizes {[p.size for p in parts]} does not match pencil groups {P.row_dims}")
    return parts


def evaluate_pencil(P: LinearPencil, point) -> np.ndarray:
    """The ``column_dim x s`` matrix ``sum_a (prod_g r^(g)_{a_g}) T[a]``."""
    m = P.blocks
    for x in _point_parts(P, point):
        m = np.tensordot(x, m, axes=([0], [0]))
    return m


def evaluate_pencil_many(P: LinearPencil, xs: Sequence[np.ndarray]) -> np.ndarray:
    """Batched evaluation; ``xs[g]`` has shape ``(S, row_dims[g])``.  Returns ``(S, rows, s)``."""
    if len(xs) != len(P.row_dims):
        raise ValidationError("one coordinate batch per row group is required")
    if not xs:
        return P.blocks[None]
    m = np.einsum("sa,a...->s...", np.asarray(xs[0], dtype=complex), P.blocks)
    for x in xs[1:]:
        m = np.einsum("sa,sa...->s...", np.asarray(x, dtype=complex), m)
    return m


def _entry_polys(P: LinearPencil) -> list[list[HomogeneousPolynomial]]:
    groups = P.groups
    offs = np.cumsum((0,) + P.row_dims[:-1]) if P.row_dims else ()
    nv = sum(P.row_dims)
    multi = list(np.ndindex(*P.row_dims)) if P.row_dims else [()]
    exps = []
    for a in multi:
        e = [0] * nv
        for g, ag in enumerate(a):
            e[offs[g] + ag] = 1
        exps.append(tuple(e))
    out = []
    for c in range(P.column_dim):
        row = []
        for l in range(P.s):
            row.append(HomogeneousPolynomial(groups, {e: P.blocks[a + (c, l)] for e, a in zip(exps, multi)},
                                             prune=0.0))
        out.append(row)
    return out


def minor_ideal(P: LinearPencil, k: int, normalize: bool = True,
                tol: Tolerances | None = None) -> list[HomogeneousPolynomial]:
    """All ``(k+1) x (k+1)`` minors of the evaluated pencil as multi-homogeneous polynomials.

    Minors are listed by row subset, then column subset, both lexicographic.
    Cancellation dust below ``coeff * max|T|^(k+1)`` is removed, so minors that
    vanish identically come back as zero polynomials.
    """
    tol = resolve(tol)
    if not isinstance(k, (int, np.integer)) or not 0 <= k < min(P.column_dim, P.s):
        raise ValidationError(
            f"k={k} out of range for a {P.column_dim} x {P.s} pencil (need 0 <= k < {min(P.column_dim, P.s)})")
    k = int(k)
    entries = _entry_polys(P)
    big = float(np.max(np.abs(P.blocks))) if P.blocks.size else 0.0
    floor = tol.coeff * big ** (k + 1)
    memo: dict = {}

    def det(rows: tuple, cols: tuple) -> HomogeneousPolynomial:
        key = (rows, cols)
        if key in memo:
            return memo[key]
        if len(rows) == 1:
            val = entries[rows[0]][cols[0]]
        else:
            val = None
            for j, c in enumerate(cols):
                e = entries[rows[0]][c]
                if e.is_zero():
                    continue
                sub = det(rows[1:], cols[:j] + cols[j + 1:])
                if sub.is_zero():
                    continue
                term = e * sub
                if j % 2:
                    term = -term
                val = term if val is None else val + term
            if val is None:
                val = HomogeneousPolynomial.zero(P.groups)
        memo[key] = val
        return val

    out = []
    for rs in combinations(range(P.column_dim), k + 1):
        for cs in combinations(range(P.s), k + 1):
            m = det(rs, cs).pruned(tol.coeff, floor)
            out.append(m.normalized() if normalize else m)
    return out


def poly_evaluate(q: HomogeneousPolynomial, point) -> complex:
    """Evaluate ``q`` at a :class:`ProjectivePoint` or at raw per-group coordinates."""
    if isinstance(point, ProjectivePoint):
        point = point.coords
    return q.evaluate(point)
