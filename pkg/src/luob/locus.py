"""Rank loci of linear pencils: membership, search, dimension, degree and signatures.

A :class:`DegeneratingLocus` is the set of points ``r`` in a product of
projective spaces where the evaluated pencil has rank at most ``k``.  Exact
routes are used wherever the geometry allows it:

* a single ``CP^1`` group: common roots of the binary minor forms;
* ``k = 0`` with a single group: a null space computation;
* a single nonzero minor: a hypersurface, nonempty of codimension one.

Everything else goes through a batched Levenberg-Marquardt multi-start on
every affine chart, with membership re-checked by singular values.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from .cubic import PlaneCubicClass, UnsupportedShape, classify_plane_cubic
from .operators import haar_unitary
from .pencil import LinearPencil, evaluate_pencil, evaluate_pencil_many, minor_ideal
from .points import ProjectivePoint, sort_points
from .polynomial import HomogeneousPolynomial
from .tolerances import Tolerances, ValidationError, resolve

STARTS_PER_CHART = 200
QUIET_ROUNDS = 3
MAX_ROUNDS = 8
LM_ITERATIONS = 60
ROOT_CLUSTER_LADDER = (1e-6, 1e-4, 1e-3, 1e-2, 5e-2)
# isolated points closer than this are merged (non-reduced points are only
# located to about the square root of the residual tolerance)
FINITE_MERGE = 1e-3


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


class DegeneratingLocus:
    """Points where the pencil has rank ``<= k``.

    ``k`` may reach ``column_dim - 1``; when ``k >= min(column_dim, s)`` the
    locus is the whole ambient space.
    """

    def __init__(self, pencil: LinearPencil, k: int, tol: Tolerances | None = None):
        if not isinstance(k, (int, np.integer)) or k < 0 or (k >= max(pencil.column_dim, 1) and pencil.s > 0):
            raise ValidationError(f"k={k} out of range for a pencil with {pencil.column_dim} rows")
        self.pencil = pencil
        self.k = int(k)
        self.tol = resolve(tol)

    def __repr__(self):
        return f"DegeneratingLocus(groups={self.pencil.groups}, k={self.k}, shape={self.pencil.column_dim}x{self.pencil.s})"

    @property
    def sizes(self) -> tuple[int, ...]:
        return self.pencil.row_dims

    @property
    def ambient_dim(self) -> int:
        return sum(n - 1 for n in self.sizes)

    @property
    def trivially_full(self) -> bool:
        return self.k >= min(self.pencil.column_dim, self.pencil.s)

    @cached_property
    def minors(self) -> list[HomogeneousPolynomial]:
        """Nonzero ``(k+1)``-minors, each normalized to unit max coefficient."""
        if self.trivially_full:
            return []
        return [m for m in minor_ideal(self.pencil, self.k, tol=self.tol) if not m.is_zero()]

    @property
    def is_full(self) -> bool:
        return self.trivially_full or not self.minors

    @property
    def threshold(self) -> float:
        return self.tol.rank * max(self.pencil.scale, 1e-300)

    def restrict(self, maps) -> "DegeneratingLocus":
        return DegeneratingLocus(self.pencil.restrict(maps), self.k, self.tol)


# ---------------------------------------------------------------- membership

def _rank_deficiency(L: DegeneratingLocus, mats: np.ndarray) -> np.ndarray:
    """``sigma_{k+1}`` of each matrix in a batch (0 when there are at most ``k`` singular values)."""
    if mats.shape[-1] == 0 or mats.shape[-2] == 0:
        return np.zeros(mats.shape[0])
    s = np.linalg.svd(mats, compute_uv=False)
    if s.shape[-1] <= L.k:
        return np.zeros(mats.shape[0])
    return s[:, L.k]


def member(L: DegeneratingLocus, p) -> bool:
    """True iff the evaluated pencil has numerical rank ``<= k`` at ``p``.

    Singular values are compared with ``rank * scale`` where ``scale`` is the
    Frobenius norm of the pencil, so points where the whole matrix vanishes
    are handled like any other.
    """
    if L.trivially_full:
        return True
    if not isinstance(p, ProjectivePoint):
        p = _as_point(L, p)
    m = evaluate_pencil(L.pencil, p)
    return bool(_rank_deficiency(L, m[None])[0] <= L.threshold)


def member_many(L: DegeneratingLocus, xs, threshold: float | None = None) -> np.ndarray:
    """Vectorised membership for unit coordinate batches ``xs[g]`` of shape ``(S, n_g)``."""
    n = xs[0].shape[0] if xs else 1
    if L.trivially_full:
        return np.ones(n, dtype=bool)
    mats = evaluate_pencil_many(L.pencil, xs)
    if mats.shape[0] != n:
        mats = np.broadcast_to(mats, (n,) + mats.shape[1:])
    thr = L.threshold if threshold is None else threshold * max(L.pencil.scale, 1e-300)
    return _rank_deficiency(L, mats) <= thr


def max_minor_modulus(L: DegeneratingLocus, p) -> float:
    p = p if isinstance(p, ProjectivePoint) else _as_point(L, p)
    if not L.minors:
        return 0.0
    return max(abs(m.evaluate(p.coords)) for m in L.minors)


def _as_point(L: DegeneratingLocus, p) -> ProjectivePoint:
    if len(L.sizes) == 1:
        arr = np.asarray(p, dtype=complex)
        if arr.ndim == 1 and arr.size == L.sizes[0]:
            return ProjectivePoint((arr,))
    return ProjectivePoint(tuple(np.asarray(c, dtype=complex) for c in p))


def _points_from_flat(sizes, X: np.ndarray) -> list[ProjectivePoint]:
    out = []
    splits = np.cumsum(sizes)[:-1]
    for row in X:
        out.append(ProjectivePoint(tuple(np.split(row, splits))))
    return out


# ---------------------------------------------------------------- exact routes

def _random_unitary(n: int, rng) -> np.ndarray:
    return haar_unitary(n, rng)


def _cluster(values: np.ndarray, tol: float) -> list[list[complex]]:
    if tol == 0:
        return [[v] for v in values]
    clusters: list[list[complex]] = []
    for v in sorted(values, key=lambda z: (z.real, z.imag)):
        for c in clusters:
            ctr = np.mean(c)
            if abs(v - ctr) <= tol * (1 + abs(ctr)):
                c.append(v)
                break
        else:
            clusters.append([v])
    return clusters


def _binary_roots(forms: list[HomogeneousPolynomial], rng, residual=None,
                  threshold: float = 1e-9) -> list[tuple[np.ndarray, int]]:
    """Common roots of binary forms as ``(unit 2-vector, multiplicity)`` pairs.

    The roots of a random combination are computed after a random unitary
    change of coordinates.  An ``m``-fold root is only resolved to about
    ``eps^(1/m)``, but the mean of its cluster is accurate, so cluster means
    over a ladder of radii are all candidates.  Candidates whose ``residual``
    (by default the relative value of the combination) is at most
    ``threshold`` are kept best first, skipping any within ``FINITE_MERGE`` of
    one already kept.  Each raw root counts towards the multiplicity of the
    nearest kept root.
    """
    U = _random_unitary(2, rng)
    w = rng.standard_normal(len(forms)) + 1j * rng.standard_normal(len(forms))
    d = forms[0].degree
    # coefficients of f(U (1, t)) by interpolation at the (d+1)-th roots of unity
    ts_unit = np.exp(2j * np.pi * np.arange(d + 1) / (d + 1))
    ys = (U @ np.vstack([np.ones(d + 1), ts_unit])).T
    vals = sum(wi * f.evaluate_many(ys) for wi, f in zip(w, forms))
    coeffs = np.fft.fft(vals) / (d + 1)
    big = np.max(np.abs(coeffs))
    if big == 0 or d == 0:
        return []
    poly = coeffs[::-1]  # highest power of t first, with s = 1
    lead = 0
    while lead < d and abs(poly[lead]) <= 1e-13 * big:
        lead += 1
    ts = np.roots(poly[lead:]) if d > lead else np.array([], dtype=complex)
    if residual is None:
        norm1 = float(np.sum(np.abs(coeffs)))

        def residual(v):
            y = U.conj().T @ v
            return abs(sum(c * y[0] ** (d - j) * y[1] ** j for j, c in enumerate(coeffs))) / norm1

    def unit(y):
        v = U @ np.asarray(y, dtype=complex)
        return v / np.linalg.norm(v)

    raw = [unit([1, t]) for t in ts] + [unit([0, 1])] * lead
    cands = [(unit([0, 1]), lead)] if lead else []
    gaps = np.abs(ts[:, None] - ts[None, :]) / (1 + np.abs(ts))[:, None]
    np.fill_diagonal(gaps, np.inf)
    ladder = (0.0,) + ROOT_CLUSTER_LADDER if ts.size > 1 and gaps.min() <= ROOT_CLUSTER_LADDER[-1] else (0.0,)
    for radius in ladder:
        cands += [(unit([1, np.mean(c)]), len(c)) for c in _cluster(ts, radius)]
    # residuals bottom out near machine precision, where they no longer rank
    # a cluster mean above a single perturbed root: larger clusters go first
    scored = sorted(((-size, residual(v), i) for i, (v, size) in enumerate(cands)))
    found: list[np.ndarray] = []
    for _, r, i in scored:
        if r > threshold:
            continue
        v = cands[i][0]
        if all(np.sqrt(max(0.0, 1 - abs(np.vdot(v, f)) ** 2)) > FINITE_MERGE for f in found):
            found.append(v)
    mult = [0] * len(found)
    for v in raw:
        if found:
            ov = [abs(np.vdot(v, f)) for f in found]
            i = int(np.argmax(ov))
            if ov[i] > 1 - 0.05:
                mult[i] += 1
    return list(zip(found, mult))


def _cp1_points(L: DegeneratingLocus, rng) -> list[ProjectivePoint]:
    """All points of a locus in a single ``CP^1`` (the locus must not be full)."""
    scale = max(L.pencil.scale, 1e-300)

    def residual(v):
        return float(_rank_deficiency(L, evaluate_pencil(L.pencil, (v,))[None])[0]) / scale

    roots = _binary_roots(L.minors, rng, residual, L.tol.rank)
    return sort_points([ProjectivePoint((v,)) for v, _ in roots])


def _linear_null_space(L: DegeneratingLocus) -> np.ndarray:
    """Basis (columns) of ``{r : sum_i r_i T[i] = 0}`` for a single group and ``k = 0``."""
    T = L.pencil.blocks
    A = T.reshape(T.shape[0], -1)
    u, s, vh = np.linalg.svd(A.T)
    r = int(np.sum(s > L.threshold))
    v = vh.conj().T  # columns span the row space complement
    return v[:, r:]


def _single_linear(L: DegeneratingLocus) -> bool:
    return len(L.sizes) == 1 and L.k == 0


# ---------------------------------------------------------------- global search

class _MonomialSystem:
    """All minors evaluated together, with Jacobians, on batches of flat points."""

    def __init__(self, polys: list[HomogeneousPolynomial]):
        monos = sorted({e for p in polys for e in p.terms})
        index = {e: i for i, e in enumerate(monos)}
        self.U = np.array(monos, dtype=int).reshape(len(monos), polys[0].nvars)
        self.C = np.zeros((len(monos), len(polys)), dtype=complex)
        for j, p in enumerate(polys):
            for e, c in p.terms.items():
                self.C[index[e], j] = c
        nv = self.U.shape[1]
        self.dU = []
        for v in range(nv):
            d = self.U.copy()
            d[:, v] = np.maximum(d[:, v] - 1, 0)
            self.dU.append((self.U[:, v].astype(float), d))

    def __call__(self, X: np.ndarray):
        maxdeg = int(self.U.max()) if self.U.size else 0
        pw = np.ones((X.shape[0], X.shape[1], maxdeg + 1), dtype=complex)
        for d in range(1, maxdeg + 1):
            pw[:, :, d] = pw[:, :, d - 1] * X
        cols = np.arange(X.shape[1])
        mon = np.prod(pw[:, cols[None, :], self.U], axis=2)
        F = mon @ self.C
        J = np.empty((X.shape[0], self.C.shape[1], X.shape[1]), dtype=complex)
        for v, (mult, d) in enumerate(self.dU):
            dm = np.prod(pw[:, cols[None, :], d], axis=2) * mult
            J[:, :, v] = dm @ self.C
        return F, J


def _charts(sizes) -> list[tuple[int, ...]]:
    return list(product(*[range(n) for n in sizes]))


def _lm_solve(system: _MonomialSystem, X: np.ndarray, free: np.ndarray, iters: int) -> np.ndarray:
    """Levenberg-Marquardt on the free coordinates of every row.

    Damping is ``||F||`` far from a zero and ``||F||^2`` close to one, which
    keeps quadratic convergence at regular zeros.  Rows leave the active set
    once their step stalls; rows that blow up are discarded.
    """
    X = X.copy()
    nv = X.shape[1]
    eye = np.eye(nv)
    dead = np.zeros(X.shape[0], dtype=bool)
    active = np.arange(X.shape[0])
    last = None
    scale = max(np.max(np.abs(system.C)), 1e-300) if system.C.size else 1.0
    for _ in range(iters):
        if not active.size:
            break
        Xa, fr = X[active], free[active]
        F, J = system(Xa)
        J = J * fr[:, None, :]
        nF = np.linalg.norm(F, axis=1)
        JH = np.conj(np.swapaxes(J, 1, 2))
        A = JH @ J
        tr = np.real(np.trace(A, axis1=1, axis2=2))
        mu = np.where(nF > 1e-6, nF, nF ** 2) + 1e-15 * (1 + tr)
        A = A + mu[:, None, None] * eye
        b = -(JH @ F[:, :, None])
        step = np.linalg.solve(A, b)[:, :, 0] * fr
        xn = np.linalg.norm(Xa, axis=1)
        sn = np.linalg.norm(step, axis=1)
        cap = 2.0 * (1.0 + xn)
        step *= np.minimum(1.0, cap / np.maximum(sn, 1e-300))[:, None]
        Xa = Xa + step
        X[active] = Xa
        bad = ~np.all(np.isfinite(Xa), axis=1) | (np.linalg.norm(Xa, axis=1) > 1e8)
        dead[active[bad]] = True
        stalled = sn <= 1e-12 * (1 + xn)
        if last is not None:
            # stuck at a local minimum with a clearly nonzero residual
            stalled |= (nF > 1e-6 * scale) & (nF > 0.999 * last)
        keep = ~bad & ~stalled
        active, last = active[keep], nF[keep]
    return X[~dead]


def _unique_rows(parts: list[np.ndarray], tol: float) -> np.ndarray:
    """Indices of a greedy phase-invariant dedup of unit rows (``parts[g]`` is ``(S, n_g)``)."""
    keys = []
    for P in parts:
        ref = P[np.arange(P.shape[0]), np.argmax(np.abs(P), axis=1)]
        Q = P * (np.abs(ref) / ref)[:, None]
        keys.append(np.round(np.concatenate([Q.real, Q.imag], axis=1), 4))
    _, first = np.unique(np.concatenate(keys, axis=1), axis=0, return_index=True)
    first = np.sort(first)
    parts = [P[first] for P in parts]
    n = first.size
    dist = np.zeros((n, n))
    for P in parts:
        ov = np.minimum(np.abs(P.conj() @ P.T), 1.0)
        dist = np.maximum(dist, np.sqrt(np.maximum(0.0, 1.0 - ov * ov)))
    keep: list[int] = []
    taken = np.zeros(n, dtype=bool)
    for i in range(n):
        if not taken[i]:
            keep.append(i)
            taken |= dist[i] <= tol
    return first[np.array(keep, dtype=int)]


def _search_round(L: DegeneratingLocus, system: _MonomialSystem, rng, starts: int) -> list[tuple[ProjectivePoint, float]]:
    """One batch of starts on every chart; members sorted by residual, deduplicated."""
    sizes = L.sizes
    charts = _charts(sizes)
    nv = sum(sizes)
    offs = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    X = np.empty((len(charts) * starts, nv), dtype=complex)
    free = np.ones_like(X, dtype=float)
    spread = np.exp(rng.uniform(np.log(0.3), np.log(3.0), size=(X.shape[0], 1)))
    X[:] = (rng.standard_normal(X.shape) + 1j * rng.standard_normal(X.shape)) * spread / np.sqrt(2)
    for ci, chart in enumerate(charts):
        rows = slice(ci * starts, (ci + 1) * starts)
        for g, j in enumerate(chart):
            X[rows, offs[g] + j] = 1.0
            free[rows, offs[g] + j] = 0.0
    X = _lm_solve(system, X, free, LM_ITERATIONS)
    if X.shape[0] == 0:
        return []
    splits = np.cumsum(sizes)[:-1]
    parts = np.split(X, splits, axis=1)
    norms = [np.linalg.norm(p, axis=1) for p in parts]
    ok = np.all([n > 0 for n in norms], axis=0)
    parts = [p[ok] / n[ok, None] for p, n in zip(parts, norms)]
    if not parts[0].shape[0]:
        return []
    res = _rank_deficiency(L, evaluate_pencil_many(L.pencil, parts)) / max(L.pencil.scale, 1e-300)
    keep = res <= L.tol.rank
    parts, res = [p[keep] for p in parts], res[keep]
    if not parts[0].shape[0]:
        return []
    order = np.argsort(res, kind="stable")
    parts, res = [p[order] for p in parts], res[order]
    idx = _unique_rows(parts, L.tol.point)
    flat = np.concatenate(parts, axis=1)[idx]
    return list(zip(_points_from_flat(sizes, flat), res[idx]))


def _global_points(L: DegeneratingLocus, rng, max_points: int | None = None,
                   starts: int = STARTS_PER_CHART, merge: float | None = None) -> tuple[list[ProjectivePoint], int]:
    """Multi-start search until ``QUIET_ROUNDS`` consecutive rounds add nothing new.

    Points within ``merge`` of each other count as one; the representative
    with the smallest rank residual is kept.
    """
    system = _MonomialSystem(L.minors)
    radius = L.tol.point if merge is None else max(merge, L.tol.point)
    found: list[ProjectivePoint] = []
    best: list[float] = []
    quiet = rounds = 0
    while rounds < MAX_ROUNDS and quiet < QUIET_ROUNDS:
        rounds += 1
        new = 0
        for p, r in _search_round(L, system, rng, starts):
            hit = next((i for i, q in enumerate(found) if p.distance(q) <= radius), None)
            if hit is None:
                found.append(p)
                best.append(r)
                new += 1
                if max_points is not None and len(found) >= max_points:
                    return found, rounds
            elif r < best[hit]:
                found[hit], best[hit] = p, r
        quiet = 0 if new else quiet + 1
    return found, rounds


def _random_point(sizes, rng) -> ProjectivePoint:
    return ProjectivePoint(tuple(rng.standard_normal(n) + 1j * rng.standard_normal(n) for n in sizes))


# ---------------------------------------------------------------- public queries

def _nonempty(L: DegeneratingLocus, rng) -> bool:
    if L.is_full:
        return True
    if not L.sizes:
        return member(L, ProjectivePoint(()))
    if len(L.sizes) == 1 and L.sizes[0] == 2:
        return bool(_cp1_points(L, rng))
    if _single_linear(L):
        return _linear_null_space(L).shape[1] > 0
    if len(L.minors) == 1 and L.ambient_dim >= 1:
        return True
    pts, _ = _global_points(L, rng, max_points=1)
    return bool(pts)


def is_empty(L: DegeneratingLocus, trials: int = 1, seed=0) -> bool:
    """True iff no point of the locus is found (exact routes where available)."""
    rng = _rng(seed)
    return not any(_nonempty(L, rng) for _ in range(max(1, trials)))


def _random_slice(L: DegeneratingLocus, codims, rng) -> DegeneratingLocus:
    maps = []
    for n, c in zip(L.sizes, codims):
        U = _random_unitary(n, rng)
        maps.append(U[:, : n - c])
    return L.restrict(maps)


def estimate_dimension(L: DegeneratingLocus, trials: int = 2, seed=0) -> int:
    """Largest ``d`` such that a generic codimension-``d`` linear slice meets the locus.

    For products of projective spaces every split ``d = sum_g c_g`` of the
    codimension over the groups is tried.  Returns ``-1`` for an empty locus.
    """
    rng = _rng(seed)
    if L.is_full:
        return L.ambient_dim
    if not L.sizes:
        return 0 if member(L, ProjectivePoint(())) else -1
    if _single_linear(L):
        return _linear_null_space(L).shape[1] - 1
    if len(L.minors) == 1:
        return L.ambient_dim - 1
    d = _positive_dimension(L, trials, rng)
    if d is not None:
        return d
    return 0 if _nonempty(L, rng) else -1


def _positive_dimension(L: DegeneratingLocus, trials: int, rng) -> int | None:
    """The dimension if some slice of positive codimension meets the locus, else ``None``."""
    maxc = [n - 1 for n in L.sizes]
    for d in range(L.ambient_dim - 1, 0, -1):
        for codims in product(*[range(m + 1) for m in maxc]):
            if sum(codims) != d:
                continue
            votes = sum(_nonempty(_random_slice(L, codims, rng), rng) for _ in range(max(1, trials)))
            if 2 * votes >= max(1, trials):
                return d
    return None


def _line_counts(L: DegeneratingLocus, rng) -> tuple[int, int]:
    """(multiplicity-weighted, distinct) intersection counts with a random line."""
    line = L.restrict([_random_unitary(L.sizes[0], rng)[:, :2]])
    if line.is_full:
        raise ValidationError("random line lies inside the locus")
    if len(L.minors) == 1:
        roots = _binary_roots(line.minors, rng)
        hits = [(v, m) for v, m in roots if m > 0]
        return sum(m for _, m in hits), len(hits)
    n = len(_cp1_points(line, rng))
    return n, n


def estimate_degree(L: DegeneratingLocus, trials: int = 3, seed=0, distinct: bool = False) -> int:
    """Intersection count with a random line for a codimension-one locus in one ``CP^N``.

    For a single defining minor the count is multiplicity weighted (the degree
    of the hypersurface) unless ``distinct`` is set; otherwise it is the number
    of distinct common roots.  Majority vote over ``trials`` random lines.
    """
    rng = _rng(seed)
    if len(L.sizes) != 1:
        raise ValidationError("degree estimation needs a single variable group")
    dim = estimate_dimension(L, seed=rng)
    if dim != L.ambient_dim - 1 or dim < 1 or L.is_full:
        raise ValidationError(f"degree estimation needs a codimension-one locus, got dimension {dim}")
    votes = Counter(_line_counts(L, rng) for _ in range(max(1, trials)))
    weighted, dist = votes.most_common(1)[0][0]
    return dist if distinct else weighted


def extract_finite_points(L: DegeneratingLocus, seed=0, check: bool = True) -> list[ProjectivePoint]:
    """All isolated points of a zero-dimensional locus, in a deterministic order."""
    rng = _rng(seed)
    if check:
        dim = estimate_dimension(L, seed=rng)
        if dim != 0:
            raise ValidationError(f"finite point extraction needs a zero-dimensional locus, got dimension {dim}")
    if len(L.sizes) == 1 and L.sizes[0] == 2:
        return _cp1_points(L, rng)
    if _single_linear(L):
        ns = _linear_null_space(L)
        return [ProjectivePoint((ns[:, 0],))] if ns.shape[1] == 1 else []
    pts, _ = _global_points(L, rng, merge=FINITE_MERGE)
    return sort_points(_snap(L, p) for p in pts)


def _snap(L: DegeneratingLocus, p: ProjectivePoint) -> ProjectivePoint:
    """Zero coordinates below ``tol.point`` when the result is still a member.

    Non-reduced points are only located to about the square root of the
    working precision, which leaves visible noise in coordinates that vanish.
    """
    parts = [np.where(np.abs(x) < L.tol.point, 0, x) for x in p.coords]
    if all(np.array_equal(a, b) for a, b in zip(parts, p.coords)) or any(not a.any() for a in parts):
        return p
    q = ProjectivePoint(tuple(parts))
    return q if member(L, q) else p


def sample_points(L: DegeneratingLocus, count: int = 50, seed=0) -> list[ProjectivePoint]:
    """Up to ``count`` distinct members of the locus."""
    rng = _rng(seed)
    if L.is_full:
        return [_random_point(L.sizes, rng) for _ in range(count)]
    if len(L.sizes) == 1 and L.sizes[0] == 2:
        return _cp1_points(L, rng)[:count]
    if _single_linear(L):
        ns = _linear_null_space(L)
        if ns.shape[1] == 0:
            return []
        if ns.shape[1] == 1:
            return [ProjectivePoint((ns[:, 0],))]
        out = []
        for _ in range(count):
            c = rng.standard_normal(ns.shape[1]) + 1j * rng.standard_normal(ns.shape[1])
            out.append(ProjectivePoint((ns @ c,)))
        return out
    if len(L.sizes) == 1 and len(L.minors) == 1:
        return _hypersurface_points(L, count, rng)
    pts, _ = _global_points(L, rng, max_points=count)
    return pts[:count]


class _OnLine:
    """A form pulled back to the line ``r = B y`` (just enough interface for ``_binary_roots``)."""

    def __init__(self, q: HomogeneousPolynomial, B: np.ndarray):
        self.q, self.B, self.degree = q, B, q.degree

    def evaluate_many(self, ys: np.ndarray) -> np.ndarray:
        return self.q.evaluate_many(ys @ self.B.T)


def _hypersurface_points(L: DegeneratingLocus, count: int, rng) -> list[ProjectivePoint]:
    """Members of a single-minor locus: roots of the minor on random lines."""
    n, q = L.sizes[0], L.minors[0]
    rows = []
    for _ in range(2 + 2 * count // max(q.degree, 1)):
        B = _random_unitary(n, rng)[:, :2]
        rows += [B @ v for v, _m in _binary_roots([_OnLine(q, B)], rng)]
    if not rows:
        return []
    X = np.array(rows)
    X = X[member_many(L, [X])]
    X = X[np.sort(_unique_rows([X], L.tol.point))] if X.shape[0] else X
    return [ProjectivePoint((x,)) for x in X[:count]]


# ---------------------------------------------------------------- line unions

@dataclass(frozen=True)
class LineComponent:
    coeffs: np.ndarray
    multiplicity: int

    def __repr__(self):
        c = np.round(self.coeffs, 6) + 0.0
        return f"LineComponent({c.tolist()}, multiplicity={self.multiplicity})"


def _normalize_form(c: np.ndarray) -> np.ndarray:
    i = int(np.flatnonzero(np.abs(c) > 1e-8 * np.max(np.abs(c)))[0])
    return c / c[i]


def _line_poly(groups, coeffs) -> HomogeneousPolynomial:
    return HomogeneousPolynomial.linear_form(groups, 0, coeffs)


def detect_line_union(L: DegeneratingLocus, seed=0) -> list[LineComponent] | None:
    """Factor the defining minor of a plane curve into linear forms, if it splits.

    Roots on two random lines are paired into candidate lines; a pairing is
    kept when the curve vanishes along the candidate.  The product of the
    candidates (with multiplicities from the root clusters) must reproduce the
    minor up to scale with relative remainder at most ``factor``.
    """
    rng = _rng(seed)
    if len(L.sizes) != 1 or L.sizes[0] != 3 or L.is_full or len(L.minors) != 1:
        raise ValidationError("line-union detection needs a plane curve cut out by a single minor")
    q = L.minors[0]
    tol = L.tol

    def roots_on_random_line():
        B = _random_unitary(3, rng)[:, :2]
        forms = [q.substitute([B])]
        return [(B @ v, m) for v, m in _binary_roots(forms, rng) if m > 0]

    r1, r2 = roots_on_random_line(), roots_on_random_line()
    comps: list[LineComponent] = []
    for p, mult in r1:
        for pp, _ in r2:
            ell = np.cross(p, pp)
            if np.linalg.norm(ell) < 1e-8:
                continue
            ell = ell / np.linalg.norm(ell)
            vals = []
            for t in rng.standard_normal(3) + 1j * rng.standard_normal(3):
                x = p + t * pp
                x = x / np.linalg.norm(x)
                vals.append(abs(q.evaluate(x)))
            if max(vals) <= tol.factor:
                comps.append(LineComponent(_normalize_form(ell), mult))
                break
        else:
            return None
    prod_poly = HomogeneousPolynomial.constant(q.groups, 1.0)
    for c in comps:
        for _ in range(c.multiplicity):
            prod_poly = prod_poly * _line_poly(q.groups, c.coeffs)
    keys = sorted(set(prod_poly.terms) | set(q.terms))
    a = np.array([prod_poly.coefficient(k) for k in keys])
    b = np.array([q.coefficient(k) for k in keys])
    scale = np.vdot(a, b) / np.vdot(a, a)
    remainder = np.linalg.norm(b - scale * a) / np.linalg.norm(b)
    if remainder > tol.factor:
        return None
    comps.sort(key=lambda c: tuple(np.round(np.concatenate([c.coeffs.real, c.coeffs.imag]), 7)))
    return comps


# ---------------------------------------------------------------- signatures

@dataclass
class LocusSignature:
    """Coarse projective invariants of a locus; comparing them is sound for inequality."""

    ambient: tuple[int, ...]
    empty: bool
    dimension: int
    full: bool = False
    degree: int | None = None
    reduced_degree: int | None = None
    finite_points: list[ProjectivePoint] | None = None
    line_components: list[LineComponent] | None = None
    lines_checked: bool = False
    cubic_class: PlaneCubicClass | None = None
    confidence: dict = field(default_factory=dict)

    def summary(self) -> str:
        if self.empty:
            return "empty"
        if self.full:
            return f"full space (dim {self.dimension})"
        parts = [f"dim {self.dimension}"]
        if self.finite_points is not None:
            parts.append(f"{len(self.finite_points)} point(s) " + " ".join(str(p) for p in self.finite_points))
        if self.degree is not None:
            parts.append(f"degree {self.degree}")
        if self.reduced_degree is not None and self.reduced_degree != self.degree:
            parts.append(f"reduced degree {self.reduced_degree}")
        if self.lines_checked:
            if self.line_components is None:
                parts.append("not a union of lines")
            else:
                parts.append(f"{len(self.line_components)} line(s)")
        if self.cubic_class is not None:
            if self.cubic_class.degenerate:
                parts.append("singular Hesse cubic")
            else:
                m = self.cubic_class.moduli
                parts.append(f"smooth Hesse cubic k={m.real:.9g}{m.imag:+.9g}i")
        return ", ".join(parts)

    def as_dict(self) -> dict:
        def pt(p):
            return [[[z.real, z.imag] for z in c] for c in p.coords]

        return {
            "ambient": list(self.ambient),
            "empty": self.empty,
            "full": self.full,
            "dimension": self.dimension,
            "degree": self.degree,
            "reduced_degree": self.reduced_degree,
            "finite_points": None if self.finite_points is None else [pt(p) for p in self.finite_points],
            "line_components": None if self.line_components is None else [
                {"coeffs": [[z.real, z.imag] for z in c.coeffs], "multiplicity": c.multiplicity}
                for c in self.line_components],
            "lines_checked": self.lines_checked,
            "cubic_class": None if self.cubic_class is None else self.cubic_class.as_dict(),
            "confidence": dict(self.confidence),
        }


def signature(L: DegeneratingLocus, seed=0, trials: int = 2) -> LocusSignature:
    rng = _rng(seed)
    conf = {"seed": seed if isinstance(seed, (int, np.integer)) else None, "trials": trials}
    if L.is_full:
        return LocusSignature(L.sizes, False, L.ambient_dim, full=True, degree=0, confidence=conf)
    exact = not L.sizes or (len(L.sizes) == 1 and L.sizes[0] == 2) or _single_linear(L) or len(L.minors) == 1
    if exact:
        dim = estimate_dimension(L, trials=trials, seed=rng)
        points = extract_finite_points(L, seed=rng, check=False) if dim == 0 and L.sizes else None
    else:
        # no slice of positive codimension meets the locus: it is finite, and
        # the point search itself decides emptiness
        dim = _positive_dimension(L, trials, rng)
        points = None
        if dim is None:
            points = extract_finite_points(L, seed=rng, check=False)
            dim = 0 if points else -1
    sig = LocusSignature(L.sizes, dim < 0, dim, confidence=conf)
    if dim == 0:
        sig.finite_points = points if points is not None else [ProjectivePoint(())]
    elif dim >= 1 and len(L.sizes) == 1 and dim == L.ambient_dim - 1:
        votes = Counter(_line_counts(L, rng) for _ in range(max(1, trials + 1)))
        sig.degree, sig.reduced_degree = votes.most_common(1)[0][0]
        if L.sizes[0] == 3 and len(L.minors) == 1:
            sig.lines_checked = True
            sig.line_components = detect_line_union(L, seed=rng)
            if sig.degree == 3:
                try:
                    sig.cubic_class = classify_plane_cubic(L.minors[0], L.tol)
                except UnsupportedShape:
                    sig.cubic_class = None
    return sig


def distinguishing_reason(s1: LocusSignature, s2: LocusSignature, tol: Tolerances | None = None) -> str | None:
    """First coarse invariant on which two signatures differ, or ``None``."""
    tol = resolve(tol)
    if tuple(s1.ambient) != tuple(s2.ambient):
        raise ValidationError(f"signatures live in different ambient spaces {s1.ambient} vs {s2.ambient}")
    if s1.empty != s2.empty:
        return f"emptiness differs ({'empty' if s1.empty else 'nonempty'} vs {'empty' if s2.empty else 'nonempty'})"
    if s1.dimension != s2.dimension:
        return f"dimension {s1.dimension} vs {s2.dimension}"
    if s1.finite_points is not None and s2.finite_points is not None \
            and len(s1.finite_points) != len(s2.finite_points):
        return f"finite point count {len(s1.finite_points)} vs {len(s2.finite_points)}"
    if s1.degree is not None and s2.degree is not None and s1.degree != s2.degree:
        return f"degree {s1.degree} vs {s2.degree}"
    if s1.reduced_degree is not None and s2.reduced_degree is not None \
            and s1.reduced_degree != s2.reduced_degree:
        return f"distinct line intersections {s1.reduced_degree} vs {s2.reduced_degree}"
    if s1.lines_checked and s2.lines_checked:
        n1 = None if s1.line_components is None else len(s1.line_components)
        n2 = None if s2.line_components is None else len(s2.line_components)
        if n1 != n2:
            f = lambda n: "no line decomposition" if n is None else f"{n} line component(s)"
            return f"{f(n1)} vs {f(n2)}"
    c1, c2 = s1.cubic_class, s2.cubic_class
    if c1 is not None and c2 is not None:
        if c1.degenerate != c2.degenerate:
            return "singular vs smooth cubic" if c1.degenerate else "smooth vs singular cubic"
        if not c1.degenerate and abs(c1.moduli - c2.moduli) > tol.moduli:
            return f"cubic moduli {c1.moduli:.9g} vs {c2.moduli:.9g}"
    return None


def signatures_distinguish(s1: LocusSignature, s2: LocusSignature, tol: Tolerances | None = None) -> bool:
    """True only when the two loci are certainly not projectively isomorphic."""
    return distinguishing_reason(s1, s2, tol) is not None
