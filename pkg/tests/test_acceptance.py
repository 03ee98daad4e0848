"""Acceptance criteria 1-9.  Each test records a PASS/FAIL line shown in the pytest summary.

Run alone with ``python3 -m pytest tests/test_acceptance.py -v``.
"""
from __future__ import annotations

import numpy as np
import pytest
import sympy as sp

from conftest import grid_points_cp1, record, symbolic_minors, symbolic_pencil
from luob.cubic import classify_plane_cubic, g_of_etas
from luob.fixtures import (bell_subset, bell_subsets, example1, example2, example3, example4, example5)
from luob.locus import (DegeneratingLocus, detect_line_union, distinguishing_reason, estimate_degree,
                        estimate_dimension, extract_finite_points, is_empty, max_minor_modulus, member_many,
                        sample_points, signature)
from luob.operators import (HermitianOperator, lu_mixture, max_schmidt_rank_in_range, operator_rank,
                            random_local_unitary)
from luob.pencil import pencil_from_operator
from luob.points import ProjectivePoint
from luob.polynomial import HomogeneousPolynomial
from luob.simcheck import (NO_OBSTRUCTION, OBSTRUCTION, corollary1_check, corollary2_swap_check,
                           lu_invariance_selftest, theorem1_check, theorem2_check, theorem3_check)


def locus(H, cut, k):
    return DegeneratingLocus(pencil_from_operator(H, cut), k)


def finish(n: int, checks: list[tuple[str, bool]]) -> None:
    failed = [name for name, ok in checks if not ok]
    detail = "all clauses hold" if not failed else "failed: " + "; ".join(failed)
    record(n, not failed, detail)
    print(f"criterion {n}: {'PASS' if not failed else 'FAIL'}  {detail}")
    assert not failed, detail


def same_set(got, expected, tol=1e-6) -> bool:
    return len(got) == len(expected) and all(any(g.same(e, tol) for g in got) for e in expected)


# ---------------------------------------------------------------- 1
def test_criterion_1_bell_loci():
    checks = []
    for subset in bell_subsets():
        H = bell_subset(subset).H
        L1, L0 = locus(H, "A", 1), locus(H, "A", 0)
        if len(subset) == 2:
            pts = extract_finite_points(L1)
            checks.append((f"{subset}: 2 points", len(pts) == 2))
            checks.append((f"{subset}: residual <= 1e-7", all(max_minor_modulus(L1, p) <= 1e-7 for p in pts)))
        else:
            checks.append((f"{subset}: V_A^1 empty", is_empty(L1)))
        checks.append((f"{subset}: V_A^0 empty", is_empty(L0)))
    finish(1, checks)


# ---------------------------------------------------------------- 2
def _product_remainder(q: HomogeneousPolynomial, forms) -> float:
    """Relative least-squares remainder of q against c * (product of forms)."""
    prod = forms[0]
    for f in forms[1:]:
        prod = prod * f
    keys = sorted(set(q.terms) | set(prod.terms))
    a = np.array([prod.coefficient(e) for e in keys])
    b = np.array([q.coefficient(e) for e in keys])
    c = np.vdot(a, b) / np.vdot(a, a)
    return float(np.linalg.norm(b - c * a) / np.linalg.norm(b))


def test_criterion_2_hesse_family():
    checks = [("g(0,0,0) = 3", abs(g_of_etas(0, 0, 0) - 3) <= 1e-12)]
    L0 = locus(example1(0, 0, 0).H, "A", 2)
    Lpi = locus(example1(0, 0, np.pi).H, "A", 2)
    checks.append(("(0,0,0) degenerate", classify_plane_cubic(L0.minors[0]).degenerate))
    checks.append(("(0,0,pi) smooth", not classify_plane_cubic(Lpi.minors[0]).degenerate))
    comps = detect_line_union(L0)
    ok = comps is not None and len(comps) == 3
    checks.append(("three linear factors", ok))
    if ok:
        forms = [HomogeneousPolynomial.linear_form(L0.minors[0].groups, 0, c.coeffs) for c in comps]
        checks.append(("division remainder <= 1e-7", _product_remainder(L0.minors[0], forms) <= 1e-7))
    checks.append(("corollary1 obstruction", corollary1_check((0, 0, 0), (0, 0, np.pi)).verdict == OBSTRUCTION))
    finish(2, checks)


# ---------------------------------------------------------------- 3
def test_criterion_3_example2_lines():
    H = example2(2, 3).H
    comps = detect_line_union(locus(H, "A", 2)) or []
    expected = [np.array([1, c, 0], dtype=complex) for c in (1, 2, 3)]

    def match(u, v):
        u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
        return abs(abs(np.vdot(u, v)) - 1) <= 1e-6 and np.linalg.norm(u - np.vdot(v, u) * v) <= 1e-6

    checks = [("A side: 3 lines", len(comps) == 3)]
    checks.append(("A side: r1+r2, r1+2r2, r1+3r2",
                   all(any(match(c.coeffs, e) for c in comps) for e in expected)))
    LB = locus(H, "B", 2)
    compsB = detect_line_union(LB) or []
    checks.append(("B side: 2 distinct components", len(compsB) == 2 and estimate_degree(LB, distinct=True) == 2))
    checks.append(("swap check obstruction", corollary2_swap_check(H).verdict == OBSTRUCTION))
    finish(3, checks)


# ---------------------------------------------------------------- 4
def test_criterion_4_example3():
    fx = example3()
    p10, p01 = ProjectivePoint.of([1, 0]), ProjectivePoint.of([0, 1])
    checks = [("V_A^1(H) = {(1:0),(0:1)}", same_set(extract_finite_points(locus(fx.H, "A", 1)), [p10, p01])),
              ("V_A^1(H') = {(0:1)}", same_set(extract_finite_points(locus(fx.Hprime, "A", 1)), [p01]))]
    rep = theorem1_check(fx.H, fx.Hprime)
    checks.append(("theorem1 obstruction", rep.verdict == OBSTRUCTION))
    checks.append(("witness on A at k=1", rep.witness is not None and rep.witness[:2] == ("A", 1)))
    finish(4, checks)


# ---------------------------------------------------------------- 5
def test_criterion_5_example4():
    fx = example4()
    pts = extract_finite_points(locus(fx.Hprime, "A", 0))
    checks = [("max Schmidt rank in range(H) = 3", max_schmidt_rank_in_range(fx.H) == 3),
              ("V_A^0(H') = {(0:0:1)}", same_set(pts, [ProjectivePoint.of([0, 0, 1])])),
              ("theorem2 obstruction", theorem2_check(fx.H, fx.Hprime).verdict == OBSTRUCTION)]
    finish(5, checks)


# ---------------------------------------------------------------- 6
def _grid_hits(vectors):
    """Brute-force rank test of the A:B pencil over a 200 x 200 chart grid (one per CP^1 factor)."""
    grid = np.array(grid_points_cp1(200))
    T = np.array([v.amplitudes.reshape(2, 2, 2) for v in vectors])  # (l, a, b, c)
    # M[i, j, c, l] = sum_ab grid[i, a] grid[j, b] T[l, a, b, c]
    M = np.einsum("ia,jb,labc->ijcl", grid, grid, T)
    sv = np.linalg.svd(M, compute_uv=False)
    scale = np.linalg.norm(T)
    norms = np.linalg.norm(grid, axis=1)
    rel = sv[..., 1] / (scale * norms[:, None] * norms[None, :])
    return np.argwhere(rel <= 1e-9), grid


def test_criterion_6_example5():
    fx = example5()
    checks = [("both rank 4", operator_rank(fx.H) == 4 and operator_rank(fx.Hprime) == 4)]
    L, Lp = locus(fx.H, "A:B", 1), locus(fx.Hprime, "A:B", 1)
    dim_H = estimate_dimension(L)
    checks.append((f"dim V_A:B^1(H) >= 1 (computed {dim_H})", dim_H >= 1))

    sp_ = signature(Lp)
    hits, grid = _grid_hits(fx.vectors_prime)
    a_line = ProjectivePoint.of([1, 1])
    on_line = all(ProjectivePoint.of(grid[i]).same(a_line) for i, _ in hits)
    checks.append(("H' grid oracle: the line {(1:1)} x CP^1", len(hits) == 200 and on_line))
    checks.append(("H' signature dimension 1 agrees with grid", sp_.dimension == 1 and not sp_.empty))
    members = member_many(Lp, [grid[hits[:, 0]], grid[hits[:, 1]]])
    checks.append(("grid hits are library members", bool(members.all())))

    # the same oracle on H, for the record: it sees only isolated points
    hits_H, _ = _grid_hits(fx.vectors)
    grid_pts = [ProjectivePoint.of(grid[i], grid[j]) for i, j in hits_H]
    checks.append(("H grid oracle agrees with extracted points",
                   same_set(extract_finite_points(L, check=False), grid_pts)))

    rep = theorem3_check(fx.H, fx.Hprime, notes=fx.notes)
    checks.append(("theorem3 obstruction", rep.verdict == OBSTRUCTION))
    checks.append(("duplicate-listing note", any("twice" in n for n in rep.notes)))
    finish(6, checks)


# ---------------------------------------------------------------- 7
@pytest.mark.parametrize("name", ["example1(0,0,0)", "example1(0,0,pi)", "example3", "example5"])
def test_criterion_7_lu_invariance(name):
    H = {"example1(0,0,0)": lambda: example1(0, 0, 0).H, "example1(0,0,pi)": lambda: example1(0, 0, np.pi).H,
         "example3": lambda: example3().H, "example5": lambda: example5().H}[name]()
    res = lu_invariance_selftest(H, trials=20, seed=2024, samples=200)
    _CRIT7[name] = (res.passed, [l for l in res.log if "OBSTRUCTION " in l or "failures 0" not in l])
    if len(_CRIT7) == 4:
        finish(7, [(f"{k}: 20 conjugations clean", ok) for k, (ok, _) in sorted(_CRIT7.items())])
    assert res.passed, _CRIT7[name][1]


_CRIT7: dict = {}


# ---------------------------------------------------------------- 8
def _oracle_loci():
    f3, f4, f5 = example3(), example4(), example5()
    out = [(f"bell{s}", bell_subset(s).vectors, "A", 1) for s in [(1, 2), (3, 4)]]
    out += [("ex1(0,0,0) k=2", example1(0, 0, 0).vectors, "A", 2),
            ("ex1(0,0,0) k=1", example1(0, 0, 0).vectors, "A", 1),
            ("ex1(0,0,pi) k=2", example1(0, 0, np.pi).vectors, "A", 2),
            ("ex2 A k=2", example2().vectors, "A", 2),
            ("ex2 B k=2", example2().vectors, "B", 2),
            ("ex3 H", f3.vectors, "A", 1), ("ex3 H'", f3.vectors_prime, "A", 1),
            ("ex4 H'", f4.vectors_prime, "A", 0),
            ("ex5 H", f5.vectors, "A:B", 1), ("ex5 H'", f5.vectors_prime, "A:B", 1)]
    return out


def _symbolic_membership(vectors, rows, k):
    dims = vectors[0].shape.dims
    exact = [[sp.nsimplify(complex(z).real, rational=False) + sp.I * sp.nsimplify(complex(z).imag, rational=False)
              for z in v.amplitudes] for v in vectors]
    M, syms = symbolic_pencil(exact, dims, rows)
    minors = [m for m in symbolic_minors(M, k) if m != 0]
    flat = [s for g in syms for s in g]
    f = sp.lambdify(flat, minors, "numpy")
    bound = max(sum(abs(complex(c)) for c in sp.Poly(m, *flat).coeffs()) for m in minors)

    def test(xs):
        vals = np.array(f(*[xs[:, i] for i in range(xs.shape[1])]), dtype=complex).reshape(len(minors), -1)
        return np.max(np.abs(vals), axis=0) <= 1e-7 * bound

    return test


def _test_points(L, rng, n=1000):
    """Half on the locus (sampled or extracted, randomly rescaled), a quarter nudged off it, a quarter generic."""
    on = sample_points(L, count=min(n // 2, 200), seed=rng)
    base = [np.concatenate(p.coords) for p in on]
    sizes = L.sizes
    X = []
    for i in range(n // 2):
        X.append(base[i % len(base)] * np.exp(1j * rng.uniform(0, 6.3)) * rng.uniform(0.5, 2))
    for i in range(n // 4):
        x = base[i % len(base)] + 1e-2 * (rng.standard_normal(sum(sizes)) + 1j * rng.standard_normal(sum(sizes)))
        X.append(x)
    while len(X) < n:
        X.append(rng.standard_normal(sum(sizes)) + 1j * rng.standard_normal(sum(sizes)))
    X = np.array(X)
    parts, off = [], 0
    for s in sizes:
        blk = X[:, off:off + s]
        parts.append(blk / np.linalg.norm(blk, axis=1, keepdims=True))
        off += s
    return np.concatenate(parts, axis=1), parts


def test_criterion_8_oracle_equivalence():
    rng = np.random.default_rng(8)
    checks = []
    for name, vecs, cut, k in _oracle_loci():
        H = HermitianOperator.from_vectors(list(vecs))
        L = locus(H, cut, k)
        rows = H.shape.parse_parties(cut)
        sym = _symbolic_membership(vecs, rows, k)
        flat, parts = _test_points(L, rng)
        num = member_many(L, parts)
        bad = int(np.sum(sym(flat) != num))
        checks.append((f"{name}: {bad} disagreements in 1000", bad == 0 and num.any() and not num.all()))
        w = rng.uniform(0.1, 5.0, len(vecs))
        Hw = HermitianOperator.from_vectors(list(vecs), w)
        reason = distinguishing_reason(signature(L, seed=1), signature(locus(Hw, cut, k), seed=1))
        checks.append((f"{name}: weight independent", reason is None))
    finish(8, checks)


# ---------------------------------------------------------------- 9
def test_criterion_9_mixtures():
    rng = np.random.default_rng(9)
    worst_tr, worst_psd = 0.0, 0.0
    for dims in [(2, 2), (3, 3)]:
        n = int(np.prod(dims))
        for _ in range(50):
            r = rng.integers(1, n + 1)
            v = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
            H = HermitianOperator(v @ v.conj().T, dims)
            m = int(rng.integers(1, 6))
            w = rng.random(m) + 1e-3
            w /= w.sum()
            mix = lu_mixture(H, [(float(p), random_local_unitary(dims, rng)) for p in w])
            worst_tr = max(worst_tr, abs(mix.trace() - H.trace()) / H.trace())
            ev = np.linalg.eigvalsh(mix.matrix)
            worst_psd = max(worst_psd, -ev[0] / ev[-1])
    finish(9, [(f"trace relative error {worst_tr:.1e} <= 1e-10", worst_tr <= 1e-10),
               (f"min eigenvalue ratio {-worst_psd:.1e} >= -1e-9", worst_psd <= 1e-9)])


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
