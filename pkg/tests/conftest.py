"""Shared oracles (sympy and brute force) and the acceptance summary hook."""
from __future__ import annotations

import itertools

import numpy as np
import pytest
import sympy as sp

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(n: int, passed: bool, detail: str = "") -> None:
    ACCEPTANCE[n] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


# ------------------------------------------------------------------ sympy oracles

def symbolic_pencil(vectors, dims, rows):
    """Pencil matrix with symbolic row coordinates, built by explicit index loops.

    ``vectors`` are exact sympy amplitude lists in row-major basis order.
    Returns (matrix, list of per-group symbol lists).
    """
    cols = [p for p in range(len(dims)) if p not in rows]
    syms = [sp.symbols(f"r{g}_0:{dims[p]}") for g, p in enumerate(rows)]
    col_index = list(itertools.product(*[range(dims[p]) for p in cols]))
    M = sp.zeros(len(col_index), len(vectors))
    for l, v in enumerate(vectors):
        for idx in itertools.product(*[range(d) for d in dims]):
            amp = v[int(np.ravel_multi_index(idx, dims))]
            if amp == 0:
                continue
            mono = sp.Integer(1)
            for g, p in enumerate(rows):
                mono *= syms[g][idx[p]]
            c = col_index.index(tuple(idx[p] for p in cols))
            M[c, l] += amp * mono
    return M, syms


def symbolic_minors(M, k):
    out = []
    for rs in itertools.combinations(range(M.rows), k + 1):
        for cs in itertools.combinations(range(M.cols), k + 1):
            out.append(sp.expand(M.extract(list(rs), list(cs)).det()))
    return out


def sympy_terms(expr, variables) -> dict:
    if expr == 0:
        return {}
    return {m: complex(c) for m, c in sp.Poly(expr, *variables).terms()}


def grid_points_cp1(n: int = 200):
    """Affine chart values spread over a box plus the point at infinity, per CP^1 factor."""
    xs = np.arange(-(n // 2 - 1), n // 2) / ((n // 2 - 1) / 3)
    pts = [np.array([x, 1.0], dtype=complex) for x in xs]
    pts.append(np.array([1.0, 0.0], dtype=complex))
    return pts


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
