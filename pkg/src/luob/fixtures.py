"""Built-in Hamiltonians: Bell-state mixtures and the five worked examples.

Kets are written with 0-based indices, so ``|11>`` in the usual 1-based
notation is ``(0, 0)`` here.  Every fixture is a sum of projectors onto
explicitly listed generators; the generators are kept so that pencils can be
built from them directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .operators import HermitianOperator, PureStateVector
from .tolerances import ValidationError

S2 = 1 / math.sqrt(2)
S3 = 1 / math.sqrt(3)


@dataclass(frozen=True)
class Fixture:
    name: str
    H: HermitianOperator
    vectors: tuple[PureStateVector, ...]
    Hprime: HermitianOperator | None = None
    vectors_prime: tuple[PureStateVector, ...] = ()
    weights: tuple[float, ...] = ()
    weights_prime: tuple[float, ...] = ()
    notes: tuple[str, ...] = field(default=())

    @property
    def is_pair(self) -> bool:
        return self.Hprime is not None


def _ket(dims, kets: dict) -> PureStateVector:
    return PureStateVector.from_kets(dims, kets)


def _op(vectors, weights=None) -> HermitianOperator:
    return HermitianOperator.from_vectors(list(vectors), weights)


def bell_states() -> tuple[PureStateVector, ...]:
    d = (2, 2)
    return (
        _ket(d, {(0, 0): S2, (1, 1): S2}),
        _ket(d, {(0, 0): S2, (1, 1): -S2}),
        _ket(d, {(0, 1): S2, (1, 0): S2}),
        _ket(d, {(0, 1): S2, (1, 0): -S2}),
    )


def bell_subsets() -> list[tuple[int, ...]]:
    """All nonempty subsets of the four Bell states with at least two members (1-based labels)."""
    return [c for r in (2, 3, 4) for c in combinations((1, 2, 3, 4), r)]


def bell_subset(indices) -> Fixture:
    idx = tuple(int(i) for i in indices)
    if not idx or any(i not in (1, 2, 3, 4) for i in idx) or len(set(idx)) != len(idx):
        raise ValidationError(f"Bell subset must use distinct labels from 1..4, got {indices}")
    b = bell_states()
    vecs = tuple(b[i - 1] for i in idx)
    return Fixture("bell:" + ",".join(map(str, idx)), _op(vecs), vecs)


def example1(eta1: float = 0.0, eta2: float = 0.0, eta3: float = 0.0) -> Fixture:
    """Rank-3 family on 3x3 whose ``V_A^2`` is a Hesse cubic."""
    d = (3, 3)
    e = [complex(math.cos(t), math.sin(t)) for t in (eta1, eta2, eta3)]
    vecs = (
        _ket(d, {(0, 0): e[0] * S3, (1, 1): S3, (2, 2): S3}),
        _ket(d, {(0, 1): e[1] * S3, (1, 2): S3, (2, 0): S3}),
        _ket(d, {(0, 2): e[2] * S3, (1, 0): S3, (2, 1): S3}),
    )
    return Fixture(f"example1:{eta1:g},{eta2:g},{eta3:g}", _op(vecs), vecs)


def example2(v: complex = 2.0, lam: complex = 3.0) -> Fixture:
    """3x3 operator whose A-side and B-side rank-2 loci differ (3 lines vs 2 lines)."""
    if v == lam or v == 1 or lam == 1:
        raise ValidationError("example2 needs v != lambda and v, lambda != 1")
    d = (3, 3)
    nv, nl = math.sqrt(1 + abs(v) ** 2), math.sqrt(1 + abs(lam) ** 2)
    vecs = (
        _ket(d, {(0, 0): S3, (1, 0): S3, (2, 1): S3}),
        _ket(d, {(0, 1): 1 / nv, (1, 1): v / nv}),
        _ket(d, {(0, 2): 1 / nl, (1, 2): lam / nl}),
    )
    return Fixture(f"example2:{v:g},{lam:g}", _op(vecs), vecs)


def example3(w1: float = 1.0, w2: float = 1.0, w1p: float | None = None, w2p: float | None = None) -> Fixture:
    """Two rank-2 two-qubit operators; default weights give equal traces."""
    d = (2, 2)
    w1p = w1 if w1p is None else w1p
    w2p = w2 if w2p is None else w2p
    psi = (_ket(d, {(0, 0): S2, (1, 1): S2}), _ket(d, {(0, 0): S2, (1, 1): -S2}))
    psip = (_ket(d, {(0, 0): S2, (1, 1): S2}), _ket(d, {(0, 1): 1.0}))
    return Fixture("example3", _op(psi, [w1, w2]), psi, _op(psip, [w1p, w2p]), psip,
                   (w1, w2), (w1p, w2p))


def example4() -> Fixture:
    d = (3, 3)
    v = (_ket(d, {(0, 0): S3, (1, 1): S3, (2, 2): S3}),)
    u = (_ket(d, {(0, 0): S2, (1, 1): S2}), _ket(d, {(0, 0): S2, (1, 1): -S2}))
    notes = ("V_A^0(H') is a point of CP^2 (party A has dimension 3), not of CP^3.",)
    return Fixture("example4", _op(v), v, _op(u, [0.5, 0.5]), u, (1.0,), (0.5, 0.5), notes)


def example5() -> Fixture:
    """Rank-4 three-qubit pair distinguished by the ``A:B`` rank-1 locus."""
    d = (2, 2, 2)
    phi = (
        _ket(d, {(0, 1, 0): S2, (0, 1, 1): -S2}),
        _ket(d, {(1, 0, 0): S2, (1, 1, 0): -S2}),
        _ket(d, {(0, 0, 1): S2, (1, 0, 1): -S2}),
        _ket(d, {(0, 0, 0): S2, (1, 1, 1): -S2}),
    )
    phip = (
        _ket(d, {(0, 0, 0): S2, (1, 0, 0): -S2}),
        _ket(d, {(0, 0, 1): S2, (1, 0, 1): -S2}),
        _ket(d, {(0, 1, 0): S2, (1, 1, 0): -S2}),
        _ket(d, {(0, 1, 1): S2, (1, 1, 1): -S2}),
    )
    notes = (
        "Reference listing of V_{A:B}^1(H') names the point (1:1)x(0:1) twice; direct computation "
        "gives the curve {(1:1)} x CP^1, so the computed locus is reported instead.",
        "Reference description of V_{A:B}^1(H) as positive-dimensional is not reproduced: the 2x2 "
        "minors and a dense grid both give four isolated points.",
    )
    return Fixture("example5", _op(phi), phi, _op(phip), phip, notes=notes)


def ghz_w() -> Fixture:
    d = (2, 2, 2)
    ghz = (_ket(d, {(0, 0, 0): S2, (1, 1, 1): S2}),)
    w = (_ket(d, {(0, 0, 1): S3, (0, 1, 0): S3, (1, 0, 0): S3}),)
    return Fixture("ghz-w", _op(ghz), ghz, _op(w), w)


def phi_plus_vs_product() -> Fixture:
    d = (2, 2)
    phi = (_ket(d, {(0, 0): S2, (1, 1): S2}),)
    prod = (_ket(d, {(0, 0): 1.0}),)
    return Fixture("phi+-product", _op(phi), phi, _op(prod), prod)


FIXTURE_NAMES = ("bell:<i,j,...>", "example1:<eta1,eta2,eta3>", "example2:<v,lambda>", "example3",
                 "example4", "example5", "ghz-w", "phi+-product")


def _numbers(text: str, count: int, name: str) -> list[float]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ValidationError(f"fixture {name!r}: parameters must be numbers, got {text!r}") from None
    if len(vals) != count:
        raise ValidationError(f"fixture {name!r} takes {count} parameters, got {len(vals)}")
    return vals


def load_fixture(name: str) -> Fixture:
    """Resolve a fixture name such as ``example1:0,0,3.14159`` or ``bell:1,4``."""
    base, _, params = name.strip().partition(":")
    base = base.lower()
    if base == "bell":
        if not params:
            raise ValidationError("bell fixture needs a subset, e.g. bell:1,2")
        return bell_subset(int(x) for x in _numbers(params, len(params.split(",")), name))
    if base == "example1":
        return example1(*(_numbers(params, 3, name) if params else ()))
    if base == "example2":
        return example2(*(_numbers(params, 2, name) if params else ()))
    if params:
        raise ValidationError(f"fixture {base!r} takes no parameters")
    table = {"example3": example3, "example4": example4, "example5": example5, "ghz-w": ghz_w,
             "phi+-product": phi_plus_vs_product}
    if base not in table:
        raise ValidationError(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")
    return table[base]()


def fixture(name: str):
    """The operator, or the ``(H, H')`` pair, of a named fixture."""
    f = load_fixture(name)
    return (f.H, f.Hprime) if f.is_pair else f.H
