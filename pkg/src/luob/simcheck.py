"""Necessary conditions for local-unitary simulation, checked through rank-locus signatures.

Every checker returns a :class:`ComparisonReport`.  The only verdicts are
``OBSTRUCTION`` (the necessary condition fails, so ``H'`` cannot be written as
a convex combination of local-unitary conjugates of ``H``),
``NO_OBSTRUCTION_DETECTED`` and ``PRECONDITION_FAILED``.  Nothing here ever
claims that a simulation exists.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .cubic import UnsupportedShape, classify_plane_cubic
from .fixtures import example1
from .locus import (DegeneratingLocus, LocusSignature, distinguishing_reason, member_many,
                    sample_points, signature)
from .operators import (HermitianOperator, LocalUnitary, SpaceShape, apply_local_unitary,
                        max_schmidt_rank_in_range, operator_rank, random_local_unitary, schmidt_rank,
                        spectral_decompose)
from .pencil import pencil_from_operator
from .tolerances import Tolerances, ValidationError, resolve

OBSTRUCTION = "OBSTRUCTION"
NO_OBSTRUCTION = "NO_OBSTRUCTION_DETECTED"
PRECONDITION_FAILED = "PRECONDITION_FAILED"

EXIT_CODES = {NO_OBSTRUCTION: 0, OBSTRUCTION: 10, PRECONDITION_FAILED: 11}

# witness preference: the simplest differing invariant wins
_REASON_ORDER = ("emptiness", "dimension", "finite point count", "degree", "distinct line", "line",
                 "no line", "singular", "smooth", "cubic", "Schmidt")


def _reason_rank(reason: str) -> int:
    for i, key in enumerate(_REASON_ORDER):
        if reason.startswith(key) or key in reason.split(" vs ")[0]:
            return i
    return len(_REASON_ORDER)


@dataclass
class InvariantComparison:
    cut: tuple[int, ...]
    cut_label: str
    k: int
    signature_H: LocusSignature | None
    signature_Hprime: LocusSignature | None
    distinguished: bool
    reason: str | None = None

    def to_dict(self) -> dict:
        return {
            "cut": self.cut_label,
            "k": self.k,
            "signature_H": None if self.signature_H is None else self.signature_H.as_dict(),
            "signature_Hprime": None if self.signature_Hprime is None else self.signature_Hprime.as_dict(),
            "summary_H": None if self.signature_H is None else self.signature_H.summary(),
            "summary_Hprime": None if self.signature_Hprime is None else self.signature_Hprime.summary(),
            "distinguished": self.distinguished,
            "reason": self.reason,
        }


@dataclass
class ComparisonReport:
    check: str
    rank_H: int
    rank_Hprime: int
    trace_match: bool
    per_invariant: list[InvariantComparison] = field(default_factory=list)
    verdict: str = NO_OBSTRUCTION
    witness: tuple[str, int, str] | None = None
    notes: list[str] = field(default_factory=list)
    confidence: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def finalize(self) -> "ComparisonReport":
        """Set verdict and witness from the per-invariant table (unless a precondition failed)."""
        if self.verdict == PRECONDITION_FAILED:
            self.witness = None
            return self
        hits = [e for e in self.per_invariant if e.distinguished]
        if hits:
            best = min(enumerate(hits), key=lambda t: (_reason_rank(t[1].reason or ""), t[0]))[1]
            self.verdict = OBSTRUCTION
            self.witness = (best.cut_label, best.k, best.reason or "")
        else:
            self.verdict = NO_OBSTRUCTION
            self.witness = None
        return self

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "rank_H": self.rank_H,
            "rank_Hprime": self.rank_Hprime,
            "trace_match": self.trace_match,
            "verdict": self.verdict,
            "witness": None if self.witness is None else
            {"cut": self.witness[0], "k": self.witness[1], "reason": self.witness[2]},
            "per_invariant": [e.to_dict() for e in self.per_invariant],
            "notes": list(self.notes),
            "confidence": dict(self.confidence),
        }


def _sub_seed(seed: int, *labels: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *[int(x) for x in labels]]))


def _same_shape(H: HermitianOperator, Hp: HermitianOperator, bipartite: bool = False) -> SpaceShape:
    if H.dims != Hp.dims:
        raise ValidationError(f"operators live on different spaces {H.dims} vs {Hp.dims}")
    if not H.psd or not Hp.psd:
        raise ValidationError("both operators must be positive semidefinite")
    if bipartite and H.shape.nparties != 2:
        raise ValidationError(f"a bipartite operator is required, got dims {H.dims}")
    return H.shape


def _traces_match(H, Hp, tol: Tolerances) -> bool:
    return abs(H.trace() - Hp.trace()) <= 1e-10 * max(1.0, abs(H.trace())) + tol.norm


def _locus(H: HermitianOperator, cut, k: int, tol: Tolerances) -> DegeneratingLocus:
    return DegeneratingLocus(pencil_from_operator(H, cut, tol), k, tol)


def _cut_plan(shape: SpaceShape, cuts) -> list[tuple[int, ...]]:
    if cuts is None:
        eligible = [p for p in range(shape.nparties) if shape.dims[p] >= 2]
        out = []
        for r in range(1, shape.nparties):
            out.extend(c for c in combinations(range(shape.nparties), r) if set(c) <= set(eligible))
        return out
    return [shape.parse_parties(c) for c in cuts]


def _column_dim(shape: SpaceShape, cut) -> int:
    return int(np.prod([shape.dims[p] for p in shape.complement(cut)]))


def _compare_cuts(H, Hp, plan, seed, tol, report: ComparisonReport, cache_H: dict | None = None) -> None:
    shape = H.shape
    for ci, cut in enumerate(plan):
        for k in range(_column_dim(shape, cut)):
            key = (cut, k)
            if cache_H is not None and key in cache_H:
                sH = cache_H[key]
            else:
                sH = signature(_locus(H, cut, k, tol), seed=_sub_seed(seed, ci, k))
                if cache_H is not None:
                    cache_H[key] = sH
            sHp = signature(_locus(Hp, cut, k, tol), seed=_sub_seed(seed, ci, k))
            reason = distinguishing_reason(sH, sHp, tol)
            report.per_invariant.append(
                InvariantComparison(cut, shape.cut_label(cut), k, sH, sHp, reason is not None, reason))


def _rank_gate(H, Hp, tol, check: str) -> ComparisonReport:
    rH, rHp = operator_rank(H, tol), operator_rank(Hp, tol)
    report = ComparisonReport(check, rH, rHp, _traces_match(H, Hp, tol))
    if rH != rHp:
        report.verdict = PRECONDITION_FAILED
        report.notes.append(f"ranks differ ({rH} vs {rHp}); the locus comparison needs equal ranks")
    if rH == 1 and rHp == 1:
        v = spectral_decompose(H, tol).eigenvectors[0]
        vp = spectral_decompose(Hp, tol).eigenvectors[0]
        sr, srp = schmidt_rank(v, (0,), tol), schmidt_rank(vp, (0,), tol)
        if sr != srp:
            report.notes.append(f"both operators are rank one with Schmidt ranks {sr} vs {srp}; "
                                "local unitaries preserve the Schmidt rank of a pure state")
    return report


def theorem1_check(H: HermitianOperator, Hprime: HermitianOperator, seed: int = 0,
                   tol: Tolerances | None = None, _cache: dict | None = None) -> ComparisonReport:
    """Compare ``V_A^k`` (k < n) and ``V_B^k`` (k < m) of two bipartite operators."""
    tol = resolve(tol)
    shape = _same_shape(H, Hprime, bipartite=True)
    report = _rank_gate(H, Hprime, tol, "theorem1")
    report.confidence = {"seed": seed}
    if report.verdict == PRECONDITION_FAILED:
        return report
    _compare_cuts(H, Hprime, [(0,), (1,)], seed, tol, report, _cache)
    return report.finalize()


def theorem3_check(H: HermitianOperator, Hprime: HermitianOperator, cuts=None, seed: int = 0,
                   notes: Sequence[str] = (), tol: Tolerances | None = None,
                   _cache: dict | None = None) -> ComparisonReport:
    """Compare the rank loci over every proper party subset (or the given ``cuts``) and every k."""
    tol = resolve(tol)
    shape = _same_shape(H, Hprime)
    if shape.nparties < 2:
        raise ValidationError("at least two parties are needed")
    report = _rank_gate(H, Hprime, tol, "theorem3")
    report.notes.extend(notes)
    plan = _cut_plan(shape, cuts)
    report.confidence = {"seed": seed, "cuts": [shape.cut_label(c) for c in plan]}
    if report.verdict == PRECONDITION_FAILED:
        return report
    _compare_cuts(H, Hprime, plan, seed, tol, report, _cache)
    return report.finalize()


def corollary1_check(etas, etas_prime, seed: int = 0, tol: Tolerances | None = None) -> ComparisonReport:
    """Compare the Hesse-cubic classes of ``V_A^2`` for two members of the three-phase family."""
    tol = resolve(tol)
    H, Hp = example1(*etas).H, example1(*etas_prime).H
    report = ComparisonReport("corollary1", operator_rank(H, tol), operator_rank(Hp, tol),
                              _traces_match(H, Hp, tol), confidence={"seed": seed})
    L, Lp = _locus(H, (0,), 2, tol), _locus(Hp, (0,), 2, tol)
    sH = signature(L, seed=_sub_seed(seed, 0, 2))
    sHp = signature(Lp, seed=_sub_seed(seed, 0, 2))
    for s, l in ((sH, L), (sHp, Lp)):
        if s.cubic_class is None and l.minors:
            try:
                s.cubic_class = classify_plane_cubic(l.minors[0], tol)
            except UnsupportedShape:
                report.notes.append("a cubic is not of Hesse shape; only coarse invariants compared")
    c1, c2 = sH.cubic_class, sHp.cubic_class
    reason = None
    if c1 is not None and c2 is not None:
        if c1.degenerate != c2.degenerate:
            reason = "singular vs smooth cubic" if c1.degenerate else "smooth vs singular cubic"
        elif not c1.degenerate and abs(c1.moduli - c2.moduli) > tol.moduli:
            reason = f"cubic moduli {c1.moduli:.9g} vs {c2.moduli:.9g}"
    report.per_invariant.append(InvariantComparison((0,), "A", 2, sH, sHp, reason is not None, reason))
    return report.finalize()


def corollary2_swap_check(H: HermitianOperator, seed: int = 0, tol: Tolerances | None = None) -> ComparisonReport:
    """Compare ``V_A^k(H)`` with ``V_B^k(H)``; a difference rules out simulating ``S(H)`` by ``H``."""
    tol = resolve(tol)
    if H.shape.nparties != 2 or H.dims[0] != H.dims[1]:
        raise ValidationError(f"the swap check needs an n x n bipartite operator, got dims {H.dims}")
    r = operator_rank(H, tol)
    report = ComparisonReport("corollary2", r, r, True, confidence={"seed": seed})
    for k in range(H.dims[0]):
        g = _sub_seed(seed, 0, k)
        sA = signature(_locus(H, (0,), k, tol), seed=g)
        sB = signature(_locus(H, (1,), k, tol), seed=g)
        reason = distinguishing_reason(sA, sB, tol)
        report.per_invariant.append(InvariantComparison((0,), "A vs B", k, sA, sB, reason is not None, reason))
    return report.finalize()


def theorem2_check(H: HermitianOperator, Hprime: HermitianOperator, seed: int = 0,
                   tol: Tolerances | None = None, trials: int = 64) -> ComparisonReport:
    """Full Schmidt rank inside ``range(H)`` together with a nonempty ``V_A^0(H')`` is an obstruction."""
    tol = resolve(tol)
    shape = _same_shape(H, Hprime, bipartite=True)
    rH, rHp = operator_rank(H, tol), operator_rank(Hprime, tol)
    report = ComparisonReport("theorem2", rH, rHp, _traces_match(H, Hprime, tol),
                              confidence={"seed": seed, "schmidt_trials": trials,
                                          "note": "maximal Schmidt rank is generic in the range, "
                                                  "so a random combination misses it with probability zero"})
    target = min(shape.dims)
    if rH == 0:
        report.notes.append("H is zero; the Schmidt-rank hypothesis cannot hold")
        return report.finalize()
    msr = max_schmidt_rank_in_range(H, (0,), trials, seed, tol)
    sHp = signature(_locus(Hprime, (0,), 0, tol), seed=_sub_seed(seed, 0, 0))
    sH = signature(_locus(H, (0,), 0, tol), seed=_sub_seed(seed, 0, 0))
    report.confidence["max_schmidt_rank"] = msr
    hyp = msr == target
    hit = hyp and not sHp.empty
    if not hyp:
        report.notes.append(f"largest Schmidt rank found in range(H) is {msr} < {target}; hypothesis unmet")
    elif sHp.empty:
        report.notes.append("V_A^0(H') is empty; hypothesis unmet")
    reason = (f"Schmidt rank {msr} = min(m, n) in range(H) and V_A^0(H') nonempty" if hit else None)
    report.per_invariant.append(InvariantComparison((0,), "A", 0, sH, sHp, hit, reason))
    return report.finalize()


@dataclass
class SelftestResult:
    passed: bool
    log: list[str]

    def __bool__(self):
        return self.passed


def _covariance_failures(H, Hp, U: LocalUnitary, cut, k, tol, rng, samples: int, pts=None) -> int:
    """Sample points of ``V(H')`` and count those whose image under ``U_g^T`` leaves ``V(H)``."""
    Lp = _locus(Hp, cut, k, tol)
    L = _locus(H, cut, k, tol)
    if Lp.is_full:
        return 0
    if pts is None:
        pts = sample_points(Lp, count=samples, seed=rng)
    if not pts:
        return 0
    xs = [np.array([p.coords[g] for p in pts]) for g in range(len(cut))]
    mapped = [x @ U.factors[party] for x, party in zip(xs, cut)]
    mapped = [m / np.linalg.norm(m, axis=1, keepdims=True) for m in mapped]
    ok = member_many(L, mapped, threshold=1e-7)
    return int(np.sum(~ok))


def lu_invariance_selftest(H: HermitianOperator, trials: int = 10, seed: int = 0,
                           tol: Tolerances | None = None, samples: int = 200,
                           check_covariance: bool = True) -> SelftestResult:
    """Random single-term local-unitary conjugates must show no obstruction and map loci covariantly."""
    tol = resolve(tol)
    log: list[str] = []
    cache: dict = {}
    ok = True
    bip = H.shape.nparties == 2
    rng = np.random.default_rng(seed)
    for t in range(trials):
        U = random_local_unitary(H.shape, rng)
        Hp = apply_local_unitary(H, U)
        rep = (theorem1_check(H, Hp, seed=seed, tol=tol, _cache=cache) if bip
               else theorem3_check(H, Hp, seed=seed, tol=tol, _cache=cache))
        good = rep.verdict == NO_OBSTRUCTION
        msg = f"trial {t}: {rep.verdict}"
        if not good:
            msg += f" witness={rep.witness}"
        if check_covariance:
            bad = 0
            for e in rep.per_invariant:
                sp = e.signature_Hprime
                if sp is not None and not sp.empty and not sp.full and sp.dimension >= 0:
                    bad += _covariance_failures(H, Hp, U, e.cut, e.k, tol, rng, samples, sp.finite_points)
            msg += f", covariance failures {bad}"
            good = good and bad == 0
        ok = ok and good
        log.append(msg)
    return SelftestResult(ok, log)
