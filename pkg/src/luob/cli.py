"""Command-line entry point: ``luob <command> [options]``.

Exit codes: 0 no obstruction detected (or success), 10 obstruction, 11
precondition failed, 1 failed self-test, 2 invalid input, 3 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import report as rpt
from .fixtures import FIXTURE_NAMES, Fixture, bell_subsets, load_fixture
from .hamfile import dumps_spec, read_spec, spec_document
from .locus import DegeneratingLocus, sample_points, signature
from .operators import HermitianOperator
from .pencil import pencil_from_operator
from .simcheck import (PRECONDITION_FAILED, _cut_plan, _column_dim, _sub_seed, corollary2_swap_check,
                       lu_invariance_selftest, theorem1_check, theorem2_check, theorem3_check)
from .tolerances import DEFAULT_TOL, Tolerances, ValidationError

EXIT_OK, EXIT_SELFTEST_FAILED, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3


@dataclass
class Operand:
    role: str
    name: str
    H: HermitianOperator
    notes: tuple[str, ...] = ()
    file_digest: str | None = None

    def describe(self) -> dict:
        d = {"role": self.role, "name": self.name, "sha256": rpt.operator_digest(self.H)}
        if self.file_digest:
            d["file_sha256"] = self.file_digest
        return d


def _default_seed() -> int:
    raw = os.environ.get("LUOB_SEED")
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"LUOB_SEED must be an integer, got {raw!r}") from None


def _tolerances(items) -> Tolerances:
    overrides = {}
    for item in items or ():
        name, eq, value = item.partition("=")
        if not eq:
            raise ValidationError(f"--tol expects name=value, got {item!r}")
        try:
            overrides[name.strip()] = float(value)
        except ValueError:
            raise ValidationError(f"--tol {name}: {value!r} is not a number") from None
    return DEFAULT_TOL.with_overrides(**overrides) if overrides else DEFAULT_TOL


def _from_file(path: str, role: str, tol: Tolerances) -> Operand:
    doc = read_spec(path, tol)
    return Operand(role, doc.name, doc.operator, tuple(doc.notes), doc.digest)


def _primary(args, tol) -> tuple[Operand, Operand | None]:
    """The operand(s) named by --input or --fixture; a fixture pair also yields H'."""
    if bool(args.input) == bool(args.fixture):
        raise ValidationError("give exactly one of --input or --fixture")
    if args.input:
        return _from_file(args.input, "H", tol), None
    fx: Fixture = load_fixture(args.fixture)
    H = Operand("H", fx.name, fx.H, fx.notes)
    Hp = Operand("H'", fx.name + "'", fx.Hprime, fx.notes) if fx.is_pair else None
    return H, Hp


def _pair(args, tol) -> tuple[Operand, Operand]:
    H, Hp = _primary(args, tol)
    if getattr(args, "prime", None):
        Hp = _from_file(args.prime, "H'", tol)
    elif getattr(args, "prime_fixture", None):
        fx = load_fixture(args.prime_fixture)
        Hp = Operand("H'", fx.name, fx.H, fx.notes)
    elif getattr(args, "self_compare", False):
        Hp = Operand("H'", H.name, H.H)
    if Hp is None:
        raise ValidationError("a second operator is needed: --prime, --prime-fixture, --self, or a paired fixture")
    return H, Hp


def _emit(text: str, output: str | None) -> None:
    if output:
        try:
            Path(output).write_text(text)
        except OSError as e:
            raise OSError(f"cannot write {output}: {e.strerror or e}") from e
    else:
        sys.stdout.write(text)


def _emit_comparison(args, command, operands, seed, tol, report) -> int:
    for op in operands:
        report.notes.extend(n for n in op.notes if n not in report.notes)
    doc = rpt.comparison_document(command, [o.describe() for o in operands], seed, tol, report)
    _emit(rpt.to_json(doc) if args.format == "json" else rpt.comparison_text(doc), args.output)
    return report.exit_code


def cmd_invariants(args, seed, tol) -> int:
    H, Hp = _primary(args, tol)
    ops = [H] + ([Hp] if Hp else [])
    shape = H.H.shape
    cuts = _cut_plan(shape, args.cut) if args.cut else _cut_plan(shape, None)
    if not cuts:
        raise ValidationError("no cut to analyse: a single party has no proper subsets")
    rows = []
    for ci, cut in enumerate(cuts):
        ks = range(_column_dim(shape, cut))
        if args.k is not None:
            if args.k < 0:
                raise ValidationError(f"k must be nonnegative, got {args.k}")
            ks = [args.k]
        for k in ks:
            for op in ops:
                L = DegeneratingLocus(pencil_from_operator(op.H, cut, tol), k, tol)
                sig = signature(L, seed=_sub_seed(seed, ci, k))
                rows.append(rpt.signature_row(op.role, shape.cut_label(cut), k, sig))
    notes = sorted({n for op in ops for n in op.notes})
    doc = rpt.invariants_document("invariants", [o.describe() for o in ops], seed, tol, rows, notes)
    _emit(rpt.to_json(doc) if args.format == "json" else rpt.invariants_text(doc), args.output)
    return EXIT_OK


def _run_theorem(which: str, H: Operand, Hp: Operand, seed, tol, cuts=None):
    bip = H.H.shape.nparties == 2
    if which == "auto":
        if not bip:
            return theorem3_check(H.H, Hp.H, cuts=cuts, seed=seed, tol=tol)
        rep = theorem1_check(H.H, Hp.H, seed=seed, tol=tol)
        if rep.verdict != PRECONDITION_FAILED:
            return rep
        alt = theorem2_check(H.H, Hp.H, seed=seed, tol=tol)
        alt.notes.insert(0, "ranks differ, so the full-Schmidt-rank test was used instead of the locus comparison")
        return alt
    if which == "1":
        return theorem1_check(H.H, Hp.H, seed=seed, tol=tol)
    if which == "2":
        return theorem2_check(H.H, Hp.H, seed=seed, tol=tol)
    return theorem3_check(H.H, Hp.H, cuts=cuts, seed=seed, tol=tol)


def cmd_compare(args, seed, tol) -> int:
    H, Hp = _pair(args, tol)
    rep = _run_theorem(args.theorem, H, Hp, seed, tol, args.cut)
    return _emit_comparison(args, "compare", [H, Hp], seed, tol, rep)


def cmd_theorem2(args, seed, tol) -> int:
    H, Hp = _pair(args, tol)
    return _emit_comparison(args, "theorem2", [H, Hp], seed, tol, _run_theorem("2", H, Hp, seed, tol))


def cmd_theorem3(args, seed, tol) -> int:
    H, Hp = _pair(args, tol)
    rep = _run_theorem("3", H, Hp, seed, tol, args.cut)
    return _emit_comparison(args, "theorem3", [H, Hp], seed, tol, rep)


def cmd_swapcheck(args, seed, tol) -> int:
    H, _ = _primary(args, tol)
    rep = corollary2_swap_check(H.H, seed=seed, tol=tol)
    return _emit_comparison(args, "swapcheck", [H], seed, tol, rep)


def cmd_selftest(args, seed, tol) -> int:
    H, _ = _primary(args, tol)
    if args.trials < 1:
        raise ValidationError("--trials must be at least 1")
    res = lu_invariance_selftest(H.H, trials=args.trials, seed=seed, tol=tol, samples=args.samples)
    lines = [f"selftest {H.name}: {args.trials} trial(s), seed {seed}"] + res.log
    lines.append("PASS" if res.passed else "FAIL")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if res.passed else EXIT_SELFTEST_FAILED


def cmd_examples(args, seed, tol) -> int:
    names = ["bell:" + ",".join(map(str, s)) for s in bell_subsets()]
    names += ["example1:0,0,0", "example1:0,0,3.14159265", "example2:2,3", "example3", "example4",
              "example5", "ghz-w", "phi+-product"]
    lines = ["fixture patterns: " + ", ".join(FIXTURE_NAMES)]
    for n in names:
        fx = load_fixture(n)
        lines.append(f"{n:26} dims {fx.H.dims}  {'pair' if fx.is_pair else 'single'}")
    if args.write:
        out = Path(args.write)
        try:
            out.mkdir(parents=True, exist_ok=True)
            for n in names:
                fx = load_fixture(n)
                stem = n.replace(":", "_").replace(",", "_").replace("+", "plus")
                (out / f"{stem}.ham").write_text(
                    dumps_spec(spec_document(name=fx.name, vectors=fx.vectors, weights=fx.weights or None)))
                if fx.is_pair:
                    (out / f"{stem}_prime.ham").write_text(dumps_spec(spec_document(
                        name=fx.name + "'", vectors=fx.vectors_prime, weights=fx.weights_prime or None)))
        except OSError as e:
            raise OSError(f"cannot write fixtures to {out}: {e.strerror or e}") from e
        lines.append(f"wrote .ham files to {out}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_plotdata(args, seed, tol) -> int:
    H, Hp = _primary(args, tol)
    op = Hp if args.prime and Hp is not None else H
    shape = op.H.shape
    cut = shape.parse_parties(args.cut)
    L = DegeneratingLocus(pencil_from_operator(op.H, cut, tol), args.k, tol)
    if L.is_full or len(L.sizes) != 1:
        raise ValidationError("plot data needs a proper locus in a single projective space")
    if args.count < 1:
        raise ValidationError("--count must be positive")
    pts = sample_points(L, count=args.count, seed=np.random.default_rng(seed))
    m = L.sizes[0]
    header = []
    for i in range(1, m):
        header += [f"re(r{i}/r{m})", f"im(r{i}/r{m})"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for p in pts:
        x = p.coords[0]
        if abs(x[-1]) < 1e-9:
            continue
        a = x[:-1] / x[-1]
        w.writerow([repr(float(v)) for z in a for v in (z.real, z.imag)])
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help=".ham file holding H")
    p.add_argument("--fixture", help="built-in fixture, e.g. example3, example1:0,0,3.14159265, bell:1,2")


def _add_common(p: argparse.ArgumentParser, fmt: bool = True) -> None:
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $LUOB_SEED or 0)")
    p.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a tolerance, repeatable")
    p.add_argument("--output", help="write to this file instead of stdout")
    if fmt:
        p.add_argument("--format", choices=("text", "json"), default="text")


def _add_prime(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prime", help=".ham file holding H'")
    p.add_argument("--prime-fixture", dest="prime_fixture", help="built-in fixture used as H'")
    p.add_argument("--self", dest="self_compare", action="store_true", help="compare H with itself")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="luob", description="Rank-locus obstructions to local-unitary "
                                 "simulation of bipartite and multipartite Hamiltonians.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="tabulate rank-locus signatures")
    _add_source(p)
    p.add_argument("--cut", "--side", dest="cut", action="append",
                   help="row parties, e.g. A, B or A:B (repeatable; default: every proper subset)")
    p.add_argument("--k", type=int, default=None, help="rank bound (default: every k)")
    _add_common(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("compare", help="test H' against the necessary conditions for H")
    _add_source(p)
    _add_prime(p)
    p.add_argument("--theorem", choices=("1", "2", "3", "auto"), default="auto")
    p.add_argument("--cut", action="append", help="restrict multipartite comparison to these cuts")
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("theorem2", help="full-Schmidt-rank test against a nonempty V_A^0(H')")
    _add_source(p)
    _add_prime(p)
    _add_common(p)
    p.set_defaults(func=cmd_theorem2)

    p = sub.add_parser("theorem3", help="compare loci over every party cut")
    _add_source(p)
    _add_prime(p)
    p.add_argument("--cut", action="append", help="restrict to these cuts")
    _add_common(p)
    p.set_defaults(func=cmd_theorem3)

    p = sub.add_parser("swapcheck", help="compare V_A^k(H) with V_B^k(H)")
    _add_source(p)
    _add_common(p)
    p.set_defaults(func=cmd_swapcheck)

    p = sub.add_parser("selftest", help="random local-unitary conjugates must pass every check")
    _add_source(p)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--samples", type=int, default=200, help="locus points checked per invariant")
    _add_common(p, fmt=False)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("examples", help="list built-in fixtures, optionally writing .ham files")
    p.add_argument("--write", metavar="DIR", help="directory for the .ham files")
    _add_common(p, fmt=False)
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("plotdata", help="CSV samples of a locus in affine coordinates")
    _add_source(p)
    p.add_argument("--cut", "--side", dest="cut", default="A")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--prime", action="store_true", help="sample H' of a paired fixture")
    _add_common(p, fmt=False)
    p.set_defaults(func=cmd_plotdata)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        seed = _default_seed() if args.seed is None else args.seed
        tol = _tolerances(args.tol)
        return args.func(args, seed, tol)
    except ValidationError as e:
        print(f"luob: error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"luob: error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
