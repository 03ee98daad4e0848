"""Deterministic report documents (JSON and plain text) for the command-line tool."""
from __future__ import annotations

import hashlib
import json
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from .locus import LocusSignature
from .operators import HermitianOperator
from .simcheck import ComparisonReport
from .tolerances import Tolerances


def tool_version() -> str:
    try:
        return version("luob")
    except PackageNotFoundError:
        return "0+unknown"


def operator_digest(H: HermitianOperator) -> str:
    """SHA-256 of the dims and the little-endian complex128 matrix bytes."""
    h = hashlib.sha256(repr(H.dims).encode())
    h.update(np.ascontiguousarray(H.matrix, dtype="<c16").tobytes())
    return h.hexdigest()


def _clean(x):
    """JSON-safe copy: numpy scalars to Python, complex to [re, im], tuples to lists."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    return x


def base_document(command: str, inputs: list[dict], seed: int, tol: Tolerances) -> dict:
    return {
        "tool": "luob",
        "version": tool_version(),
        "command": command,
        "inputs": inputs,
        "seed": seed,
        "tolerances": tol.as_dict(),
    }


def comparison_document(command: str, inputs: list[dict], seed: int, tol: Tolerances,
                        report: ComparisonReport) -> dict:
    doc = base_document(command, inputs, seed, tol)
    doc.update(report.to_dict())
    return _clean(doc)


def invariants_document(command: str, inputs: list[dict], seed: int, tol: Tolerances,
                        rows: list[dict], notes: list[str]) -> dict:
    doc = base_document(command, inputs, seed, tol)
    doc["invariants"] = rows
    doc["notes"] = notes
    return _clean(doc)


def signature_row(operator: str, cut: str, k: int, sig: LocusSignature) -> dict:
    return {"operator": operator, "cut": cut, "k": k, "summary": sig.summary(), "signature": sig.as_dict()}


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _header(doc: dict) -> list[str]:
    lines = [f"luob {doc['version']} {doc['command']}"]
    for inp in doc["inputs"]:
        lines.append(f"input {inp['role']}: {inp['name']} sha256={inp['sha256'][:16]}")
    tol = ", ".join(f"{k}={v:g}" for k, v in sorted(doc["tolerances"].items()))
    lines.append(f"seed {doc['seed']}; tolerances {tol}")
    return lines


def comparison_text(doc: dict) -> str:
    lines = _header(doc)
    lines.append(f"rank(H) = {doc['rank_H']}, rank(H') = {doc['rank_Hprime']}, "
                 f"traces {'match' if doc['trace_match'] else 'differ'}")
    if doc["per_invariant"]:
        w = max(len(e["cut"]) for e in doc["per_invariant"])
        lines.append(f"{'cut'.ljust(w)}  k  {'differs':7}  H | H'")
        for e in doc["per_invariant"]:
            mark = "yes" if e["distinguished"] else "no"
            lines.append(f"{e['cut'].ljust(w)}  {e['k']}  {mark:7}  {e['summary_H']} | {e['summary_Hprime']}")
    lines.append(f"verdict: {doc['verdict']}")
    if doc["witness"]:
        wt = doc["witness"]
        lines.append(f"witness: cut {wt['cut']}, k={wt['k']}: {wt['reason']}")
    for n in doc["notes"]:
        lines.append(f"note: {n}")
    for k in sorted(doc.get("confidence", {})):
        lines.append(f"confidence {k}: {doc['confidence'][k]}")
    return "\n".join(lines) + "\n"


def invariants_text(doc: dict) -> str:
    lines = _header(doc)
    rows = doc["invariants"]
    if rows:
        w = max(len(r["cut"]) for r in rows)
        lines.append(f"{'op':3}  {'cut'.ljust(w)}  k  locus")
        for r in rows:
            lines.append(f"{r['operator']:3}  {r['cut'].ljust(w)}  {r['k']}  {r['summary']}")
    for n in doc["notes"]:
        lines.append(f"note: {n}")
    return "\n".join(lines) + "\n"
