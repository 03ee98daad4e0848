"""``.ham`` Hamiltonian files: JSON documents with explicit ``[re, im]`` pairs.

Two equivalent forms are accepted::

    {"name": "bell2", "dims": [2, 2],
     "generators": [{"weight": 1.0, "amplitudes": [[0.7071, 0], [0, 0], ...]}, ...]}

    {"name": "zero", "dims": [2, 2], "dense": [[[0, 0], ...], ...]}

Amplitudes and dense rows use the row-major basis order ``|a_1 a_2 ... a_p>``
over the parties in the order given by ``dims`` (the last party varies
fastest).  Generator weights are positive and kept as written, so the
operator trace equals their sum.
"""
from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .operators import HermitianOperator, PureStateVector, SpaceShape
from .tolerances import Tolerances, ValidationError, resolve

NORM_SLACK = 1e-6
FORMAT_VERSION = 1


class LoadError(ValidationError):
    """A ``.ham`` document is malformed; the message names the field and, when known, the line."""

    def __init__(self, message: str, field_path: str | None = None, line: int | None = None):
        where = []
        if field_path:
            where.append(f"field {field_path}")
        if line:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.field_path = field_path
        self.line = line


@dataclass
class HamDocument:
    name: str
    operator: HermitianOperator
    vectors: list[PureStateVector] = field(default_factory=list)
    weights: list[float] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    digest: str = ""


def _line_of(text: str, key: str, occurrence: int = 0) -> int | None:
    hits = [m.start() for m in re.finditer(rf'"{re.escape(key)}"\s*:', text)]
    if occurrence < len(hits):
        return text.count("\n", 0, hits[occurrence]) + 1
    return None


def _complex_list(raw, path: str, text: str, key: str, occ: int) -> np.ndarray:
    if not isinstance(raw, list):
        raise LoadError("expected a list of [re, im] pairs", path, _line_of(text, key, occ))
    out = np.empty(len(raw), dtype=complex)
    for i, z in enumerate(raw):
        if (not isinstance(z, list) or len(z) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)):
            raise LoadError(f"entry {i} is not an [re, im] pair of numbers", path, _line_of(text, key, occ))
        out[i] = complex(z[0], z[1])
    if not np.all(np.isfinite(out)):
        raise LoadError("non-finite amplitude", path, _line_of(text, key, occ))
    return out


def parse_spec(text: str, tol: Tolerances | None = None, source: str = "<string>") -> HamDocument:
    tol = resolve(tol)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise LoadError(f"{source}: invalid JSON: {e.msg}", None, e.lineno) from None
    if not isinstance(doc, dict):
        raise LoadError(f"{source}: top level must be an object")
    dims = doc.get("dims")
    if (not isinstance(dims, list) or not dims
            or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in dims)):
        raise LoadError("dims must be a nonempty list of positive integers", "dims", _line_of(text, "dims"))
    shape = SpaceShape(tuple(dims))
    name = str(doc.get("name", Path(source).stem))
    has_gen, has_dense = "generators" in doc, "dense" in doc
    if has_gen == has_dense:
        raise LoadError("exactly one of 'generators' or 'dense' must be present")
    digest = hashlib.sha256(text.encode()).hexdigest()
    notes: list[str] = []
    if has_dense:
        rows = doc["dense"]
        if not isinstance(rows, list) or len(rows) != shape.total:
            raise LoadError(f"dense matrix needs {shape.total} rows", "dense", _line_of(text, "dense"))
        m = np.empty((shape.total, shape.total), dtype=complex)
        for i, r in enumerate(rows):
            if not isinstance(r, list) or len(r) != shape.total:
                raise LoadError(f"row {i} must hold {shape.total} entries", f"dense[{i}]", _line_of(text, "dense"))
            m[i] = _complex_list(r, f"dense[{i}]", text, "dense", 0)
        try:
            H = HermitianOperator(m, shape, True, tol)
        except ValidationError as e:
            raise LoadError(str(e), "dense", _line_of(text, "dense")) from None
        return HamDocument(name, H, notes=notes, digest=digest)
    gens = doc["generators"]
    if not isinstance(gens, list) or not gens:
        raise LoadError("generators must be a nonempty list", "generators", _line_of(text, "generators"))
    vecs, weights = [], []
    for i, g in enumerate(gens):
        path = f"generators[{i}]"
        if not isinstance(g, dict):
            raise LoadError("generator must be an object", path, _line_of(text, "amplitudes", i))
        w = g.get("weight", 1.0)
        if not isinstance(w, (int, float)) or isinstance(w, bool) or not np.isfinite(w) or w <= 0:
            raise LoadError(f"weight must be a positive number, got {w!r}", path + ".weight",
                            _line_of(text, "weight", i))
        amps = _complex_list(g.get("amplitudes"), path + ".amplitudes", text, "amplitudes", i)
        if amps.size != shape.total:
            raise LoadError(f"expected {shape.total} amplitudes, got {amps.size}", path + ".amplitudes",
                            _line_of(text, "amplitudes", i))
        n = np.linalg.norm(amps)
        if abs(n - 1) > NORM_SLACK:
            raise LoadError(f"amplitude vector has norm {n:.9g}, expected 1", path + ".amplitudes",
                            _line_of(text, "amplitudes", i))
        vecs.append(PureStateVector(amps / n, shape, tol))
        weights.append(float(w))
    H = HermitianOperator.from_vectors(vecs, weights, shape, tol)
    return HamDocument(name, H, vecs, weights, notes, digest)


def read_spec(path, tol: Tolerances | None = None) -> HamDocument:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise OSError(f"cannot read {p}: {e.strerror or e}") from e
    return parse_spec(text, tol, str(p))


def load_spec(path, tol: Tolerances | None = None) -> HermitianOperator:
    return read_spec(path, tol).operator


def _pairs(v) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v).reshape(-1)]


def spec_document(H: HermitianOperator | None = None, name: str = "operator", vectors=None,
                  weights=None, dims=None) -> dict:
    """The JSON object for an operator (dense form) or for a generator list."""
    if vectors is not None:
        vecs = [v.amplitudes if isinstance(v, PureStateVector) else np.asarray(v) for v in vectors]
        if dims is None:
            dims = vectors[0].shape.dims if isinstance(vectors[0], PureStateVector) else H.dims
        weights = [1.0] * len(vecs) if weights is None else [float(w) for w in weights]
        return {"name": name, "dims": list(dims), "format": FORMAT_VERSION,
                "generators": [{"weight": w, "amplitudes": _pairs(v)} for w, v in zip(weights, vecs)]}
    if H is None:
        raise ValidationError("either an operator or a generator list is required")
    return {"name": name, "dims": list(H.dims), "format": FORMAT_VERSION,
            "dense": [_pairs(row) for row in H.matrix]}


def dumps_spec(doc: dict) -> str:
    """Compact enough to diff: one generator or matrix row per line."""
    head = {k: v for k, v in doc.items() if k not in ("generators", "dense")}
    lines = ["{"] + [f"  {json.dumps(k)}: {json.dumps(v)}," for k, v in head.items()]
    if "generators" in doc:
        lines.append('  "generators": [')
        body = [f'    {{"weight": {json.dumps(g["weight"])}, "amplitudes": {json.dumps(g["amplitudes"])}}}'
                for g in doc["generators"]]
    else:
        lines.append('  "dense": [')
        body = [f"    {json.dumps(r)}" for r in doc["dense"]]
    lines.append(",\n".join(body))
    lines += ["  ]", "}"]
    return "\n".join(lines) + "\n"


def save_spec(path, H: HermitianOperator | None = None, name: str = "operator", vectors=None,
              weights=None) -> None:
    doc = spec_document(H, name, vectors, weights)
    try:
        Path(path).write_text(dumps_spec(doc))
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e
