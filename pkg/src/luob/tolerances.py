"""Numerical tolerances shared by every module, plus the package exception types."""
from __future__ import annotations

from dataclasses import dataclass, fields, replace


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


@dataclass(frozen=True)
class Tolerances:
    """Every threshold used by the library, in one immutable bundle.

    Operator-level checks (``herm``, ``unit``, ``orth``, ``norm``, ``prob``,
    ``rec``, ``psd``) are absolute or relative to the largest eigenvalue.
    ``rank`` is the relative singular-value cutoff used for numerical rank.
    The remaining fields govern the locus analysis.
    """

    herm: float = 1e-10
    unit: float = 1e-10
    orth: float = 1e-10
    norm: float = 1e-12
    prob: float = 1e-12
    rec: float = 1e-9
    psd: float = 1e-9
    rank: float = 1e-9
    coeff: float = 1e-12
    member: float = 1e-7
    point: float = 1e-6
    factor: float = 1e-7
    cubic: float = 1e-8
    moduli: float = 1e-6

    def with_overrides(self, **overrides: float) -> "Tolerances":
        names = {f.name for f in fields(self)}
        unknown = set(overrides) - names
        if unknown:
            raise ValidationError(f"unknown tolerance(s): {sorted(unknown)}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_TOL = Tolerances()


def resolve(tol: Tolerances | None) -> Tolerances:
    return DEFAULT_TOL if tol is None else tol
