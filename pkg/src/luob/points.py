"""Points of products of complex projective spaces."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tolerances import ValidationError

# coordinates below this modulus (on a unit-norm tuple) are treated as zero
# when choosing the phase reference
_PHASE_FLOOR = 1e-10


def canonical_tuple(x) -> np.ndarray:
    """Unit-norm representative whose first non-negligible coordinate is real positive.

    Idempotent bit for bit: an already canonical tuple is returned unchanged.
    """
    x = np.array(x, dtype=complex).reshape(-1)
    n = np.linalg.norm(x)
    if not np.isfinite(n) or n == 0:
        raise ValidationError("a projective point needs a nonzero finite coordinate tuple")
    if abs(n - 1.0) > 4e-16 * x.size:
        x = x / n
    big = np.flatnonzero(np.abs(x) > _PHASE_FLOOR)
    lead = x[big[0]] if big.size else x[np.argmax(np.abs(x))]
    if not (lead.imag == 0 and lead.real > 0):
        x = x * (abs(lead) / lead)
        i = big[0] if big.size else int(np.argmax(np.abs(x)))
        x[i] = abs(x[i])
    return x


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """One canonical coordinate tuple per variable group."""

    coords: tuple[np.ndarray, ...]

    def __post_init__(self):
        cs = []
        for c in self.coords:
            c = canonical_tuple(c)
            c.setflags(write=False)
            cs.append(c)
        object.__setattr__(self, "coords", tuple(cs))

    @classmethod
    def of(cls, *tuples) -> "ProjectivePoint":
        return cls(tuple(np.asarray(t, dtype=complex) for t in tuples))

    def canonical(self) -> "ProjectivePoint":
        return ProjectivePoint(self.coords)

    @property
    def ngroups(self) -> int:
        return len(self.coords)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.coords)

    def flat(self) -> np.ndarray:
        return np.concatenate(self.coords)

    def distance(self, other: "ProjectivePoint") -> float:
        """Largest per-group sine of the angle between the two lines (phase invariant)."""
        if self.sizes != other.sizes:
            raise ValidationError("points live in different ambient spaces")
        worst = 0.0
        for a, b in zip(self.coords, other.coords):
            # norm of the part of b orthogonal to a; avoids cancellation in sqrt(1 - cos^2)
            worst = max(worst, float(np.linalg.norm(b - np.vdot(a, b) * a)))
        return worst

    def same(self, other: "ProjectivePoint", tol: float = 1e-6) -> bool:
        return self.distance(other) <= tol

    def affine(self, group: int = 0, chart: int = -1) -> np.ndarray:
        """Coordinates of one group divided by its ``chart`` coordinate."""
        c = self.coords[group]
        return c / c[chart]

    def __repr__(self):
        def fmt(z):
            z = complex(np.round(z.real, 6) + 0.0, np.round(z.imag, 6) + 0.0)
            if z.imag == 0:
                return f"{z.real:g}"
            if z.real == 0:
                return f"{z.imag:g}i"
            return f"{z.real:g}{z.imag:+g}i"

        parts = []
        for c in self.coords:
            big = np.flatnonzero(np.abs(c) > _PHASE_FLOOR)
            ref = c[big[0]] if big.size else 1.0
            parts.append("(" + ":".join(fmt(z / ref) for z in c) + ")")
        return "x".join(parts)

    __str__ = __repr__


def dedup_points(points, tol: float = 1e-6) -> list[ProjectivePoint]:
    out: list[ProjectivePoint] = []
    for p in points:
        if not any(p.same(q, tol) for q in out):
            out.append(p)
    return out


def sort_points(points) -> list[ProjectivePoint]:
    """Deterministic order: by rounded real and imaginary parts of the flat coordinates."""
    def key(p):
        f = p.flat()
        return tuple(np.round(np.concatenate([f.real, f.imag]), 7))
    return sorted(points, key=key)
