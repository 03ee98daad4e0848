"""Hesse-pencil plane cubics ``r1^3 + r2^3 + r3^3 - g r1 r2 r3`` and their moduli."""
from __future__ import annotations

import cmath
from dataclasses import dataclass

from .polynomial import HomogeneousPolynomial
from .tolerances import Tolerances, ValidationError, resolve


class UnsupportedShape(ValidationError):
    """The cubic is not (a diagonal rescaling of) a Hesse-pencil member."""


class _Pole:
    def __repr__(self):
        return "POLE"

    def __reduce__(self):
        return "POLE"


POLE = _Pole()


def g_of_etas(eta1: float, eta2: float, eta3: float) -> complex:
    """``(e^{i eta1} + e^{i eta2} + e^{i eta3}) / e^{i (eta1 + eta2 + eta3) / 3}``."""
    num = cmath.exp(1j * eta1) + cmath.exp(1j * eta2) + cmath.exp(1j * eta3)
    return num / cmath.exp(1j * (eta1 + eta2 + eta3) / 3)


def moduli_k(x: complex, tol: Tolerances | None = None):
    """``x^3 (x^3 + 216)^3 / (27 - x^3)^3``, or :data:`POLE` when ``|x^3 - 27| <= cubic``."""
    tol = resolve(tol)
    x3 = complex(x) ** 3
    if abs(x3 - 27) <= tol.cubic:
        return POLE
    return x3 * (x3 + 216) ** 3 / (27 - x3) ** 3


@dataclass(frozen=True)
class PlaneCubicClass:
    g: complex
    degenerate: bool
    moduli: complex | None

    def as_dict(self) -> dict:
        return {
            "g": [self.g.real, self.g.imag],
            "degenerate": self.degenerate,
            "moduli": None if self.moduli is None else [self.moduli.real, self.moduli.imag],
        }


def classify_plane_cubic(q: HomogeneousPolynomial, tol: Tolerances | None = None) -> PlaneCubicClass:
    """Classify ``a r1^3 + b r2^3 + c r3^3 + e r1 r2 r3``.

    Rescaling each variable by a cube root of its cube coefficient gives the
    Hesse form with ``g^3 = -e^3 / (a b c)``; the moduli function depends on
    ``g^3`` only, so the cube-root branch is immaterial.
    """
    tol = resolve(tol)
    if q.nvars != 3 or len(q.groups) != 1 or q.degree != 3:
        raise UnsupportedShape("expected a ternary cubic form")
    allowed = {(3, 0, 0), (0, 3, 0), (0, 0, 3), (1, 1, 1)}
    scale = q.max_coeff()
    stray = max((abs(c) for e, c in q.terms.items() if e not in allowed), default=0.0)
    if stray > 1e-9 * scale:
        raise UnsupportedShape("cubic has monomials outside r1^3, r2^3, r3^3, r1 r2 r3")
    a, b, c = (q.coefficient(e) for e in [(3, 0, 0), (0, 3, 0), (0, 0, 3)])
    e = q.coefficient((1, 1, 1))
    if min(abs(a), abs(b), abs(c)) <= 1e-9 * scale:
        raise UnsupportedShape("a cube coefficient vanishes; not a Hesse-pencil member")
    g = complex(-e / (a * b * c) ** (1 / 3))
    moduli = moduli_k(g, tol)
    if moduli is POLE:
        return PlaneCubicClass(g, True, None)
    return PlaneCubicClass(g, False, moduli)


def hesse_cubic(g: complex) -> HomogeneousPolynomial:
    """``r1^3 + r2^3 + r3^3 - g r1 r2 r3`` over one group of three variables."""
    terms = {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1, (1, 1, 1): -g}
    return HomogeneousPolynomial(((0, 3),), terms, prune=0.0)
