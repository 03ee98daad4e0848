"""Multi-homogeneous polynomials with complex coefficients.

Variables are split into groups, one per party; an exponent tuple lists the
exponents of all variables, group after group.  A polynomial is
multi-homogeneous: every term has the same degree inside each group.
"""
from __future__ import annotations

from functools import cached_property
from math import comb
from typing import Sequence

import numpy as np

from .tolerances import ValidationError

Groups = tuple[tuple[int, int], ...]


class HomogeneousPolynomial:
    """Sparse term map ``{exponents: coefficient}`` over grouped variables.

    Coefficients whose modulus falls below ``prune`` times the largest one
    (or below ``floor`` in absolute terms) are dropped on construction.  With
    ``normalize=True`` the result is rescaled so that the largest coefficient
    has modulus one.
    """

    def __init__(self, groups, terms: dict, *, prune: float = 1e-12, floor: float = 0.0,
                 normalize: bool = False):
        self.groups: Groups = tuple((int(p), int(n)) for p, n in groups)
        nv = sum(n for _, n in self.groups)
        clean = {}
        for e, c in terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != nv:
                raise ValidationError(f"exponent {e} has wrong length for {nv} variables")
            c = complex(c)
            if c != 0:
                clean[e] = clean.get(e, 0) + c
        big = max((abs(c) for c in clean.values()), default=0.0)
        cut = max(prune * big, floor)
        clean = {e: c for e, c in clean.items() if abs(c) > cut}
        if normalize and clean:
            big = max(abs(c) for c in clean.values())
            clean = {e: c / big for e, c in clean.items()}
        self.terms = dict(sorted(clean.items()))
        degs = {self._group_degrees(e) for e in self.terms}
        if len(degs) > 1:
            raise ValidationError(f"terms are not multi-homogeneous: degrees {sorted(degs)}")
        self._degrees = degs.pop() if degs else None

    @classmethod
    def zero(cls, groups) -> "HomogeneousPolynomial":
        return cls(groups, {})

    @classmethod
    def constant(cls, groups, c) -> "HomogeneousPolynomial":
        nv = sum(n for _, n in groups)
        return cls(groups, {(0,) * nv: c}, prune=0.0)

    @classmethod
    def linear_form(cls, groups, group: int, coeffs) -> "HomogeneousPolynomial":
        """``sum_i coeffs[i] * x_i`` over the variables of one group."""
        off = sum(n for _, n in groups[:group])
        nv = sum(n for _, n in groups)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * nv
            e[off + i] = 1
            terms[tuple(e)] = c
        return cls(groups, terms, prune=0.0)

    def _group_degrees(self, e) -> tuple[int, ...]:
        out, i = [], 0
        for _, n in self.groups:
            out.append(sum(e[i:i + n]))
            i += n
        return tuple(out)

    @property
    def nvars(self) -> int:
        return sum(n for _, n in self.groups)

    @property
    def degrees(self) -> tuple[int, ...] | None:
        """Degree in each variable group (``None`` for the zero polynomial)."""
        return self._degrees

    @property
    def degree(self) -> int | None:
        return None if self._degrees is None else sum(self._degrees)

    def is_zero(self) -> bool:
        return not self.terms

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def coefficient(self, exponents) -> complex:
        return self.terms.get(tuple(exponents), 0j)

    def __repr__(self):
        return f"HomogeneousPolynomial(groups={self.groups}, nterms={len(self.terms)}, degrees={self.degrees})"

    def _check(self, other):
        if self.groups != other.groups:
            raise ValidationError("polynomials live over different variable groups")

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return HomogeneousPolynomial(self.groups, t, prune=0.0)

    def __neg__(self):
        return HomogeneousPolynomial(self.groups, {e: -c for e, c in self.terms.items()}, prune=0.0)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, HomogeneousPolynomial):
            return self.scaled(other)
        self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return HomogeneousPolynomial(self.groups, t, prune=0.0)

    __rmul__ = __mul__

    def scaled(self, c) -> "HomogeneousPolynomial":
        return HomogeneousPolynomial(self.groups, {e: v * c for e, v in self.terms.items()}, prune=0.0)

    def normalized(self) -> "HomogeneousPolynomial":
        return HomogeneousPolynomial(self.groups, self.terms, prune=0.0, normalize=True)

    def pruned(self, prune: float = 1e-12, floor: float = 0.0) -> "HomogeneousPolynomial":
        return HomogeneousPolynomial(self.groups, self.terms, prune=prune, floor=floor)

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Exponent matrix ``(nterms, nvars)`` and coefficient vector."""
        if not self.terms:
            return np.zeros((0, self.nvars), dtype=int), np.zeros(0, dtype=complex)
        e = np.array(list(self.terms.keys()), dtype=int).reshape(len(self.terms), self.nvars)
        c = np.array(list(self.terms.values()), dtype=complex)
        return e, c

    def _flatten_point(self, point) -> np.ndarray:
        if isinstance(point, np.ndarray) and point.ndim == 1 and point.size == self.nvars:
            return point.astype(complex)
        parts = [np.asarray(x, dtype=complex).reshape(-1) for x in point]
        if len(parts) != len(self.groups) or any(
                p.size != n for p, (_, n) in zip(parts, self.groups)):
            raise ValidationError("point does not match the variable groups")
        return np.concatenate(parts)

    def evaluate(self, point) -> complex:
        """Value at a point given per group (list of coordinate tuples) or as one flat vector."""
        x = self._flatten_point(point)
        if not self.terms:
            return 0j
        e, c = self.arrays
        return complex(np.sum(c * np.prod(x[None, :] ** e, axis=1)))

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        """Vectorised evaluation at flat points ``xs`` of shape ``(S, nvars)``."""
        xs = np.asarray(xs, dtype=complex)
        if not self.terms:
            return np.zeros(xs.shape[0], dtype=complex)
        e, c = self.arrays
        return np.prod(xs[:, None, :] ** e[None, :, :], axis=2) @ c

    def derivative(self, var: int) -> dict:
        """Partial derivative as a raw term map (it is no longer homogeneous in ``var``'s group)."""
        out = {}
        for e, c in self.terms.items():
            if e[var]:
                f = list(e)
                f[var] -= 1
                out[tuple(f)] = c * e[var]
        return out

    def substitute(self, maps: Sequence[np.ndarray]) -> "HomogeneousPolynomial":
        """Linear change of variables ``x_g = maps[g] @ y_g`` in every group.

        ``maps[g]`` has shape ``(n_g, k_g)``; the result lives over groups of
        sizes ``k_g`` (same party ids).
        """
        maps = [np.asarray(m, dtype=complex) for m in maps]
        if len(maps) != len(self.groups) or any(m.shape[0] != n for m, (_, n) in zip(maps, self.groups)):
            raise ValidationError("substitution maps do not match the variable groups")
        new_groups = tuple((p, m.shape[1]) for (p, _), m in zip(self.groups, maps))
        if not self.terms:
            return HomogeneousPolynomial.zero(new_groups)
        forms = []
        for g, m in enumerate(maps):
            forms.append([HomogeneousPolynomial.linear_form(new_groups, g, m[i]) for i in range(m.shape[0])])
        flat_forms = [f for fs in forms for f in fs]
        one = HomogeneousPolynomial.constant(new_groups, 1.0)
        powers: dict = {}

        def power(v, k):
            key = (v, k)
            if key not in powers:
                powers[key] = one if k == 0 else power(v, k - 1) * flat_forms[v]
            return powers[key]

        acc: dict = {}
        for e, c in self.terms.items():
            p = one
            for v, k in enumerate(e):
                if k:
                    p = p * power(v, k)
            for f, d in p.terms.items():
                acc[f] = acc.get(f, 0) + c * d
        return HomogeneousPolynomial(new_groups, acc, prune=0.0)

    def binary_coefficients(self) -> np.ndarray:
        """Coefficients ``c_j`` of ``sum_j c_j s^(d-j) t^j`` for a form in one group of two variables."""
        if len(self.groups) != 1 or self.groups[0][1] != 2:
            raise ValidationError("binary_coefficients needs a single group of two variables")
        d = self.degree or 0
        out = np.zeros(d + 1, dtype=complex)
        for (a, b), c in self.terms.items():
            out[b] = c
        return out

    def allclose(self, other, rtol: float = 1e-9) -> bool:
        self._check(other)
        keys = set(self.terms) | set(other.terms)
        scale = max(self.max_coeff(), other.max_coeff(), 1e-300)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= rtol * scale for k in keys)


def monomial_count(nvars: int, degree: int) -> int:
    return comb(nvars + degree - 1, degree)
