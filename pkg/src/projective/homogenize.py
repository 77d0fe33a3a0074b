"""Homogenization, charts and the hemisphere transform."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from src.errors import DegenerateError, DimensionError
from src.expr.polynomial import Polynomial, exact_point

HOMOGENIZING_VARIABLE = "w"


@dataclass(frozen=True)
class ProjectivePoly:
    """Homogeneous polynomial of degree ``degree`` in n+1 variables, the last one at infinity by default."""

    base: Polynomial
    degree: int

    def __post_init__(self):
        if self.base.is_zero:
            raise DegenerateError("zero polynomial has no projective zero set")
        if any(sum(e) != self.degree for e in self.base.terms):
            raise DimensionError(f"{self.base} is not homogeneous of degree {self.degree}")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.base.variables

    def dehomogenize(self, chart: int | None = None) -> Polynomial:
        """Set homogeneous coordinate ``chart`` to 1 (default: the last)."""
        return dehomogenize(self, chart)

    def swap(self, i: int, j: int) -> ProjectivePoly:
        return swap_chart(self, i, j)

    def __str__(self) -> str:
        return str(self.base)


def homogenize(f: Polynomial, variable: str = HOMOGENIZING_VARIABLE, degree: int | None = None) -> ProjectivePoly:
    """w^d f(x/w), with d = deg f unless a larger degree is requested."""
    if f.is_zero:
        raise DegenerateError("cannot homogenize the zero polynomial")
    if variable in f.variables:
        raise DimensionError(f"homogenizing variable {variable!r} already used")
    d = f.degree if degree is None else degree
    if d < f.degree:
        raise DimensionError(f"degree {d} below deg f = {f.degree}")
    terms = {e + (d - sum(e),): c for e, c in f.terms.items()}
    return ProjectivePoly(Polynomial(f.variables + (variable,), terms), d)


def dehomogenize(F: ProjectivePoly, chart: int | None = None) -> Polynomial:
    index = F.base.nvars - 1 if chart is None else chart
    if not 0 <= index < F.base.nvars:
        raise DimensionError(f"chart {index} out of range for {F.base.nvars} coordinates")
    variables = F.variables[:index] + F.variables[index + 1:]
    terms: dict[tuple[int, ...], Fraction] = {}
    for e, c in F.base.terms.items():
        reduced = e[:index] + e[index + 1:]
        terms[reduced] = terms.get(reduced, Fraction(0)) + c
    return Polynomial(variables, terms)


def swap_chart(F: ProjectivePoly, i: int, j: int) -> ProjectivePoly:
    """Exchange homogeneous coordinates i and j; the variable names stay in place."""
    n = F.base.nvars
    if not (0 <= i < n and 0 <= j < n):
        raise DimensionError(f"coordinates {i}, {j} out of range for {n}")

    def swapped(e: tuple[int, ...]) -> tuple[int, ...]:
        e = list(e)
        e[i], e[j] = e[j], e[i]
        return tuple(e)

    return ProjectivePoly(Polynomial(F.variables, {swapped(e): c for e, c in F.base.terms.items()}), F.degree)


def p_transform(f: Polynomial, d: int | None = None) -> Polynomial:
    """x_n^d f(x_1/x_n, ..., x_{n-1}/x_n, 1/x_n).

    The term c x^e maps to c x_1^e_1 ... x_{n-1}^e_{n-1} x_n^(d - |e|), so the
    transform is an exact involution for a fixed d >= deg f.

    Raises:
        DimensionError: d < deg f or fewer than two variables.
    """
    if f.nvars < 2:
        raise DimensionError("the hemisphere transform needs at least two variables")
    d = f.degree if d is None else d
    if d < f.degree:
        raise DimensionError(f"degree {d} below deg f = {f.degree}")
    terms = {e[:-1] + (d - sum(e),): c for e, c in f.terms.items()}
    return Polynomial(f.variables, terms)


def p_transform_identity(f: Polynomial, d: int | None = None) -> bool:
    """Check x_n^d f(P(x)) - p_transform(f, d) == 0 by clearing denominators in sympy."""
    d = f.degree if d is None else d
    symbols = f.symbols
    last = symbols[-1]
    images = {s: s / last for s in symbols[:-1]}
    images[last] = 1 / last
    expr = f.to_sympy().as_expr().subs(images, simultaneous=True) * last ** d
    difference = sympy.cancel(expr - p_transform(f, d).to_sympy().as_expr())
    return difference == 0


def chart_point(direction: Sequence, chart: int) -> tuple:
    """Affine coordinates in chart ``chart`` of the point at infinity [direction : 0]."""
    direction = exact_point(direction)
    pivot = direction[chart]
    if pivot == 0:
        raise DegenerateError(f"direction has a zero coordinate in chart {chart}")
    others = [x for i, x in enumerate(direction) if i != chart]
    return tuple(x / pivot for x in others) + (Fraction(0),)
