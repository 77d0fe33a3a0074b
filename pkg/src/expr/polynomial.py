"""Sparse multivariate polynomials with exact rational coefficients.

Terms are kept in graded-lexicographic order (highest total degree first),
which fixes printing, hashing and iteration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import sympy

from src.errors import DegenerateError, DimensionError, NotOnVarietyError

Exponent = tuple[int, ...]
Scalar = Fraction | int


def grlex_key(exponent: Exponent) -> tuple[int, Exponent]:
    return (sum(exponent), exponent)


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions, decimal strings or floats to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    return Fraction(value)


class Polynomial:
    """Immutable sparse polynomial over QQ.

    Args:
        variables: Ordered variable names.
        terms: Mapping from exponent tuples to coefficients; zero
            coefficients are dropped.
    """

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, Scalar] | None = None):
        self.variables: tuple[str, ...] = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise DimensionError(f"duplicate variables in {self.variables}")
        n = len(self.variables)
        clean: dict[Exponent, Fraction] = {}
        for exponent, coefficient in (terms or {}).items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != n:
                raise DimensionError(f"exponent {exponent} does not match {n} variables")
            if any(e < 0 for e in exponent):
                raise ValueError(f"negative exponent {exponent}")
            coefficient = as_fraction(coefficient)
            if coefficient:
                clean[exponent] = clean.get(exponent, Fraction(0)) + coefficient
        ordered = sorted((e for e, c in clean.items() if c), key=grlex_key, reverse=True)
        self._terms: dict[Exponent, Fraction] = {e: clean[e] for e in ordered}

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> Polynomial:
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], value: Scalar) -> Polynomial:
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> Polynomial:
        variables = tuple(variables)
        if name not in variables:
            raise DimensionError(f"unknown variable {name!r}")
        exponent = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exponent: 1})

    @classmethod
    def generators(cls, variables: Sequence[str]) -> tuple[Polynomial, ...]:
        return tuple(cls.variable(variables, v) for v in variables)

    # basic properties ---------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @cached_property
    def degree(self) -> int:
        """Maximum total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    @cached_property
    def order(self) -> int:
        """Minimum total degree; -1 for the zero polynomial."""
        return min((sum(e) for e in self._terms), default=-1)

    @property
    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    @property
    def is_constant(self) -> bool:
        return self.degree <= 0

    @property
    def is_homogeneous(self) -> bool:
        return not self.is_zero and self.degree == self.order

    def degree_in(self, index: int) -> int:
        return max((e[index] for e in self._terms), default=-1)

    def homogeneous_part(self, k: int) -> Polynomial:
        return Polynomial(self.variables, {e: c for e, c in self._terms.items() if sum(e) == k})

    def coefficients(self) -> list[Fraction]:
        return list(self._terms.values())

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise DimensionError(f"variables {other.variables} differ from {self.variables}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Polynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def __mul__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, factor: Scalar) -> Polynomial:
        factor = as_fraction(factor)
        return Polynomial(self.variables, {e: c * factor for e, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = Polynomial.constant(self.variables, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.variables, tuple(self._terms.items())))

    # calculus and evaluation -------------------------------------------

    def evaluate(self, point: Sequence) -> Fraction | float:
        """Evaluate at a point; exact when all coordinates are rationals."""
        if len(point) != self.nvars:
            raise DimensionError(f"point of length {len(point)} for {self.nvars} variables")
        exact = all(isinstance(x, (int, Fraction)) and not isinstance(x, bool) for x in point)
        total = Fraction(0) if exact else 0.0
        for e, c in self._terms.items():
            value = c if exact else float(c)
            for x, k in zip(point, e):
                if k:
                    value = value * x ** k
            total += value
        return total

    __call__ = evaluate

    def diff(self, index: int) -> Polynomial:
        terms = {}
        for e, c in self._terms.items():
            if e[index]:
                lowered = e[:index] + (e[index] - 1,) + e[index + 1:]
                terms[lowered] = c * e[index]
        return Polynomial(self.variables, terms)

    @cached_property
    def gradient(self) -> tuple[Polynomial, ...]:
        return tuple(self.diff(i) for i in range(self.nvars))

    def compose(self, images: Sequence[Polynomial], variables: Sequence[str] | None = None) -> Polynomial:
        """Substitute ``images[i]`` for variable i.

        Args:
            images: One polynomial per variable, all sharing a variable list.
            variables: Target variable list when ``images`` is empty-typed.
        """
        if len(images) != self.nvars:
            raise DimensionError(f"{len(images)} images for {self.nvars} variables")
        target = tuple(variables) if variables is not None else images[0].variables
        powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(target, 1)} for _ in images]

        def power(i: int, k: int) -> Polynomial:
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * images[i]
            return cache[k]

        result = Polynomial.zero(target)
        for e, c in self._terms.items():
            term = Polynomial.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def translate(self, point: Sequence) -> Polynomial:
        """Return g with g(x) = f(x + point), computed exactly."""
        if len(point) != self.nvars:
            raise DimensionError(f"point of length {len(point)} for {self.nvars} variables")
        shift = [as_fraction(x) for x in point]
        if not any(shift):
            return self
        gens = Polynomial.generators(self.variables)
        return self.compose([g + s for g, s in zip(gens, shift)])

    def with_variables(self, variables: Sequence[str]) -> Polynomial:
        """Re-express over another variable list containing every used variable."""
        variables = tuple(variables)
        index = {v: i for i, v in enumerate(variables)}
        terms = {}
        for e, c in self._terms.items():
            target = [0] * len(variables)
            for v, k in zip(self.variables, e):
                if k:
                    if v not in index:
                        raise DimensionError(f"variable {v!r} missing from {variables}")
                    target[index[v]] = k
            terms[tuple(target)] = c
        return Polynomial(variables, terms)

    def used_variables(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.variables) if self.degree_in(i) > 0)

    # sympy bridge -------------------------------------------------------

    @cached_property
    def symbols(self) -> tuple[sympy.Symbol, ...]:
        return tuple(sympy.Symbol(v) for v in self.variables)

    def to_sympy(self) -> sympy.Poly:
        coeffs = {e: sympy.Rational(c.numerator, c.denominator) for e, c in self._terms.items()}
        return sympy.Poly.from_dict(coeffs or {(0,) * self.nvars: 0}, *self.symbols, domain=sympy.QQ)

    @classmethod
    def from_sympy(cls, poly: sympy.Poly | sympy.Expr, variables: Sequence[str]) -> Polynomial:
        gens = tuple(sympy.Symbol(v) for v in variables)
        if not isinstance(poly, sympy.Poly):
            poly = sympy.Poly(poly, *gens, domain=sympy.QQ)
        elif tuple(poly.gens) != tuple(gens):
            poly = sympy.Poly(poly.as_expr(), *gens, domain=sympy.QQ)
        terms = {}
        for e, c in poly.terms():
            c = sympy.Rational(c)
            terms[tuple(e)] = Fraction(int(c.p), int(c.q))
        return cls(variables, terms)

    # printing -----------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        pieces = []
        for e, c in self._terms.items():
            monomial = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            magnitude = abs(c)
            if monomial and magnitude == 1:
                body = monomial
            elif monomial:
                body = f"{_format_fraction(magnitude)}*{monomial}"
            else:
                body = _format_fraction(magnitude)
            if not pieces:
                pieces.append(f"-{body}" if c < 0 else body)
            else:
                pieces.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({', '.join(self.variables)}: {self})"


def _format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class HomogeneousForm:
    """Nonzero homogeneous polynomial together with its degree m."""

    base: Polynomial
    degree: int

    def __post_init__(self):
        if self.base.is_zero:
            raise DegenerateError("homogeneous form must be nonzero")
        if any(sum(e) != self.degree for e in self.base.terms):
            raise ValueError(f"{self.base} is not homogeneous of degree {self.degree}")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.base.variables

    def __str__(self) -> str:
        return str(self.base)


def translate(f: Polynomial, p: Sequence) -> Polynomial:
    return f.translate(p)


def evaluate(f: Polynomial, point: Sequence) -> Fraction | float:
    return f.evaluate(point)


def gradient(f: Polynomial) -> tuple[Polynomial, ...]:
    return f.gradient


def leading_form(f: Polynomial) -> HomogeneousForm:
    """Lowest-degree homogeneous part h_f of f and its degree m.

    The remainder f - h_f only has terms of degree > m.

    Raises:
        DegenerateError: f is the zero polynomial.
        NotOnVarietyError: f has a nonzero constant term.
    """
    if f.is_zero:
        raise DegenerateError("leading form of the zero polynomial")
    if f.constant_term:
        raise NotOnVarietyError(f"constant term {f.constant_term} is nonzero; translate to a point of Z(f) first")
    m = f.order
    return HomogeneousForm(f.homogeneous_part(m), m)


def homogeneity_check(h: HomogeneousForm, lambdas: Iterable[Scalar], points: Iterable[Sequence]) -> bool:
    """Exact check of h(λx) = λ^m h(x) on the given scalars and points."""
    points = [tuple(as_fraction(x) for x in point) for point in points]
    for lam in lambdas:
        lam = as_fraction(lam)
        for point in points:
            scaled = tuple(lam * x for x in point)
            if h.base.evaluate(scaled) != lam ** h.degree * h.base.evaluate(point):
                return False
    return True


def exact_point(point: Sequence) -> tuple[Fraction, ...]:
    """Convert coordinates to Fractions; floats are taken at their exact binary value."""
    return tuple(as_fraction(x) for x in point)

