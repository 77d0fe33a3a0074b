"""Factorization over QQ through sympy, with a configurable degree cap."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy

from src.config import config
from src.errors import DegenerateError, FactorizationTimeout
from src.expr.polynomial import Polynomial
from src.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class FactorList:
    """constant × Π factor^multiplicity, factors pairwise non-associate."""

    constant: Fraction
    factors: tuple[tuple[Polynomial, int], ...]

    def expand(self) -> Polynomial:
        if not self.factors:
            raise DegenerateError("constant factor list has no variables to expand over")
        variables = self.factors[0][0].variables
        result = Polynomial.constant(variables, self.constant)
        for factor, multiplicity in self.factors:
            result = result * factor ** multiplicity
        return result

    @property
    def odd(self) -> list[tuple[Polynomial, int]]:
        return [(g, k) for g, k in self.factors if k % 2]

    @property
    def even(self) -> list[tuple[Polynomial, int]]:
        return [(g, k) for g, k in self.factors if not k % 2]

    def square_free_part(self) -> Polynomial:
        variables = self.factors[0][0].variables
        result = Polynomial.constant(variables, 1)
        for factor, _ in self.factors:
            result = result * factor
        return result


def _sort_key(item: tuple[Polynomial, int]) -> tuple:
    factor, multiplicity = item
    return (factor.degree, str(factor), multiplicity)


@lru_cache(maxsize=256)
def _factor_cached(f: Polynomial, degree_cap: int) -> FactorList:
    if f.degree > degree_cap:
        raise FactorizationTimeout(f"degree {f.degree} exceeds factorization cap {degree_cap}")
    constant, pieces = f.to_sympy().factor_list()
    factors = []
    for piece, multiplicity in pieces:
        factor = Polynomial.from_sympy(piece, f.variables)
        lead = next(iter(factor.terms.values()))
        factor = factor.scale(1 / lead)
        constant = constant * sympy.Rational(lead.numerator, lead.denominator) ** multiplicity
        factors.append((factor, int(multiplicity)))
    constant = sympy.Rational(constant)
    result = FactorList(Fraction(int(constant.p), int(constant.q)), tuple(sorted(factors, key=_sort_key)))
    logger.debug(f"factored {f} into {len(factors)} factors")
    return result


def square_free_factor(f: Polynomial, degree_cap: int | None = None) -> FactorList:
    """Factor f over the rationals.

    Every factor is irreducible over QQ and normalized to leading
    coefficient 1 in graded-lex order, so factors are square-free and
    pairwise non-associate.

    Args:
        f: Nonzero polynomial.
        degree_cap: Maximum total degree accepted; defaults to the configured cap.

    Returns:
        FactorList whose expansion equals f exactly.

    Raises:
        DegenerateError: f is zero.
        FactorizationTimeout: f exceeds the degree cap.
    """
    if f.is_zero:
        raise DegenerateError("cannot factor the zero polynomial")
    cap = degree_cap if degree_cap is not None else config.symbolic.factor_degree_cap
    return _factor_cached(f, cap)


def square_free_part(f: Polynomial, degree_cap: int | None = None) -> Polynomial:
    """Product of the distinct irreducible factors of f (f itself when constant)."""
    if f.is_constant:
        return f
    return square_free_factor(f, degree_cap).square_free_part()
