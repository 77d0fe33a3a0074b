"""Semialgebraic varieties: unions of {equation = 0, constraints >= 0} patches."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from src.errors import DegenerateError, DimensionError, FactorizationTimeout, NotOnVarietyError
from src.expr.factor import square_free_factor, square_free_part
from src.expr.numeric import NumericPolynomial
from src.expr.parser import parse
from src.expr.polynomial import Polynomial, as_fraction, exact_point
from src.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class Patch:
    """One piece {equation = 0, every constraint >= 0}."""

    equation: Polynomial
    constraints: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        if self.equation.is_zero:
            raise DegenerateError("patch equation is the zero polynomial")
        for c in self.constraints:
            if c.variables != self.equation.variables:
                raise DimensionError(f"constraint {c} uses {c.variables}, equation uses {self.equation.variables}")

    def contains(self, point: Sequence, tol: float = 0.0) -> bool:
        if tol == 0.0:
            point = exact_point(point)
            return self.equation.evaluate(point) == 0 and all(c.evaluate(point) >= 0 for c in self.constraints)
        point = tuple(float(x) for x in point)
        return abs(self.equation.evaluate(point)) <= tol and all(c.evaluate(point) >= -tol for c in self.constraints)

    def translate(self, p: Sequence) -> Patch:
        return Patch(self.equation.translate(p), tuple(c.translate(p) for c in self.constraints))

    def __str__(self) -> str:
        if not self.constraints:
            return f"{{{self.equation} = 0}}"
        rest = ", ".join(f"{c} >= 0" for c in self.constraints)
        return f"{{{self.equation} = 0, {rest}}}"


@dataclass(frozen=True)
class Variety:
    """Union of patches sharing one variable list; n = ambient dimension."""

    patches: tuple[Patch, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.patches:
            raise DegenerateError("variety needs at least one patch")
        variables = self.patches[0].equation.variables
        for patch in self.patches[1:]:
            if patch.equation.variables != variables:
                raise DimensionError("all patches must share the variable list")

    @classmethod
    def from_polynomial(cls, f: Polynomial, constraints: Sequence[Polynomial] = ()) -> Variety:
        return cls((Patch(f, tuple(constraints)),))

    @classmethod
    def from_text(cls, patches: Sequence[tuple[str, Sequence[str]]], variables: Sequence[str] | None = None) -> Variety:
        """Build from (equation text, constraint texts) pairs."""
        built = []
        for equation_text, constraint_texts in patches:
            equation = parse(equation_text, variables)
            variables = equation.variables
            constraints = tuple(parse(text, variables) for text in constraint_texts)
            built.append(Patch(equation, constraints))
        return cls(tuple(built))

    @property
    def variables(self) -> tuple[str, ...]:
        return self.patches[0].equation.variables

    @property
    def dimension(self) -> int:
        return len(self.variables)

    @property
    def is_single_patch(self) -> bool:
        return len(self.patches) == 1

    def contains(self, point: Sequence, tol: float = 0.0) -> bool:
        if len(point) != self.dimension:
            raise DimensionError(f"point of length {len(point)} for a variety in R^{self.dimension}")
        return any(patch.contains(point, tol) for patch in self.patches)

    def patches_through(self, point: Sequence, tol: float = 0.0) -> tuple[Patch, ...]:
        return tuple(patch for patch in self.patches if patch.contains(point, tol))

    def equation(self) -> Polynomial:
        """Product of the patch equations; its zero set contains the variety."""
        result = Polynomial.constant(self.variables, 1)
        for patch in self.patches:
            result = result * patch.equation
        return result

    def translate(self, p: Sequence) -> Variety:
        return Variety(tuple(patch.translate(p) for patch in self.patches))

    def homothetic_image(self, p: Sequence, factor: Fraction | int) -> Variety:
        """X_{p,λ} = λ(X - p) + p, computed exactly."""
        lam = as_fraction(factor)
        if lam <= 0:
            raise ValueError("homothety factor must be positive")
        p = exact_point(p)
        gens = Polynomial.generators(self.variables)
        images = [pi + (g - pi).scale(1 / lam) for g, pi in zip(gens, p)]

        def pull(poly: Polynomial) -> Polynomial:
            return poly.compose(images, self.variables)

        return Variety(tuple(Patch(pull(pt.equation), tuple(pull(c) for c in pt.constraints)) for pt in self.patches))

    def __str__(self) -> str:
        return " ∪ ".join(str(p) for p in self.patches)


@lru_cache(maxsize=128)
def reduced(equation: Polynomial) -> Polynomial:
    """Square-free part, so that every smooth zero is a sign change."""
    try:
        return square_free_part(equation)
    except FactorizationTimeout:
        logger.warning(f"square-free reduction skipped for degree {equation.degree}")
        return equation


@lru_cache(maxsize=128)
def components(equation: Polynomial) -> tuple[Polynomial, ...]:
    """Distinct irreducible factors; distinct components meet in a null set."""
    if equation.is_constant:
        return (equation,)
    try:
        return tuple(g for g, _ in square_free_factor(equation).factors)
    except FactorizationTimeout:
        return (equation,)


def local_equation(V: Variety, p: Sequence) -> Polynomial:
    """Square-free product of the equations of the patches through p."""
    equation = Polynomial.constant(V.variables, 1)
    for patch in V.patches_through(p):
        equation = equation * patch.equation
    return reduced(equation)


def check_on_variety(V: Variety, p: Sequence, tol: float = 1e-9) -> None:
    if len(p) != V.dimension:
        raise DimensionError(f"point of length {len(p)} for a variety in R^{V.dimension}")
    if not V.contains(p, tol=tol):
        raise NotOnVarietyError(f"point {tuple(str(x) for x in p)} is not on {V}")


class LocalPatch:
    """A patch recentred at p with float evaluators."""

    def __init__(self, patch: Patch, p: Sequence):
        translated = patch.translate(exact_point(p))
        self.equation = NumericPolynomial(reduced(translated.equation))
        self.components = [NumericPolynomial(g) for g in components(translated.equation)]
        self.constraints = [NumericPolynomial(c) for c in translated.constraints]

    def admissible(self, points: np.ndarray) -> np.ndarray:
        keep = np.ones(np.shape(points)[:-1], dtype=bool)
        for c in self.constraints:
            keep &= c.value(points) >= 0
        return keep
