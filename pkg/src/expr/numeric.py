"""Vectorized float evaluation of polynomials and other scalar fields."""

from __future__ import annotations

from typing import Callable, Protocol, runtime_checkable

import numpy as np

from src.expr.polynomial import Polynomial


@runtime_checkable
class ScalarField(Protocol):
    """A smooth function R^n -> R with its gradient, evaluated on point arrays."""

    dimension: int

    def value(self, points: np.ndarray) -> np.ndarray: ...

    def gradient(self, points: np.ndarray) -> np.ndarray: ...


class NumericPolynomial:
    """Float view of an exact Polynomial.

    Points are arrays of shape (..., n); values have shape (...) and
    gradients (..., n). Terms are accumulated one at a time to keep memory
    proportional to the point array.
    """

    def __init__(self, f: Polynomial):
        self.polynomial = f
        self.dimension = f.nvars
        self._exponents = np.array(list(f.terms.keys()), dtype=np.int64).reshape(-1, f.nvars)
        self._coefficients = np.array([float(c) for c in f.terms.values()], dtype=float)
        self._partials: list[NumericPolynomial] | None = None

    def value(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        result = np.zeros(points.shape[:-1], dtype=float)
        for exponent, coefficient in zip(self._exponents, self._coefficients):
            term = np.full(points.shape[:-1], coefficient)
            for i, k in enumerate(exponent):
                if k:
                    term = term * points[..., i] ** k
            result += term
        return result

    __call__ = value

    def gradient(self, points: np.ndarray) -> np.ndarray:
        if self._partials is None:
            self._partials = [NumericPolynomial(g) for g in self.polynomial.gradient]
        points = np.asarray(points, dtype=float)
        return np.stack([g.value(points) for g in self._partials], axis=-1)

    def along_line(self, origin: np.ndarray, direction: np.ndarray) -> np.polynomial.Polynomial:
        """Restriction s -> f(origin + s*direction) as a numpy polynomial."""
        lines = [np.polynomial.Polynomial([o, d]) for o, d in zip(origin, direction)]
        result = np.polynomial.Polynomial([0.0])
        for exponent, coefficient in zip(self._exponents, self._coefficients):
            term = np.polynomial.Polynomial([coefficient])
            for line, k in zip(lines, exponent):
                if k:
                    term = term * line ** int(k)
            result = result + term
        return result


class FunctionField:
    """Scalar field given by numpy callables, for non-polynomial equations.

    Args:
        dimension: Ambient dimension n.
        value: Callable mapping (..., n) arrays to (...) arrays.
        gradient: Callable mapping (..., n) arrays to (..., n) arrays.
        label: Human-readable formula used in reports.
    """

    def __init__(
        self,
        dimension: int,
        value: Callable[[np.ndarray], np.ndarray],
        gradient: Callable[[np.ndarray], np.ndarray],
        label: str = "",
    ):
        self.dimension = dimension
        self._value = value
        self._gradient = gradient
        self.label = label

    def value(self, points: np.ndarray) -> np.ndarray:
        return self._value(np.asarray(points, dtype=float))

    __call__ = value

    def gradient(self, points: np.ndarray) -> np.ndarray:
        return self._gradient(np.asarray(points, dtype=float))

    def __str__(self) -> str:
        return self.label


def as_field(f: Polynomial | ScalarField) -> ScalarField:
    if isinstance(f, Polynomial):
        return NumericPolynomial(f)
    return f


def horseshoe_field() -> FunctionField:
    """x^2 + exp(-y) - 1, a convex curve that is not an algebraic set."""

    def value(p: np.ndarray) -> np.ndarray:
        return p[..., 0] ** 2 + np.exp(-p[..., 1]) - 1.0

    def gradient(p: np.ndarray) -> np.ndarray:
        return np.stack([2.0 * p[..., 0], -np.exp(-p[..., 1])], axis=-1)

    return FunctionField(2, value, gradient, label="x^2 + exp(-y) - 1")
