"""Inversion through a sphere."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from src.errors import DegenerateError, DimensionError


def _is_exact(values: Sequence) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values)


def sphere_invert(x: Sequence, center: Sequence, radius: float | Fraction | int = 1) -> tuple | np.ndarray:
    """center + radius^2 (x - center) / |x - center|^2.

    Exact when every input is an int or Fraction, float otherwise. The map
    is an involution that fixes the sphere and swaps its inside and outside.

    Raises:
        DegenerateError: x equals the center.
    """
    if len(x) != len(center):
        raise DimensionError("point and center differ in length")
    if _is_exact(list(x) + list(center) + [radius]):
        offset = [Fraction(a) - Fraction(c) for a, c in zip(x, center)]
        norm2 = sum(v * v for v in offset)
        if norm2 == 0:
            raise DegenerateError("cannot invert the center of the sphere")
        k = Fraction(radius) ** 2 / norm2
        return tuple(Fraction(c) + k * v for c, v in zip(center, offset))
    points = invert_points(np.asarray([x], dtype=float), np.asarray(center, dtype=float), float(radius))
    return points[0]


def invert_points(points: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray:
    """Vectorized float inversion of an (m, n) array."""
    offset = np.asarray(points, dtype=float) - center
    norm2 = np.sum(offset * offset, axis=-1, keepdims=True)
    if np.any(norm2 == 0):
        raise DegenerateError("cannot invert the center of the sphere")
    return center + radius * radius * offset / norm2
