"""Hölder exponent of the normal field at a point with a flat tangent cone."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import linregress

from src.cone.descriptors import unit
from src.cone.sampled import local_patches, sphere_section
from src.errors import AnalysisError
from src.expr.polynomial import exact_point
from src.logger import get_logger
from src.measure.variety import Variety, check_on_variety

logger = get_logger(__name__)

GRID_POINTS = 21
MIN_RADII = 4


@dataclass(frozen=True)
class HoelderFit:
    """Least-squares fit of log angle(N(x), N(p)) against log |x - p|.

    Attributes:
        exponent: Fitted slope, the Hölder exponent of the normal field.
        intercept: Fitted log10 constant.
        rvalue: Correlation of the fit.
        radii: Radii with at least one variety point.
        angles: Largest normal-line deviation found at each radius.
    """

    exponent: float
    intercept: float
    rvalue: float
    radii: tuple[float, ...]
    angles: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "intercept": self.intercept,
            "rvalue": self.rvalue,
            "radii": list(self.radii),
            "angles": list(self.angles),
        }


def _line_angles(normals: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Angle between normal lines, accurate for tiny angles."""
    cosines = np.abs(normals @ reference)
    sines = np.linalg.norm(normals - (normals @ reference)[:, None] * reference, axis=1)
    return np.arctan2(sines, cosines)


def fit_hoelder(
    V: Variety,
    p: Sequence,
    normal: Sequence[float],
    exponent_grid: tuple[float, float] = (-8.0, -3.0),
    count: int = GRID_POINTS,
) -> HoelderFit:
    """Fit the exponent α in angle(N(x), N(p)) ~ |x - p|^α.

    Variety points are located on circles (spheres) of radii 10^k for k on
    the grid; at each radius the worst normal deviation from ``normal`` is
    kept. The slope of the log-log fit is α: 1 for Lipschitz normals,
    1/3 for y^3 = x^4.

    Raises:
        AnalysisError: Fewer than four radii carry points with a measurable deviation.
    """
    p = exact_point(p)
    check_on_variety(V, p)
    reference = unit(normal)
    patches = local_patches(V, p)
    radii, angles = [], []
    for k in np.linspace(exponent_grid[1], exponent_grid[0], count):
        r = 10.0 ** k
        gradients = np.vstack(
            [local.equation.gradient(sphere_section(local, r, V.dimension)) for local in patches]
        ).reshape(-1, V.dimension)
        norms = np.linalg.norm(gradients, axis=1)
        gradients = gradients[norms > 0]
        if len(gradients) == 0:
            continue
        normals = gradients / np.linalg.norm(gradients, axis=1, keepdims=True)
        worst = float(np.max(_line_angles(normals, reference)))
        if worst > 0:
            radii.append(r)
            angles.append(worst)
    if len(radii) < MIN_RADII:
        raise AnalysisError(f"Hölder fit found usable points on {len(radii)} radii, need {MIN_RADII}")
    fit = linregress(np.log10(radii), np.log10(angles))
    logger.info(f"Hölder exponent {fit.slope:.4f} (r = {fit.rvalue:.4f}) over {len(radii)} radii")
    return HoelderFit(
        exponent=float(fit.slope),
        intercept=float(fit.intercept),
        rvalue=float(fit.rvalue),
        radii=tuple(float(r) for r in radii),
        angles=tuple(angles),
    )
