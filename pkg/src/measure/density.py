"""Lower density D^d(X, p) and tangent-cone multiplicity from local measures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from src.cone.descriptors import (
    AlgebraicCone,
    ConeDescriptor,
    EmptyCone,
    FlatCone,
    RayFan,
    SampledCone,
    cone_is_flat,
)
from src.config import config
from src.errors import AnalysisError
from src.expr.polynomial import exact_point
from src.logger import get_logger
from src.measure.hausdorff import local_measure
from src.measure.variety import Variety, check_on_variety

logger = get_logger(__name__)

DEFAULT_RADII = tuple(2.0 ** -k for k in range(3, 10))
TAIL = 3


def unit_ball_measure(d: int, r: float) -> float:
    """H^d(r B^d) for d in (1, 2)."""
    if d == 1:
        return 2.0 * r
    if d == 2:
        return math.pi * r * r
    raise ValueError(f"unit ball measure for d={d} is not supported")


def _trend(ratios: Sequence[float], slack: float = 1e-3) -> str:
    steps = np.diff(np.asarray(ratios, dtype=float))
    if len(steps) == 0 or np.all(np.abs(steps) <= slack):
        return "flat"
    if np.all(steps >= -slack):
        return "increasing"
    if np.all(steps <= slack):
        return "decreasing"
    return "oscillating"


@dataclass(frozen=True)
class DensityEstimate:
    """Ratios H^d(X ∩ B(p, r)) / H^d(r B^d) over a shrinking radius ladder.

    Attributes:
        dim: Hausdorff dimension d.
        radii: Strictly decreasing radii.
        measures: Local measures at each radius.
        ratios: measures divided by the measure of the d-ball of the same radius.
        liminf_estimate: Minimum of the last three ratios.
        resolution: Finest grid spacing requested.
        trend: Monotonicity of the ratios as r shrinks.
    """

    dim: int
    radii: tuple[float, ...]
    measures: tuple[float, ...]
    ratios: tuple[float, ...]
    liminf_estimate: float
    resolution: float
    trend: str = "flat"

    @classmethod
    def from_measures(cls, dim: int, radii: Sequence[float], measures: Sequence[float], resolution: float) -> DensityEstimate:
        radii = tuple(float(r) for r in radii)
        if any(b >= a for a, b in zip(radii, radii[1:])):
            raise ValueError("radii must be strictly decreasing")
        ratios = tuple(m / unit_ball_measure(dim, r) for m, r in zip(measures, radii))
        return cls(
            dim=dim,
            radii=radii,
            measures=tuple(float(m) for m in measures),
            ratios=ratios,
            liminf_estimate=min(ratios[-TAIL:]),
            resolution=float(resolution),
            trend=_trend(ratios),
        )

    @classmethod
    def constant(cls, dim: int, radii: Sequence[float], ratio: float) -> DensityEstimate:
        """Exact density of a cone: the ratio does not depend on r."""
        return cls.from_measures(dim, radii, [ratio * unit_ball_measure(dim, r) for r in radii], 0.0)

    def table(self) -> np.ndarray:
        return np.column_stack([self.radii, self.measures, self.ratios])

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        np.savetxt(path, self.table(), delimiter=",", header="r,measure,ratio", comments="", fmt="%.12g")
        return path

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "radii": list(self.radii),
            "measures": list(self.measures),
            "ratios": list(self.ratios),
            "liminf_estimate": self.liminf_estimate,
            "resolution": self.resolution,
            "trend": self.trend,
        }


@dataclass(frozen=True)
class MultiplicityEstimate:
    numerator: DensityEstimate
    denominator: DensityEstimate
    value: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "density": self.numerator.liminf_estimate,
            "cone_density": self.denominator.liminf_estimate,
            "ratios": list(self.numerator.ratios),
        }


def lower_density(
    V: Variety,
    p: Sequence,
    radius_ladder: Sequence[float] = DEFAULT_RADII,
    resolution: float | None = None,
) -> DensityEstimate:
    """Estimate D^d(V, p) from the tail of a radius ladder.

    Each radius r is measured at spacing min(resolution, r/64), so the
    relative resolution never degrades as the ball shrinks.
    """
    resolution = resolution if resolution is not None else config.numeric.resolution
    p = exact_point(p)
    check_on_variety(V, p)
    dim = V.dimension - 1
    radii = sorted((float(r) for r in radius_ladder), reverse=True)
    measures = []
    for r in radii:
        measures.append(local_measure(V, p, r, min(resolution, r / 64)))
        logger.debug(f"r={r:g}: measure {measures[-1]:.6g}")
    estimate = DensityEstimate.from_measures(dim, radii, measures, resolution)
    logger.info(f"lower density {estimate.liminf_estimate:.4f} ({estimate.trend})")
    return estimate


def cone_density(cone: ConeDescriptor, dim: int, resolution: float = 1e-3, angular_tol: float = 1e-2) -> float:
    """Density of the tangent cone itself, i.e. its measure in the unit ball over that of B^d.

    Raises:
        AnalysisError: The cone is empty or its density cannot be evaluated.
    """
    if isinstance(cone, EmptyCone):
        raise AnalysisError("empty tangent cone has zero density")
    if isinstance(cone, FlatCone):
        return 1.0
    if isinstance(cone, (RayFan, SampledCone)):
        if dim == 1:
            rays = len(cone.directions)
            if rays == 0:
                raise AnalysisError("tangent cone without rays has zero density")
            return rays / 2
        if cone_is_flat(cone, angular_tol) is not None:
            return 1.0
        raise AnalysisError("density of a non-flat sampled surface cone is not available")
    if isinstance(cone, AlgebraicCone):
        measure = local_measure(Variety.from_polynomial(cone.form.base), (0,) * cone.form.base.nvars, 1.0, resolution)
        if measure == 0:
            raise AnalysisError(f"Z({cone.form}) has no real points near the origin")
        return measure / unit_ball_measure(dim, 1.0)
    raise TypeError(f"unsupported cone descriptor {type(cone).__name__}")


def multiplicity(
    V: Variety,
    p: Sequence,
    cone: ConeDescriptor,
    radius_ladder: Sequence[float] = DEFAULT_RADII,
    resolution: float | None = None,
) -> MultiplicityEstimate:
    """m(T_pV) as the ratio of the lower densities of V and of its tangent cone.

    Raises:
        AnalysisError: Zero denominator (empty cone) or a measure failure.
    """
    resolution = resolution if resolution is not None else config.numeric.resolution
    numerator = lower_density(V, p, radius_ladder, resolution)
    ratio = cone_density(cone, numerator.dim, min(resolution, 1 / 64))
    denominator = DensityEstimate.constant(numerator.dim, numerator.radii, ratio)
    value = numerator.liminf_estimate / denominator.liminf_estimate
    logger.info(f"multiplicity {value:.4f} (cone density {ratio:.4f})")
    return MultiplicityEstimate(numerator=numerator, denominator=denominator, value=value)
