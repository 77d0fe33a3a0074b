"""Semialgebraic varieties, local Hausdorff measure, densities and multiplicity."""

from src.measure.variety import LocalPatch, Patch, Variety, check_on_variety, components, local_equation, reduced
from src.measure.hausdorff import local_measure, projected_measure, trace_segments
from src.measure.density import (
    DEFAULT_RADII,
    DensityEstimate,
    MultiplicityEstimate,
    cone_density,
    lower_density,
    multiplicity,
    unit_ball_measure,
)

__all__ = [
    "DEFAULT_RADII",
    "DensityEstimate",
    "LocalPatch",
    "MultiplicityEstimate",
    "Patch",
    "Variety",
    "check_on_variety",
    "components",
    "cone_density",
    "local_equation",
    "local_measure",
    "lower_density",
    "multiplicity",
    "projected_measure",
    "reduced",
    "trace_segments",
    "unit_ball_measure",
]
