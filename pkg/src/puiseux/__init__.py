"""Newton polygons, Puiseux branches and plane-germ classification."""

from src.puiseux.germ import GermKind, GermReport, HalfBranch, classify_germ, half_branches, tangent_ray
from src.puiseux.newton import Edge, NewtonPolygon, newton_polygon
from src.puiseux.series import PuiseuxBranch, PuiseuxExpansion, branch_points, expand_germ, puiseux_expand

__all__ = [
    "Edge",
    "GermKind",
    "GermReport",
    "HalfBranch",
    "NewtonPolygon",
    "PuiseuxBranch",
    "PuiseuxExpansion",
    "branch_points",
    "classify_germ",
    "expand_germ",
    "half_branches",
    "newton_polygon",
    "puiseux_expand",
    "tangent_ray",
]
