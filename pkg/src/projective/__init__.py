"""Projective closure, the hemisphere transform and convex-set cones."""

from src.projective.closure import (
    ClosureReport,
    InfinityPoint,
    analyze_infinity_point,
    equivalent_quadratic_cones,
    infinity_directions,
    projective_closure,
    quadratic_signature,
)
from src.projective.convex import (
    DirectionCone,
    EntireGraphResult,
    StrictConvexityResult,
    entire_graph_direction,
    normal_cone_sample,
    recession_cone_sample,
    slice_plane,
    assess_strict_convexity,
)
from src.projective.homogenize import (
    ProjectivePoly,
    dehomogenize,
    homogenize,
    p_transform,
    p_transform_identity,
    swap_chart,
)

__all__ = [
    "ClosureReport",
    "DirectionCone",
    "EntireGraphResult",
    "InfinityPoint",
    "ProjectivePoly",
    "StrictConvexityResult",
    "analyze_infinity_point",
    "dehomogenize",
    "entire_graph_direction",
    "equivalent_quadratic_cones",
    "homogenize",
    "infinity_directions",
    "normal_cone_sample",
    "p_transform",
    "p_transform_identity",
    "projective_closure",
    "quadratic_signature",
    "recession_cone_sample",
    "slice_plane",
    "assess_strict_convexity",
    "swap_chart",
]
