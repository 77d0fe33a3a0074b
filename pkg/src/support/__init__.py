"""Sample clouds, support radii, convexity and sphere inversion."""

from src.support.convexity import ConvexityResult, assess_convexity
from src.support.inversion import invert_points, sphere_invert
from src.support.radii import (
    NormalModulus,
    SupportReport,
    normal_jump,
    normal_modulus,
    positive_support,
    support_radii,
    support_radius,
)
from src.support.sampling import (
    Box,
    SampledHypersurface,
    project_to_zero_set,
    sample_surface,
    sample_variety,
    thin_out,
)

__all__ = [
    "Box",
    "ConvexityResult",
    "NormalModulus",
    "SampledHypersurface",
    "SupportReport",
    "assess_convexity",
    "invert_points",
    "normal_jump",
    "normal_modulus",
    "positive_support",
    "project_to_zero_set",
    "sample_surface",
    "sample_variety",
    "sphere_invert",
    "support_radii",
    "support_radius",
    "thin_out",
]
