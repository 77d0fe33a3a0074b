"""Tangent cones: algebraic leading forms, sign-change loci and homothetic samples."""

from src.cone.algebraic import (
    FactorSign,
    SignLocus,
    algebraic_cone,
    f_lambda,
    flat_normal,
    is_flat,
    sampled_flat_normal,
    sign_change_locus,
)
from src.cone.descriptors import (
    AlgebraicCone,
    ConeDescriptor,
    ConeOfRaysQuery,
    EmptyCone,
    FlatCone,
    RayFan,
    SampledCone,
    angle_between,
    canonical_normal,
    cone_is_flat,
    is_symmetric,
    merge_directions,
    symmetrize,
    unit,
)
from src.cone.sampled import meets_cone_of_rays, sampled_cone, sphere_section

__all__ = [
    "AlgebraicCone",
    "ConeDescriptor",
    "ConeOfRaysQuery",
    "EmptyCone",
    "FactorSign",
    "FlatCone",
    "RayFan",
    "SampledCone",
    "SignLocus",
    "algebraic_cone",
    "angle_between",
    "canonical_normal",
    "cone_is_flat",
    "f_lambda",
    "flat_normal",
    "is_flat",
    "is_symmetric",
    "meets_cone_of_rays",
    "merge_directions",
    "sampled_cone",
    "sampled_flat_normal",
    "sign_change_locus",
    "sphere_section",
    "symmetrize",
    "unit",
]
