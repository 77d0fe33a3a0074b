"""Tangent-cone descriptors and direction-set helpers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from src.expr.polynomial import HomogeneousForm

UNIT_TOL = 1e-12


def unit(vector: Sequence[float]) -> np.ndarray:
    v = np.asarray(vector, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("zero vector has no direction")
    return v / norm


def canonical_normal(vector: Sequence[float]) -> np.ndarray:
    """Unit normal with its first nonzero coordinate positive."""
    v = unit(vector)
    for x in v:
        if abs(x) > UNIT_TOL:
            return v if x > 0 else -v
    return v


def angle_between(u: Sequence[float], v: Sequence[float]) -> float:
    cos = float(np.clip(np.dot(unit(u), unit(v)), -1.0, 1.0))
    return float(np.arccos(cos))


def merge_directions(
    directions: np.ndarray,
    tolerance: float,
    residuals: np.ndarray | None = None,
) -> np.ndarray:
    """Greedy angular merge: keep a direction unless a kept one lies within tolerance.

    Candidates are visited by increasing residual, then lexicographically,
    so the result does not depend on input order.
    """
    directions = np.asarray(directions, dtype=float)
    if len(directions) == 0:
        return directions
    directions = directions / np.linalg.norm(directions, axis=1, keepdims=True)
    if residuals is None:
        residuals = np.zeros(len(directions))
    keys = [tuple(np.round(d, 12)) for d in directions]
    order = sorted(range(len(directions)), key=lambda i: (residuals[i], keys[i]))
    cos_tol = np.cos(tolerance)
    kept: list[np.ndarray] = []
    for i in order:
        d = directions[i]
        if kept and np.max(np.stack(kept) @ d) >= cos_tol:
            continue
        kept.append(d)
    kept.sort(key=lambda d: tuple(np.round(d, 12)))
    return np.stack(kept)


@dataclass(frozen=True)
class EmptyCone:
    kind: str = "empty"

    def to_dict(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class RayFan:
    """Finitely many rays from p."""

    directions: tuple[tuple[float, ...], ...]
    kind: str = "ray_fan"

    @classmethod
    def of(cls, directions: Iterable[Sequence[float]]) -> RayFan:
        return cls(tuple(tuple(float(x) for x in unit(d)) for d in directions))

    def as_array(self) -> np.ndarray:
        return np.array(self.directions, dtype=float)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "directions": [list(d) for d in self.directions]}


@dataclass(frozen=True)
class FlatCone:
    """Hyperplane through p with a canonical unit normal."""

    normal: tuple[float, ...]
    kind: str = "flat"

    @classmethod
    def of(cls, normal: Sequence[float]) -> FlatCone:
        return cls(tuple(float(x) for x in canonical_normal(normal)))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "normal": list(self.normal)}


@dataclass(frozen=True)
class AlgebraicCone:
    """Zero set of the leading form h_f."""

    form: HomogeneousForm
    kind: str = "algebraic"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "form": str(self.form), "degree": self.form.degree}


@dataclass(frozen=True)
class SampledCone:
    """Directions found on shrinking spheres around p.

    Attributes:
        directions: Unit vectors at the finest scale, merged at ``tolerance``.
        scale_ladder: Homothety factors λ; spheres have radius 1/λ.
        tolerance: Angular merge resolution in radians.
        drift: Per direction, the angle to the nearest direction found at
            each scale of the ladder (last entry is 0).
    """

    directions: tuple[tuple[float, ...], ...]
    scale_ladder: tuple[float, ...]
    tolerance: float
    drift: tuple[tuple[float, ...], ...] = field(default=())
    kind: str = "sampled"

    def as_array(self) -> np.ndarray:
        return np.array(self.directions, dtype=float)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "directions": [list(d) for d in self.directions],
            "scale_ladder": list(self.scale_ladder),
            "tolerance": self.tolerance,
        }


ConeDescriptor = Union[EmptyCone, RayFan, FlatCone, AlgebraicCone, SampledCone]


@dataclass(frozen=True)
class ConeOfRaysQuery:
    """C(ℓ, δ) ∩ B(p, r): rays within chord distance δ of a direction, cut at radius r."""

    center: tuple
    direction: tuple[float, ...]
    half_angle: float
    radius: float

    def __post_init__(self):
        if not 0 < self.half_angle <= 2:
            raise ValueError("half_angle must lie in (0, 2]")
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "direction", tuple(float(x) for x in unit(self.direction)))


def is_symmetric(cone: ConeDescriptor, angular_tol: float = 1e-2) -> bool:
    """True iff every direction has a direction within angular_tol of its antipode."""
    if isinstance(cone, (EmptyCone, FlatCone, AlgebraicCone)):
        return True
    directions = cone.as_array()
    if len(directions) == 0:
        return True
    cos_tol = np.cos(angular_tol)
    similarity = directions @ (-directions).T
    return bool(np.all(similarity.max(axis=1) >= cos_tol))


def symmetrize(cone: ConeDescriptor, angular_tol: float = 1e-2) -> ConeDescriptor:
    """Union of the cone with its reflection through p."""
    if isinstance(cone, (EmptyCone, FlatCone, AlgebraicCone)):
        return cone
    directions = cone.as_array()
    merged = merge_directions(np.vstack([directions, -directions]), angular_tol)
    as_tuples = tuple(tuple(float(x) for x in d) for d in merged)
    if isinstance(cone, RayFan):
        return RayFan(as_tuples)
    return SampledCone(as_tuples, cone.scale_ladder, cone.tolerance)


def cone_is_flat(cone: ConeDescriptor, angular_tol: float = 1e-2) -> np.ndarray | None:
    """Normal of a direction set that spans a hyperplane and fills it symmetrically, if any."""
    if isinstance(cone, FlatCone):
        return np.array(cone.normal)
    if not isinstance(cone, (RayFan, SampledCone)):
        return None
    directions = cone.as_array()
    n = directions.shape[1] if len(directions) else 0
    if n == 0 or not is_symmetric(cone, angular_tol):
        return None
    if n == 2:
        if len(directions) != 2:
            return None
        normal = np.array([-directions[0][1], directions[0][0]])
        return canonical_normal(normal)
    _, singular, vt = np.linalg.svd(directions, full_matrices=False)
    if singular[-1] > angular_tol * np.sqrt(len(directions)):
        return None
    return canonical_normal(vt[-1])
