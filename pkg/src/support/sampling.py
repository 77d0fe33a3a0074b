"""Sample clouds on hypersurfaces by grid seeding and damped Newton projection."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from src.config import config
from src.errors import DimensionError, EmptyVarietyError
from src.expr.numeric import ScalarField, as_field
from src.expr.polynomial import Polynomial
from src.logger import get_logger
from src.measure.variety import Variety, reduced

logger = get_logger(__name__)

NEWTON_ITERATIONS = 50
SINGULAR_GRADIENT = 1e-8


@dataclass(frozen=True)
class Box:
    """Axis-aligned box [lower_i, upper_i]."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise DimensionError("box bounds differ in length")
        if any(b <= a for a, b in zip(self.lower, self.upper)):
            raise ValueError("box must have positive extent in every coordinate")
        object.__setattr__(self, "lower", tuple(float(a) for a in self.lower))
        object.__setattr__(self, "upper", tuple(float(b) for b in self.upper))

    @classmethod
    def cube(cls, center: Sequence[float], half_width: float) -> Box:
        return cls(tuple(float(c) - half_width for c in center), tuple(float(c) + half_width for c in center))

    @classmethod
    def parse(cls, text: str) -> Box:
        """Parse the command-line form "a0:b0,a1:b1[,a2:b2]"."""
        try:
            pairs = [tuple(float(v) for v in piece.split(":")) for piece in text.split(",")]
        except ValueError as exc:
            raise ValueError(f"bad box {text!r}: {exc}") from exc
        if any(len(pair) != 2 for pair in pairs):
            raise ValueError(f"bad box {text!r}: expected lo:hi per coordinate")
        return cls(tuple(a for a, _ in pairs), tuple(b for _, b in pairs))

    @property
    def dimension(self) -> int:
        return len(self.lower)

    @property
    def widths(self) -> np.ndarray:
        return np.array(self.upper) - np.array(self.lower)

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.widths))

    @property
    def scale(self) -> float:
        return float(np.max(self.widths))

    def contains(self, points: np.ndarray, slack: float = 0.0) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return np.all((points >= np.array(self.lower) - slack) & (points <= np.array(self.upper) + slack), axis=-1)

    def shrink(self, factor: float, center: Sequence[float]) -> Box:
        c = np.array([float(x) for x in center])
        return Box(tuple(c + (np.array(self.lower) - c) * factor), tuple(c + (np.array(self.upper) - c) * factor))

    def to_dict(self) -> dict:
        return {"lower": list(self.lower), "upper": list(self.upper)}


@dataclass(frozen=True, eq=False)
class SampledHypersurface:
    """Points of Z(f) with unit normals, plus quarantined near-singular points.

    Attributes:
        points: Regular samples, shape (m, n).
        normals: Unit gradients at the samples, shape (m, n).
        region: Sampling box.
        spacing: Target inter-sample distance.
        quarantined: Samples where the gradient is below 1e-8.
        label: Formula of the sampled field.
    """

    points: np.ndarray
    normals: np.ndarray
    region: Box
    spacing: float
    quarantined: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))
    label: str = ""

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @cached_property
    def cloud(self) -> np.ndarray:
        """Every variety point, regular and quarantined."""
        if self.quarantined.size == 0:
            return self.points
        return np.vstack([self.points, self.quarantined])

    @cached_property
    def tree(self) -> cKDTree:
        return cKDTree(self.cloud)

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        names = ["x", "y", "z"][: self.dimension]
        header = ",".join(names + [f"n{c}" for c in names])
        np.savetxt(path, np.hstack([self.points, self.normals]), delimiter=",", header=header, comments="", fmt="%.12g")
        return path

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "region": self.region.to_dict(),
            "spacing": self.spacing,
            "samples": len(self.points),
            "quarantined": [list(q) for q in self.quarantined],
        }


def _seed_grid(region: Box, spacing: float) -> np.ndarray:
    axes = [a + spacing * np.arange(int(np.floor((b - a) / spacing)) + 1) for a, b in zip(region.lower, region.upper)]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, region.dimension)


def project_to_zero_set(field_: ScalarField, points: np.ndarray, iterations: int = NEWTON_ITERATIONS) -> np.ndarray:
    """Damped Newton steps x -= t f ∇f / |∇f|^2, halving t wherever |f| grew."""
    x = np.array(points, dtype=float)
    step = np.ones(len(x))
    value = field_.value(x)
    for _ in range(iterations):
        grad = field_.gradient(x)
        norm2 = np.sum(grad * grad, axis=1)
        moving = (norm2 > 0) & (value != 0)
        if not np.any(moving):
            break
        delta = np.zeros_like(x)
        delta[moving] = (value[moving] / norm2[moving])[:, None] * grad[moving]
        trial = x - step[:, None] * delta
        trial_value = field_.value(trial)
        better = np.abs(trial_value) <= np.abs(value)
        x = np.where(better[:, None], trial, x)
        value = np.where(better, trial_value, value)
        step = np.where(better, np.minimum(1.0, 2 * step), step / 2)
    return x


def thin_out(points: np.ndarray, radius: float, priority: np.ndarray, threads: int) -> np.ndarray:
    """Indices of a subset with pairwise distance >= radius, visiting points by priority."""
    if len(points) == 0:
        return np.empty(0, dtype=int)
    order = np.lexsort(tuple(points.T[::-1]) + (priority,))
    neighbours = cKDTree(points).query_ball_point(points, radius * (1 - 1e-12), workers=threads)
    removed = np.zeros(len(points), dtype=bool)
    kept = []
    for i in order:
        if removed[i]:
            continue
        kept.append(i)
        removed[neighbours[i]] = True
    return np.array(sorted(kept), dtype=int)


def sample_surface(
    f: Polynomial | ScalarField,
    region: Box,
    spacing: float,
    seed: int | None = None,
    threads: int | None = None,
) -> SampledHypersurface:
    """Sample Z(f) inside a box.

    Grid nodes within about one spacing of Z(f), together with a seeded
    jittered copy, are projected onto Z(f) by damped Newton. Converged
    points inside the box are split into regular samples and quarantined
    near-singular ones, and each set is thinned to spacing/2.

    Raises:
        DimensionError: f and region disagree on the dimension.
        EmptyVarietyError: No regular zero was found in the region.
    """
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    field_ = as_field(f)
    label = str(f) if isinstance(f, Polynomial) else str(field_)
    if field_.dimension != region.dimension:
        raise DimensionError(f"field in R^{field_.dimension} sampled on a box in R^{region.dimension}")
    seed = seed if seed is not None else config.runtime.seed
    threads = threads if threads is not None else config.runtime.threads
    rng = np.random.default_rng(seed)

    grid = _seed_grid(region, spacing)
    value = field_.value(grid)
    grad_norm = np.linalg.norm(field_.gradient(grid), axis=1)
    near = grid[np.abs(value) <= grad_norm * spacing]
    jittered = near + rng.uniform(-0.25, 0.25, size=near.shape) * spacing
    seeds = np.vstack([near, jittered])
    logger.debug(f"{len(seeds)} Newton seeds from a grid of {len(grid)}")

    x = project_to_zero_set(field_, seeds)
    value = field_.value(x)
    grad = field_.gradient(x)
    grad_norm = np.linalg.norm(grad, axis=1)
    converged = np.isfinite(value) & (np.abs(value) <= config.numeric.residual_tol * (1 + grad_norm)) & region.contains(x)
    singular = converged & (grad_norm < SINGULAR_GRADIENT)
    regular = converged & ~singular

    residual = np.abs(value)
    keep = np.flatnonzero(regular)[thin_out(x[regular], spacing / 2, residual[regular], threads)]
    quarantine = np.flatnonzero(singular)[thin_out(x[singular], spacing / 2, residual[singular], threads)]
    if len(keep) == 0:
        raise EmptyVarietyError(f"no regular zero of {label} in {region.to_dict()} ({len(quarantine)} singular)")
    normals = grad[keep] / grad_norm[keep, None]
    logger.info(f"sampled {len(keep)} points on {label}, {len(quarantine)} quarantined")
    return SampledHypersurface(
        points=x[keep],
        normals=normals,
        region=region,
        spacing=float(spacing),
        quarantined=x[quarantine].reshape(-1, region.dimension),
        label=label,
    )


def sample_variety(
    V: Variety,
    region: Box,
    spacing: float,
    seed: int | None = None,
    threads: int | None = None,
) -> SampledHypersurface:
    """Sample a union of patches, keeping each patch's points where its constraints hold.

    Patches are sampled on their square-free equations one at a time and
    the clouds are merged and thinned again, so a point shared by two
    patches appears once.

    Raises:
        EmptyVarietyError: No patch has a regular point in the region.
    """
    threads = threads if threads is not None else config.runtime.threads
    clouds: list[SampledHypersurface] = []
    for patch in V.patches:
        try:
            S = sample_surface(reduced(patch.equation), region, spacing, seed, threads)
        except EmptyVarietyError as exc:
            logger.debug(f"patch {patch}: {exc}")
            continue
        keep = np.ones(len(S), dtype=bool)
        hold = np.ones(len(S.quarantined), dtype=bool)
        for c in patch.constraints:
            constraint = as_field(c)
            keep &= constraint.value(S.points) >= 0
            if len(S.quarantined):
                hold &= constraint.value(S.quarantined) >= 0
        if keep.any():
            clouds.append(SampledHypersurface(S.points[keep], S.normals[keep], region, S.spacing,
                                              S.quarantined[hold].reshape(-1, region.dimension), S.label))
    if not clouds:
        raise EmptyVarietyError(f"no regular point of {V} in {region.to_dict()}")
    if len(clouds) == 1:
        return clouds[0]
    points = np.vstack([S.points for S in clouds])
    normals = np.vstack([S.normals for S in clouds])
    quarantined = np.vstack([S.quarantined for S in clouds])
    keep = thin_out(points, spacing / 2, np.zeros(len(points)), threads)
    hold = thin_out(quarantined, spacing / 2, np.zeros(len(quarantined)), threads)
    logger.info(f"sampled {len(keep)} points on {len(clouds)} patches of {V}")
    return SampledHypersurface(
        points=points[keep],
        normals=normals[keep],
        region=region,
        spacing=float(spacing),
        quarantined=quarantined[hold].reshape(-1, region.dimension),
        label=str(V),
    )
