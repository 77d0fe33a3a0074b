"""Homothetic sampling of tangent cones on shrinking spheres."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from src.cone.descriptors import ConeOfRaysQuery, SampledCone, merge_directions
from src.config import config
from src.errors import DimensionError, EmptyVarietyError
from src.expr.polynomial import exact_point
from src.logger import get_logger
from src.measure.variety import LocalPatch, Variety, check_on_variety

logger = get_logger(__name__)

DEFAULT_SCALE_LADDER = (1e4, 1e8, 1e12)
CIRCLE_SAMPLES = 2048
SPHERE_SCANS = 96
SCAN_SAMPLES = 480
ROOT_STEPS = 500
PERSISTENCE_ANGLE = 0.5


def _refine(scalar: Callable[[float], float], a: float, b: float) -> float:
    return float(brentq(scalar, a, b, xtol=1e-15, maxiter=ROOT_STEPS, disp=False))


def scan_zeros(g: Callable[[np.ndarray], np.ndarray], a: float, b: float, count: int, periodic: bool) -> list[float]:
    """Zeros of a scalar function of one parameter on [a, b].

    Sign changes between consecutive samples are isolated with brentq. A
    local minimum of |g| without an adjacent sign change is refined with a
    bounded minimization; if g changes sign there, both crossings are
    isolated. This catches pairs of zeros closer than the sample step.
    """
    t = np.linspace(a, b, count, endpoint=not periodic)
    values = g(t)
    step = t[1] - t[0]

    def scalar(s: float) -> float:
        return float(g(np.array([s]))[0])

    zeros: list[float] = []
    last = count if periodic else count - 1
    for k in range(last):
        j = (k + 1) % count
        t0, t1 = t[k], t[k] + step
        v0, v1 = values[k], values[j]
        if v0 == 0:
            zeros.append(float(t0))
            continue
        if v0 * v1 < 0:
            zeros.append(_refine(scalar, t0, t1))
    magnitude = np.abs(values)
    for k in range(count):
        if not periodic and (k == 0 or k == count - 1):
            continue
        i, j = (k - 1) % count, (k + 1) % count
        if values[k] == 0 or not (magnitude[k] <= magnitude[i] and magnitude[k] <= magnitude[j]):
            continue
        if values[i] * values[k] <= 0 or values[k] * values[j] <= 0:
            continue
        sign = np.sign(values[k])
        lo, hi = t[k] - step, t[k] + step
        found = minimize_scalar(lambda s: sign * scalar(s), bounds=(lo, hi), method="bounded",
                                options={"xatol": 1e-15 * max(1.0, abs(t[k])), "maxiter": 200})
        if found.fun < 0:
            mid = float(found.x)
            for left, right in ((lo, mid), (mid, hi)):
                if scalar(left) * scalar(right) < 0:
                    zeros.append(_refine(scalar, left, right))
    if periodic:
        zeros = [(z - a) % (b - a) + a for z in zeros]
    return sorted(set(zeros))


def sphere_section(local: LocalPatch, radius: float, n: int, offset: float = 0.0) -> np.ndarray:
    """Points of the recentred patch on the sphere of the given radius about the origin."""
    if n == 2:
        def g(theta: np.ndarray) -> np.ndarray:
            return local.equation.value(radius * np.stack([np.cos(theta), np.sin(theta)], axis=-1))

        angles = np.array(scan_zeros(g, offset, offset + 2 * np.pi, CIRCLE_SAMPLES, periodic=True))
        points = radius * np.stack([np.cos(angles), np.sin(angles)], axis=-1) if len(angles) else np.empty((0, 2))
    elif n == 3:
        points = _sphere_section_3d(local, radius, offset)
    else:
        raise DimensionError(f"sphere sections need n in (2, 3), got {n}")
    if len(points):
        points = points[local.admissible(points)]
    return points


def _spherical(radius: float, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    return radius * np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
    )


def _sphere_section_3d(local: LocalPatch, radius: float, offset: float) -> np.ndarray:
    found = []
    for phi in offset + np.arange(SPHERE_SCANS) * (2 * np.pi / SPHERE_SCANS):
        def meridian(theta: np.ndarray, phi=phi) -> np.ndarray:
            return local.equation.value(_spherical(radius, theta, np.full_like(theta, phi)))

        for theta in scan_zeros(meridian, 1e-9, np.pi - 1e-9, SCAN_SAMPLES, periodic=False):
            found.append(_spherical(radius, np.array(theta), np.array(phi)))
    for theta in (np.arange(SPHERE_SCANS) + 0.5) * (np.pi / SPHERE_SCANS):
        def parallel(phi: np.ndarray, theta=theta) -> np.ndarray:
            return local.equation.value(_spherical(radius, np.full_like(phi, theta), phi))

        for phi in scan_zeros(parallel, offset, offset + 2 * np.pi, SCAN_SAMPLES, periodic=True):
            found.append(_spherical(radius, np.array(theta), np.array(phi)))
    return np.array(found).reshape(-1, 3)


def local_patches(V: Variety, p: Sequence) -> list[LocalPatch]:
    return [LocalPatch(patch, p) for patch in V.patches]


def variety_section(patches: Sequence[LocalPatch], radius: float, n: int, offset: float) -> np.ndarray:
    sections = [sphere_section(local, radius, n, offset) for local in patches]
    return np.vstack(sections) if sections else np.empty((0, n))


def persistent_directions(
    per_scale: Sequence[np.ndarray],
    tolerance: float,
    max_drift: float = PERSISTENCE_ANGLE,
) -> tuple[np.ndarray, list[tuple[float, ...]]]:
    """Finest-scale directions with a converging counterpart at every scale.

    A direction persists when every scale has a direction within
    ``max_drift`` of it and the drift does not grow by more than
    ``tolerance`` from one scale to the next finer one. Branches tangent
    to their limit ray approach it at a polynomial rate, so coarse scales
    may lie well outside ``tolerance`` while still converging.

    Returns:
        The kept directions and, for each, its drift at every scale.
    """
    finest = np.asarray(per_scale[-1], dtype=float)
    kept, drifts = [], []
    for u in finest:
        drift = tuple(float(np.arccos(np.clip(np.max(np.asarray(level) @ u), -1.0, 1.0))) for level in per_scale)
        if max(drift) > max_drift:
            continue
        if any(fine > coarse + tolerance for coarse, fine in zip(drift, drift[1:])):
            continue
        kept.append(u)
        drifts.append(drift)
    dropped = len(finest) - len(kept)
    if dropped:
        logger.debug(f"{dropped} finest-scale directions did not persist")
    return np.array(kept, dtype=float).reshape(-1, finest.shape[1]), drifts


def sampled_cone(
    V: Variety,
    p: Sequence,
    scale_ladder: Sequence[float] = DEFAULT_SCALE_LADDER,
    tolerance: float | None = None,
    seed: int | None = None,
) -> SampledCone:
    """Sample the tangent cone as the outer limit of homothetic expansions.

    At each scale λ the variety is cut with the sphere of radius 1/λ around
    p; directions of the cut points are merged at ``tolerance``. The
    result keeps the finest-scale directions that persist across the
    ladder (see ``persistent_directions``) and records, for each, its
    angular drift to the nearest direction at every scale.

    Args:
        V: Variety containing p.
        p: Point of V, rational or float.
        scale_ladder: Increasing homothety factors, at least three.
        tolerance: Angular merge resolution in radians.
        seed: Seed for the scan-grid offset.

    Raises:
        NotOnVarietyError: p is not on V within 1e-9.
        EmptyVarietyError: Some sphere misses the variety, or no direction persists.
    """
    ladder = tuple(float(s) for s in scale_ladder)
    if len(ladder) < 3 or any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("scale ladder must be increasing with at least three entries")
    tolerance = tolerance if tolerance is not None else config.numeric.angular_tol
    seed = seed if seed is not None else config.runtime.seed
    p = exact_point(p)
    check_on_variety(V, p)
    n = V.dimension
    rng = np.random.default_rng(seed)
    offset = float(rng.uniform(0.0, 2 * np.pi / CIRCLE_SAMPLES))
    patches = local_patches(V, p)

    per_scale = []
    for lam in ladder:
        radius = 1.0 / lam
        points = variety_section(patches, radius, n, offset)
        if len(points) == 0:
            raise EmptyVarietyError(f"no variety points on the sphere of radius {radius:g} around p")
        directions = points / np.linalg.norm(points, axis=1, keepdims=True)
        residual = np.min(np.abs(np.stack([local.equation.value(points) for local in patches])), axis=0)
        per_scale.append(merge_directions(directions, tolerance, residual))
        logger.debug(f"scale {lam:g}: {len(points)} points, {len(per_scale[-1])} directions")

    kept, drift = persistent_directions(per_scale, tolerance)
    if len(kept) == 0:
        raise EmptyVarietyError("no direction persists across the scale ladder")
    return SampledCone(
        directions=tuple(tuple(float(x) for x in u) for u in kept),
        scale_ladder=ladder,
        tolerance=tolerance,
        drift=tuple(drift),
    )


def meets_cone_of_rays(V: Variety, query: ConeOfRaysQuery, levels: int = 40) -> bool:
    """Finite-scale test that C(ℓ, δ) ∩ B(p, r) contains a point of V other than p."""
    p = exact_point(query.center)
    patches = local_patches(V, p)
    direction = np.array(query.direction)
    for k in range(levels):
        radius = query.radius * 2.0 ** (-k) * (1 - 1e-9)
        points = variety_section(patches, radius, V.dimension, 0.0)
        if len(points) == 0:
            continue
        directions = points / np.linalg.norm(points, axis=1, keepdims=True)
        if np.min(np.linalg.norm(directions - direction, axis=1)) <= query.half_angle:
            return True
    return False
