"""Local Hausdorff measure of a variety inside a ball.

Curves are traced with marching squares (``skimage.measure.find_contours``)
on a log-polar grid centred at p, so cells shrink with the distance to p
and thin features of a germ such as the two sheets of a cusp stay
resolved. Surfaces are triangulated with marching cubes on a Cartesian
grid. Each irreducible component of each patch is traced separately and
constraint signs are honoured by clipping pieces at interpolated zero
crossings.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
from skimage import measure as skmeasure

from src.errors import AnalysisError, DimensionError
from src.expr.numeric import NumericPolynomial
from src.expr.polynomial import exact_point
from src.logger import get_logger
from src.measure.variety import LocalPatch, Variety

logger = get_logger(__name__)

GRID_OFFSET = (0.3183098861837907, 0.2718281828459045, 0.1414213562373095)
INNER_CUTOFF = 1e-4
MIN_ANGLES = 1024
MAX_ANGLES = 4096
RADIAL_STRETCH = 4
MAX_CUBE_SIDE = 160
SUBDIVISION_DEPTH = 3


def _check_resolution(r: float, resolution: float) -> None:
    if r <= 0:
        raise ValueError("radius must be positive")
    if resolution <= 0 or resolution > r / 32:
        raise AnalysisError(f"resolution {resolution:g} is coarser than r/32 = {r / 32:g}")


def _polar_grid(r: float, resolution: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Log-radius and angle axes plus the Cartesian image of their product."""
    count = int(np.clip(np.ceil(2 * np.pi * r / resolution), MIN_ANGLES, MAX_ANGLES))
    dtheta = 2 * np.pi / count
    u_max = math.log(r)
    u_min = u_max + math.log(INNER_CUTOFF)
    steps = int(np.ceil((u_max - u_min) / (RADIAL_STRETCH * dtheta)))
    u = np.linspace(u_min, u_max, steps + 1)
    theta = GRID_OFFSET[0] * dtheta + dtheta * np.arange(count + 1)
    uu, tt = np.meshgrid(u, theta, indexing="ij")
    s = np.exp(uu)
    cartesian = np.stack([s * np.cos(tt), s * np.sin(tt)], axis=-1)
    return u, theta, cartesian


def _interval_from_signs(ca: np.ndarray, cb: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Narrow [lo, hi] to where the linear interpolant of (ca, cb) is >= 0."""
    with np.errstate(divide="ignore", invalid="ignore"):
        crossing = np.where(ca != cb, ca / (ca - cb), 0.0)
    a_in, b_in = ca >= 0, cb >= 0
    hi = np.where(~a_in & ~b_in, -1.0, hi)
    hi = np.where(a_in & ~b_in, np.minimum(hi, crossing), hi)
    lo = np.where(~a_in & b_in, np.maximum(lo, crossing), lo)
    return lo, hi


def _component_segments(
    g: NumericPolynomial,
    constraints: Sequence[NumericPolynomial],
    u: np.ndarray,
    theta: np.ndarray,
    cartesian: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    values = g.value(cartesian)
    du, dtheta = u[1] - u[0], theta[1] - theta[0]
    starts, ends = [], []
    for contour in skmeasure.find_contours(values, 0.0):
        s = np.exp(u[0] + contour[:, 0] * du)
        angle = theta[0] + contour[:, 1] * dtheta
        points = np.stack([s * np.cos(angle), s * np.sin(angle)], axis=-1)
        starts.append(points[:-1])
        ends.append(points[1:])
    if not starts:
        return np.empty((0, 2)), np.empty((0, 2))
    a, b = np.vstack(starts), np.vstack(ends)
    if not constraints:
        return a, b
    lo, hi = np.zeros(len(a)), np.ones(len(a))
    for c in constraints:
        lo, hi = _interval_from_signs(c.value(a), c.value(b), lo, hi)
    keep = hi > lo
    direction = b - a
    return (a + lo[:, None] * direction)[keep], (a + hi[:, None] * direction)[keep]


def _curve_segments(V: Variety, p: Sequence, r: float, resolution: float) -> tuple[np.ndarray, np.ndarray]:
    """Clipped polyline pieces of V inside B(p, r), in coordinates centred at p."""
    u, theta, cartesian = _polar_grid(r, resolution)
    starts, ends = [], []
    for patch in V.patches:
        local = LocalPatch(patch, p)
        for g in local.components:
            a, b = _component_segments(g, local.constraints, u, theta, cartesian)
            starts.append(a)
            ends.append(b)
    logger.debug(f"traced {sum(len(a) for a in starts)} segments on a {cartesian.shape[0]}x{cartesian.shape[1]} log-polar grid")
    return np.vstack(starts), np.vstack(ends)


def _triangle_areas(triangles: np.ndarray) -> np.ndarray:
    a, b, c = triangles[:, 0], triangles[:, 1], triangles[:, 2]
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


def _clipped_area(triangles: np.ndarray, tests: Sequence[Callable[[np.ndarray], np.ndarray]], depth: int) -> list[float]:
    """Area of the part of the triangles where every test is >= 0.

    Triangles whose vertices disagree are split into four until ``depth``
    runs out; the centroid decides the remaining ones.
    """
    if len(triangles) == 0:
        return []
    kept = np.ones(len(triangles), dtype=bool)
    dropped = np.zeros(len(triangles), dtype=bool)
    for test in tests:
        inside = test(triangles) >= 0
        kept &= inside.all(axis=1)
        dropped |= ~inside.any(axis=1)
    mixed = ~kept & ~dropped
    pieces = list(_triangle_areas(triangles[kept]))
    straddling = triangles[mixed]
    if len(straddling) == 0:
        return pieces
    if depth == 0:
        centroid = straddling.mean(axis=1)
        ok = np.ones(len(straddling), dtype=bool)
        for test in tests:
            ok &= test(centroid) >= 0
        return pieces + list(_triangle_areas(straddling[ok]))
    a, b, c = straddling[:, 0], straddling[:, 1], straddling[:, 2]
    ab, bc, ca = (a + b) / 2, (b + c) / 2, (c + a) / 2
    children = np.concatenate([
        np.stack([a, ab, ca], axis=1),
        np.stack([ab, b, bc], axis=1),
        np.stack([ca, bc, c], axis=1),
        np.stack([ab, bc, ca], axis=1),
    ])
    return pieces + _clipped_area(children, tests, depth - 1)


def _surface_area(V: Variety, p: Sequence, r: float, resolution: float) -> float:
    h = max(resolution, 2 * r / (MAX_CUBE_SIDE - 4))
    if h > resolution:
        logger.warning(f"resolution {resolution:g} needs more than {MAX_CUBE_SIDE} cubes per side; using spacing {h:g}")
    count = int(np.ceil(r / h)) + 2
    axes = [(np.arange(-count, count + 1) + offset) * h for offset in GRID_OFFSET]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    origin = np.array([axis[0] for axis in axes])

    def in_ball(points: np.ndarray) -> np.ndarray:
        return r * r - np.sum(points * points, axis=-1)

    pieces: list[float] = []
    for patch in V.patches:
        local = LocalPatch(patch, p)
        tests = [in_ball] + [c.value for c in local.constraints]
        for g in local.components:
            try:
                verts, faces, _, _ = skmeasure.marching_cubes(g.value(grid), level=0.0, spacing=(h, h, h))
            except ValueError:
                # no sign change inside the grid
                continue
            triangles = (verts + origin)[faces]
            pieces.extend(_clipped_area(triangles, tests, SUBDIVISION_DEPTH))
    return math.fsum(pieces)


def local_measure(V: Variety, p: Sequence, r: float, resolution: float) -> float:
    """H^d(V ∩ B(p, r)) with d = n - 1.

    Args:
        V: Curve in the plane or surface in space.
        p: Centre of the ball.
        r: Ball radius.
        resolution: Grid spacing, at most r/32.

    Raises:
        AnalysisError: resolution is coarser than r/32.
        DimensionError: V is not in R^2 or R^3.
    """
    _check_resolution(r, resolution)
    p = exact_point(p)
    if V.dimension == 2:
        a, b = _curve_segments(V, p, r, resolution)
        return math.fsum(np.linalg.norm(b - a, axis=1))
    if V.dimension == 3:
        return _surface_area(V, p, r, resolution)
    raise DimensionError(f"local measure needs n in (2, 3), got {V.dimension}")


def projected_measure(V: Variety, p: Sequence, r: float, resolution: float, direction: Sequence[float]) -> float:
    """Length of the orthogonal projection of the curve piece V ∩ B(p, r) onto a line through p."""
    _check_resolution(r, resolution)
    if V.dimension != 2:
        raise DimensionError("projected measure is defined for plane curves")
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    a, b = _curve_segments(V, exact_point(p), r, resolution)
    if len(a) == 0:
        return 0.0
    ta, tb = a @ u, b @ u
    lo, hi = np.minimum(ta, tb), np.maximum(ta, tb)
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    reach = np.maximum.accumulate(np.concatenate([[-np.inf], hi[:-1]]))
    return math.fsum(np.maximum(0.0, hi - np.maximum(lo, reach)))


def trace_segments(V: Variety, p: Sequence, r: float, resolution: float) -> np.ndarray:
    """Polyline pieces of the curve inside B(p, r) as an (m, 2, 2) array in ambient coordinates."""
    _check_resolution(r, resolution)
    if V.dimension != 2:
        raise DimensionError("segment tracing is defined for plane curves")
    p = exact_point(p)
    a, b = _curve_segments(V, p, r, resolution)
    shift = np.array([float(x) for x in p])
    return np.stack([a + shift, b + shift], axis=1)
