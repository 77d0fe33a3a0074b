"""Recession and normal cones of sampled convex hypersurfaces, entire-graph test and plane slices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from src.cone.descriptors import merge_directions, unit
from src.config import config
from src.errors import AnalysisError, DimensionError
from src.expr.numeric import NumericPolynomial, ScalarField, as_field
from src.expr.polynomial import Polynomial, exact_point
from src.logger import get_logger
from src.projective.closure import fibonacci_sphere
from src.support.convexity import ConvexityResult, assess_convexity
from src.support.sampling import SampledHypersurface

logger = get_logger(__name__)

DEFAULT_T_LADDER = (1.0, 10.0, 100.0)
CIRCLE_DIRECTIONS = 720
MAX_STARTS = 64
LINE_SCAN = 4096
COEFFICIENT_FLOOR = 1e-12


@dataclass(frozen=True)
class DirectionCone:
    """Unit directions of a sampled recession or normal cone.

    Attributes:
        directions: Unit vectors merged at the angular tolerance.
        kind: "recession" or "normal".
        confidence: Per direction, the number of test lines it passed
            (recession) or of sample normals it stands for (normal).
    """

    directions: tuple[tuple[float, ...], ...]
    kind: str
    confidence: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.directions)

    def as_array(self) -> np.ndarray:
        n = len(self.directions[0]) if self.directions else 0
        return np.array(self.directions, dtype=float).reshape(-1, n)

    def near(self, u: Sequence[float], tolerance: float) -> bool:
        if not self.directions:
            return False
        return bool(np.max(self.as_array() @ unit(u)) >= np.cos(tolerance))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "directions": [list(d) for d in self.directions],
            "confidence": list(self.confidence),
        }


def direction_grid(n: int, count: int | None = None) -> np.ndarray:
    if n == 2:
        angles = np.arange(CIRCLE_DIRECTIONS) * (2 * np.pi / CIRCLE_DIRECTIONS)
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)
    if n == 3:
        return fibonacci_sphere(count if count is not None else config.numeric.sphere_samples)
    raise DimensionError(f"direction grids exist for n = 2 or 3, got {n}")


def _require_convex(S: SampledHypersurface, convexity: ConvexityResult | None) -> ConvexityResult:
    convexity = convexity if convexity is not None else assess_convexity(S)
    if not convexity.convex:
        raise AnalysisError(f"{S.label} failed the convexity test; recession cones need a convex side")
    return convexity


def inward_normals(S: SampledHypersurface, convexity: ConvexityResult) -> np.ndarray:
    return convexity.orientation * S.normals


def recession_cone_sample(
    S: SampledHypersurface,
    t_ladder: Sequence[float] = DEFAULT_T_LADDER,
    convexity: ConvexityResult | None = None,
    tol: float | None = None,
    seed: int | None = None,
) -> DirectionCone:
    """Directions u such that q + t u stays in every sampled supporting half-space.

    K is approximated by the intersection of the half-spaces bounded by the
    tangent hyperplanes of the samples, on their convex side. Each grid
    direction is shot from up to 64 seeded start samples at every t of the
    ladder; it is kept when every shot stays inside. Extending the ladder
    can only remove directions.

    Raises:
        AnalysisError: the cloud is not convex.
    """
    convexity = _require_convex(S, convexity)
    tol = tol if tol is not None else 1e-9 * S.region.scale
    rng = np.random.default_rng(seed if seed is not None else config.runtime.seed)
    normals = inward_normals(S, convexity)
    offsets = np.sum(S.points * normals, axis=1)
    grid = direction_grid(S.dimension)
    dots = normals @ grid.T

    count = min(MAX_STARTS, len(S))
    starts = rng.choice(len(S), size=count, replace=False)
    passed = np.zeros(len(grid), dtype=int)
    alive = np.ones(len(grid), dtype=bool)
    for q in starts:
        slack = S.points[q] @ normals.T - offsets
        for t in t_ladder:
            inside = np.all(slack[:, None] + t * dots >= -tol, axis=0)
            passed += inside
            alive &= inside
    if not alive.any():
        logger.info(f"recession cone of {S.label} is empty")
        return DirectionCone((), "recession")
    kept = grid[alive]
    robustness = dots[:, alive].min(axis=0)
    merged = merge_directions(kept, config.numeric.angular_tol, residuals=-robustness)
    confidence = tuple(int(passed[alive][np.argmax(kept @ d)]) for d in merged)
    logger.info(f"recession cone of {S.label}: {len(merged)} directions")
    return DirectionCone(tuple(tuple(float(x) for x in d) for d in merged), "recession", confidence)


def normal_cone_sample(S: SampledHypersurface, convexity: ConvexityResult | None = None) -> DirectionCone:
    """Outward unit normals of the convex side, merged at the angular tolerance."""
    convexity = _require_convex(S, convexity)
    outward = -inward_normals(S, convexity)
    tolerance = config.numeric.angular_tol
    merged = merge_directions(outward, tolerance)
    similarity = outward @ merged.T
    owners = np.argmax(similarity, axis=1)
    confidence = tuple(int(np.sum(owners == i)) for i in range(len(merged)))
    return DirectionCone(tuple(tuple(float(x) for x in d) for d in merged), "normal", confidence)


@dataclass(frozen=True)
class EntireGraphResult:
    """Outcome of the entire-graph search.

    Attributes:
        direction: Verified direction u, or None.
        candidate: Direction that was tested, verified or not.
        hits: Intersections of each test line with the convex hypersurface.
        reason: Why no direction was returned.
    """

    direction: tuple[float, ...] | None
    candidate: tuple[float, ...] | None
    hits: tuple[int, ...] = ()
    reason: str = ""

    @property
    def verified(self) -> bool:
        return self.direction is not None

    @property
    def single_hits(self) -> int:
        return sum(1 for h in self.hits if h == 1)

    def to_dict(self) -> dict:
        return {
            "entire_graph": self.verified,
            "direction": list(self.direction) if self.direction else None,
            "candidate": list(self.candidate) if self.candidate else None,
            "lines": len(self.hits),
            "single_hits": self.single_hits,
            "reason": self.reason,
        }


def line_parameters(field_: ScalarField, origin: np.ndarray, u: np.ndarray, reach: float) -> np.ndarray:
    """Real s in [-reach, reach] with f(origin + s u) = 0.

    Leading coefficients below COEFFICIENT_FLOOR times the largest one are
    dropped before root finding.
    """
    if isinstance(field_, NumericPolynomial):
        restricted = field_.along_line(origin, u)
        size = float(np.max(np.abs(restricted.coef)))
        if size == 0.0:
            return np.empty(0)
        restricted = restricted.trim(COEFFICIENT_FLOOR * size)
        if restricted.degree() < 1:
            return np.empty(0)
        roots = restricted.roots()
        real = roots[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots))].real
        real = real[np.abs(real) <= reach]
        return np.unique(np.round(real, 9))
    s = np.linspace(-reach, reach, LINE_SCAN)
    values = field_.value(origin + s[:, None] * u)
    found = []
    for a, b, fa, fb in zip(s[:-1], s[1:], values[:-1], values[1:]):
        if fa == 0:
            found.append(a)
        elif fa * fb < 0:
            found.append(brentq(lambda r: float(field_.value(origin + r * u)), a, b, xtol=1e-12))
    return np.array(found)


def _orthonormal_complement(u: np.ndarray) -> np.ndarray:
    _, _, vt = np.linalg.svd(u[None, :])
    return vt[1:]


def entire_graph_direction(
    f: Polynomial | ScalarField,
    S: SampledHypersurface,
    shots: int | None = None,
    seed: int | None = None,
    convexity: ConvexityResult | None = None,
) -> EntireGraphResult:
    """Look for u in rc(K) with -u an outward normal, then shoot lines parallel to u.

    Test lines pass through seeded offsets orthogonal to u spread over twice
    the region diameter. Only zeros on the convex side of every sampled
    supporting hyperplane count as hits on the hypersurface. The direction
    is returned only when every line hits exactly once.
    """
    convexity = convexity if convexity is not None else assess_convexity(S)
    if not convexity.convex:
        return EntireGraphResult(None, None, reason="convexity test failed")
    shots = shots if shots is not None else config.numeric.line_shots
    rc = recession_cone_sample(S, convexity=convexity, seed=seed)
    if not rc.directions:
        return EntireGraphResult(None, None, reason="empty recession cone: the convex set is bounded")
    nc = normal_cone_sample(S, convexity)
    tolerance = config.numeric.angular_tol
    candidates = [d for d in rc.directions if nc.near(-np.array(d), tolerance)]
    if not candidates:
        return EntireGraphResult(None, None, reason="no recession direction is opposite to an outward normal")
    normals = inward_normals(S, convexity)
    offsets = np.sum(S.points * normals, axis=1)
    best = max(candidates, key=lambda d: float(np.min(normals @ np.array(d))))
    u = np.array(best)

    rng = np.random.default_rng(seed if seed is not None else config.runtime.seed)
    field_ = as_field(f)
    center = (np.array(S.region.lower) + np.array(S.region.upper)) / 2
    reach = 2 * S.region.diameter
    basis = _orthonormal_complement(u)
    side_tol = 1e-6 * S.region.scale
    hits = []
    for _ in range(shots):
        origin = center + rng.uniform(-reach, reach, size=len(basis)) @ basis
        s = line_parameters(field_, origin, u, 4 * reach)
        points = origin + s[:, None] * u
        on_side = np.all(points @ normals.T - offsets >= -side_tol, axis=1)
        hits.append(int(np.sum(on_side)))
    hits = tuple(hits)
    candidate = tuple(float(x) for x in u)
    if all(h == 1 for h in hits):
        logger.info(f"{S.label} is an entire graph in direction {candidate}")
        return EntireGraphResult(candidate, candidate, hits)
    missed = sum(1 for h in hits if h != 1)
    logger.info(f"{S.label}: {missed}/{len(hits)} lines along {candidate} miss or cross twice")
    return EntireGraphResult(None, candidate, hits, reason=f"{missed} of {len(hits)} test lines do not meet the hypersurface exactly once")


@dataclass(frozen=True)
class StrictConvexityResult:
    """Search for segments: a supporting hyperplane touching two distant samples."""

    passed: bool
    witness: tuple[int, int] | None = None
    distance: float = 0.0

    def to_dict(self) -> dict:
        data = {"result": "passed" if self.passed else "failed", "distance": self.distance}
        if self.witness is not None:
            data["witness"] = list(self.witness)
        return data


def assess_strict_convexity(
    S: SampledHypersurface,
    convexity: ConvexityResult | None = None,
    tol: float | None = None,
    separation: float = 4.0,
) -> StrictConvexityResult:
    """Fail when a tangent hyperplane touches a sample at least ``separation`` spacings away.

    Can refute strict convexity, never certify it.
    """
    convexity = _require_convex(S, convexity)
    tol = tol if tol is not None else 1e-7 * S.region.scale
    normals = inward_normals(S, convexity)
    gap = separation * S.spacing
    for start in range(0, len(S), 256):
        q = S.points[start:start + 256]
        n = normals[start:start + 256]
        heights = S.points @ n.T - np.sum(q * n, axis=1)
        distances = np.linalg.norm(S.points[:, None, :] - q[None, :, :], axis=2)
        touching = (np.abs(heights) <= tol) & (distances >= gap)
        if touching.any():
            x, j = np.argwhere(touching)[0]
            logger.info(f"{S.label}: tangent hyperplane at sample {start + j} touches sample {x}")
            return StrictConvexityResult(False, (int(start + j), int(x)), float(distances[x, j]))
    return StrictConvexityResult(True)


def slice_plane(f: Polynomial, origin: Sequence, u: Sequence, v: Sequence, variables: tuple[str, str] = ("s", "t")) -> Polynomial:
    """Exact restriction s, t -> f(origin + s u + t v) to a 2-plane."""
    if not (len(origin) == len(u) == len(v) == f.nvars):
        raise DimensionError(f"plane data must have length {f.nvars}")
    origin, u, v = exact_point(origin), exact_point(u), exact_point(v)
    s, t = Polynomial.generators(variables)
    images = [s.scale(a) + t.scale(b) + o for o, a, b in zip(origin, u, v)]
    return f.compose(images, variables)
