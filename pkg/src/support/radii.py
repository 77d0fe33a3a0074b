"""One-sided and double support radii of a sample cloud, and the normal modulus."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from src.config import config
from src.logger import get_logger
from src.support.sampling import SampledHypersurface

logger = get_logger(__name__)

BISECTIONS = 30
BALL_SLACK = 1e-3


def _punctured(S: SampledHypersurface, points: np.ndarray, normals: np.ndarray, radii: np.ndarray, threads: int) -> np.ndarray:
    """Whether the open ball of radius r tangent at each point along its normal holds another sample.

    The ball is shrunk by BALL_SLACK spacings so the tangency sample itself never counts.
    """
    slack = BALL_SLACK * S.spacing
    centers = points + radii[:, None] * normals
    reach = np.maximum(radii - slack, 0.0)
    counts = S.tree.query_ball_point(centers, reach, return_length=True, workers=threads)
    return (np.asarray(counts) > 0) & (reach > 0)


def support_radii(
    S: SampledHypersurface,
    indices: Sequence[int] | np.ndarray,
    side: int,
    r_max: float | None = None,
    threads: int | None = None,
) -> np.ndarray:
    """Vectorized bisection for the largest unpunctured tangent ball at each sample.

    The ball of radius r touching sample q from ``side`` (+1 along the
    normal, -1 against it) is centred at q + side*r*N. Balls of growing r
    are nested, so puncturing is monotone in r. A sample whose ball is
    already punctured at twice the spacing gets radius 0.
    """
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    r_max = float(r_max) if r_max is not None else S.region.diameter
    threads = threads if threads is not None else config.runtime.threads
    indices = np.asarray(indices, dtype=int)
    points = S.points[indices]
    normals = side * S.normals[indices]
    m = len(indices)
    tiny = min(2 * S.spacing, r_max)

    result = np.full(m, r_max)
    open_at_max = ~_punctured(S, points, normals, np.full(m, r_max), threads)
    closed_at_tiny = _punctured(S, points, normals, np.full(m, tiny), threads)
    result[closed_at_tiny] = 0.0
    search = ~open_at_max & ~closed_at_tiny
    lo = np.full(int(search.sum()), tiny)
    hi = np.full(int(search.sum()), r_max)
    p, n = points[search], normals[search]
    for _ in range(BISECTIONS):
        mid = (lo + hi) / 2
        hit = _punctured(S, p, n, mid, threads)
        hi = np.where(hit, mid, hi)
        lo = np.where(hit, lo, mid)
    result[search] = lo
    return result


def support_radius(S: SampledHypersurface, q: int, side: int, r_max: float | None = None) -> float:
    """Largest r <= r_max whose tangent ball at sample q on the given side misses the cloud."""
    return float(support_radii(S, [q], side, r_max)[0])


@dataclass(frozen=True, eq=False)
class SupportReport:
    """Per-sample support radii and their infima.

    Attributes:
        points: Samples the radii belong to.
        r_plus: Radii on the side of the normal.
        r_minus: Radii on the opposite side.
        uniform_r: Infimum of max(r_plus, r_minus): positive support.
        double_uniform_r: Infimum of min(r_plus, r_minus): double positive support.
        threshold: Radius under which a side counts as failing.
        failures: Samples where some side radius is below the threshold.
        r_max: Search cap.
    """

    points: np.ndarray
    r_plus: np.ndarray
    r_minus: np.ndarray
    uniform_r: float
    double_uniform_r: float
    threshold: float
    r_max: float
    failures: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))

    def to_dict(self, per_sample: bool = False) -> dict:
        data = {
            "samples": len(self.points),
            "uniform_r": self.uniform_r,
            "double_uniform_r": self.double_uniform_r,
            "threshold": self.threshold,
            "r_max": self.r_max,
            "failures": [list(map(float, w)) for w in self.failures[:16]],
            "failure_count": len(self.failures),
        }
        if per_sample:
            data["per_sample"] = [
                {"point": list(map(float, q)), "r_plus": float(a), "r_minus": float(b)}
                for q, a, b in zip(self.points, self.r_plus, self.r_minus)
            ]
        return data


def positive_support(
    S: SampledHypersurface,
    r_max: float | None = None,
    threshold: float | None = None,
    threads: int | None = None,
) -> SupportReport:
    """Support radii on both sides of every regular sample.

    Adding samples can only lower the estimates.
    """
    r_max = float(r_max) if r_max is not None else S.region.diameter
    threshold = threshold if threshold is not None else config.verdict.support_threshold * S.region.scale
    indices = np.arange(len(S))
    r_plus = support_radii(S, indices, 1, r_max, threads)
    r_minus = support_radii(S, indices, -1, r_max, threads)
    failing = np.minimum(r_plus, r_minus) < threshold
    report = SupportReport(
        points=S.points,
        r_plus=r_plus,
        r_minus=r_minus,
        uniform_r=float(np.min(np.maximum(r_plus, r_minus))),
        double_uniform_r=float(np.min(np.minimum(r_plus, r_minus))),
        threshold=float(threshold),
        r_max=r_max,
        failures=S.points[failing],
    )
    logger.info(f"support on {S.label}: uniform {report.uniform_r:.4g}, double {report.double_uniform_r:.4g}")
    return report


@dataclass(frozen=True)
class NormalModulus:
    """Largest angle between tangent hyperplanes of samples closer than each distance."""

    distances: tuple[float, ...]
    angles: tuple[float, ...]
    constant: float
    bound: float
    pairs: tuple[tuple[int, int] | None, ...] = ()

    @property
    def within_bound(self) -> bool:
        return self.constant <= self.bound

    def persistent_jump(self, angle: float) -> bool:
        """True when every distance of the ladder has a pair whose normals differ by more than ``angle``."""
        return bool(self.angles) and min(self.angles) > angle

    def to_dict(self) -> dict:
        return {
            "distances": list(self.distances),
            "angles": list(self.angles),
            "constant": self.constant,
            "bound": self.bound,
            "within_bound": self.within_bound,
        }


def normal_jump(S: SampledHypersurface, delta: float) -> tuple[float, tuple[int, int] | None]:
    """Largest angle between the normal lines of two regular samples closer than delta, and the pair."""
    pairs = S.tree.query_pairs(delta, output_type="ndarray")
    if len(pairs):
        pairs = pairs[(pairs[:, 0] < len(S)) & (pairs[:, 1] < len(S))]
    if len(pairs) == 0:
        return 0.0, None
    cosines = np.abs(np.sum(S.normals[pairs[:, 0]] * S.normals[pairs[:, 1]], axis=1))
    worst = int(np.argmin(cosines))
    i, j = sorted(int(k) for k in pairs[worst])
    return float(np.arccos(np.clip(cosines[worst], -1.0, 1.0))), (i, j)


def normal_modulus(
    S: SampledHypersurface,
    multiples: Sequence[float] = (2, 4, 8, 16),
    bound: float = 10.0,
) -> NormalModulus:
    """Empirical angular modulus of continuity of the unoriented normal field.

    For each distance δ = k * spacing the largest angle between the normal
    lines of two samples at distance < δ is recorded; ``constant`` is the
    largest angle/δ ratio and is compared with ``bound``.
    """
    distances, angles, pairs = [], [], []
    for k in multiples:
        delta = float(k) * S.spacing
        worst, pair = normal_jump(S, delta)
        distances.append(delta)
        angles.append(worst)
        pairs.append(pair)
    constant = max(a / d for a, d in zip(angles, distances))
    return NormalModulus(tuple(distances), tuple(angles), float(constant), float(bound), tuple(pairs))
