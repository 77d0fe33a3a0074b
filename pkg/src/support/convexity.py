"""One-sided support test of a sample cloud against its own tangent hyperplanes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from src.logger import get_logger
from src.support.sampling import SampledHypersurface

logger = get_logger(__name__)

CHUNK = 256


@dataclass(frozen=True)
class ConvexityResult:
    """Outcome of the support-hyperplane test.

    Attributes:
        convex: Every tangent hyperplane supports the cloud.
        orientation: +1 when the cloud lies on the side of the gradient
            normals, -1 when on the opposite side.
        witness: Sample indices (q, x) of the worst violation, x lying on
            the wrong side of the hyperplane at q.
        violation: Normalized signed distance of the witness, below -eps.
    """

    convex: bool
    orientation: int
    witness: tuple[int, int] | None = None
    violation: float = 0.0

    def to_dict(self, S: SampledHypersurface | None = None) -> dict:
        data = {"convex": self.convex, "orientation": self.orientation, "violation": self.violation}
        if self.witness is not None:
            data["witness"] = list(self.witness)
            if S is not None:
                data["witness_points"] = [list(map(float, S.points[i])) for i in self.witness]
        return data


def _worst_violation(points: np.ndarray, normals: np.ndarray) -> tuple[float, tuple[int, int]]:
    """Most negative <x - q, N_q> / |x - q| over all ordered pairs."""
    worst, pair = np.inf, (0, 0)
    for start in range(0, len(points), CHUNK):
        q = points[start:start + CHUNK]
        n = normals[start:start + CHUNK]
        heights = points @ n.T - np.sum(q * n, axis=1)
        distances = cdist(points, q)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(distances > 0, heights / distances, 0.0)
        k = int(np.argmin(ratio))
        x, j = np.unravel_index(k, ratio.shape)
        if ratio[x, j] < worst:
            worst, pair = float(ratio[x, j]), (start + int(j), int(x))
    return worst, pair


def assess_convexity(S: SampledHypersurface, eps: float = 1e-6) -> ConvexityResult:
    """Test whether every sample's tangent hyperplane leaves the whole cloud on one side.

    Both global orientations of the normal field are tried, so the result
    does not depend on the sign of the defining function. Invariant under
    rigid motions of the cloud.
    """
    outcomes = []
    for orientation in (1, -1):
        worst, pair = _worst_violation(S.points, orientation * S.normals)
        outcomes.append((worst, orientation, pair))
        if worst >= -eps:
            logger.info(f"cloud of {len(S)} samples is supported on side {orientation:+d}")
            return ConvexityResult(convex=True, orientation=orientation)
    worst, orientation, pair = max(outcomes, key=lambda item: item[0])
    logger.info(f"convexity violated: samples {pair} at normalized height {worst:.3g}")
    return ConvexityResult(convex=False, orientation=orientation, witness=pair, violation=worst)
