"""Locate the singular points of a plane curve in a box and classify each."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
from scipy.optimize import least_squares

from src.classify.graph import classify_point
from src.classify.state import ClassifyOptions
from src.classify.verdict import Verdict
from src.config import config
from src.errors import DimensionError
from src.expr.numeric import NumericPolynomial
from src.expr.polynomial import Polynomial
from src.logger import get_logger
from src.measure.variety import Variety, reduced
from src.support.sampling import Box

logger = get_logger(__name__)

GRID = 81
MAX_SEEDS = 96
DENOMINATOR_CAP = 10000
MERGE_DISTANCE = 1e-6


def _residuals(f: NumericPolynomial):
    def residual(x: np.ndarray) -> np.ndarray:
        return np.concatenate([[f.value(x)], f.gradient(x)])

    return residual


def candidate_points(f: Polynomial, region: Box, grid: int = GRID) -> list[np.ndarray]:
    """Float solutions of f = ∇f = 0 polished from the grid nodes where |f| + |∇f| is smallest."""
    g = NumericPolynomial(f)
    axes = [np.linspace(a, b, grid) for a, b in zip(region.lower, region.upper)]
    nodes = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 2)
    size = np.abs(g.value(nodes)) + np.linalg.norm(g.gradient(nodes), axis=1)
    seeds = nodes[np.argsort(size, kind="stable")[:MAX_SEEDS]]
    residual = _residuals(g)
    found: list[np.ndarray] = []
    for seed in seeds:
        fit = least_squares(residual, seed, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        x = fit.x
        if not region.contains(x[None, :], slack=1e-9)[0] or np.max(np.abs(residual(x))) > 1e-8:
            continue
        if any(np.linalg.norm(x - y) < MERGE_DISTANCE for y in found):
            continue
        found.append(x)
    return found


def rational_singular_points(f: Polynomial, region: Box) -> list[tuple[Fraction, ...]]:
    """Singular points of Z(f) in the region that are exact rationals of small height."""
    exact = []
    for x in candidate_points(f, region):
        point = tuple(Fraction(float(v)).limit_denominator(DENOMINATOR_CAP) for v in x)
        if f.evaluate(point) == 0 and all(d.evaluate(point) == 0 for d in f.gradient):
            if point not in exact:
                exact.append(point)
        else:
            logger.warning(f"singular point near {tuple(float(v) for v in x)} is not a small rational; skipped")
    return sorted(exact)


def classify_curve(
    f: Polynomial,
    region: Box,
    options: ClassifyOptions | None = None,
    threads: int | None = None,
) -> list[tuple[tuple[Fraction, ...], Verdict]]:
    """Classify every singular point of the plane curve Z(f) inside the region.

    Points are classified in parallel; the result is sorted by point.
    Regular curves give an empty list.
    """
    if f.nvars != 2 or region.dimension != 2:
        raise DimensionError("classify_curve needs a bivariate polynomial and a planar box")
    f = reduced(f)
    points = rational_singular_points(f, region)
    logger.info(f"{len(points)} singular points of {f} in {region.to_dict()}")
    if not points:
        return []
    V = Variety.from_polynomial(f)
    threads = threads if threads is not None else config.runtime.threads
    with ThreadPoolExecutor(max_workers=min(threads, len(points))) as pool:
        verdicts = list(pool.map(lambda p: classify_point(V, p, options), points))
    return list(zip(points, verdicts))
