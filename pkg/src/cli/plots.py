"""Static SVG figures of gallery entries: curve polylines, tangent rays and support circles."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import matplotlib
import numpy as np
from matplotlib.collections import LineCollection
from matplotlib.figure import Figure
from matplotlib.patches import Circle

from src.expr.polynomial import Polynomial
from src.logger import get_logger
from src.measure.hausdorff import trace_segments
from src.measure.variety import Variety
from src.projective.convex import slice_plane
from src.support.radii import SupportReport

logger = get_logger(__name__)

PLOT_RADIUS = 1.25
GRID_DIVISIONS = 256
MAX_CIRCLES = 8

matplotlib.rcParams["svg.hashsalt"] = "conelab"


@dataclass
class FigureData:
    """Everything drawn for one entry, in plot coordinates."""

    title: str
    center: tuple[float, float]
    segments: np.ndarray
    radius: float = PLOT_RADIUS
    rays: list[tuple[float, float]] = field(default_factory=list)
    circles: list[tuple[tuple[float, float], float]] = field(default_factory=list)
    axis_labels: tuple[str, str] = ("x", "y")


def curve_figure(V: Variety, p: Sequence, title: str, rays: Sequence[Sequence[float]] = (), radius: float = PLOT_RADIUS) -> FigureData:
    segments = trace_segments(V, p, radius, radius / GRID_DIVISIONS)
    return FigureData(
        title=title,
        center=(float(p[0]), float(p[1])),
        segments=segments,
        radius=radius,
        rays=[(float(d[0]), float(d[1])) for d in rays],
        axis_labels=V.variables,
    )


def surface_slice_figure(
    f: Polynomial,
    p: Sequence,
    title: str,
    u: Sequence = (1, 1, 0),
    v: Sequence = (0, 0, 1),
    radius: float = PLOT_RADIUS,
) -> FigureData:
    """Trace of the surface in the plane p + s u + t v."""
    restricted = slice_plane(f, p, u, v)
    segments = trace_segments(Variety.from_polynomial(restricted), (0, 0), radius, radius / GRID_DIVISIONS)
    return FigureData(title=f"{title} (slice)", center=(0.0, 0.0), segments=segments, radius=radius, axis_labels=("s", "t"))


def support_circles(report: SupportReport, normals: np.ndarray, count: int = MAX_CIRCLES) -> list[tuple[tuple[float, float], float]]:
    """Binding support ball at a few evenly spread samples."""
    if len(report.points) == 0:
        return []
    circles = []
    for i in np.linspace(0, len(report.points) - 1, min(count, len(report.points))).astype(int):
        side = 1.0 if report.r_plus[i] <= report.r_minus[i] else -1.0
        r = float(min(report.r_plus[i], report.r_minus[i]))
        center = report.points[i] + side * r * normals[i]
        circles.append(((float(center[0]), float(center[1])), r))
    return circles


def render_svg(data: FigureData, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig = Figure(figsize=(5, 5))
    ax = fig.subplots()
    if len(data.segments):
        ax.add_collection(LineCollection(data.segments, colors="black", linewidths=1.0))
    cx, cy = data.center
    for dx, dy in data.rays:
        ax.plot([cx, cx + 0.8 * data.radius * dx], [cy, cy + 0.8 * data.radius * dy], color="tab:blue", linewidth=1.5)
    for (x, y), r in data.circles:
        ax.add_patch(Circle((x, y), r, fill=False, linestyle="--", edgecolor="tab:green", linewidth=0.8))
    ax.plot([cx], [cy], marker="o", color="tab:red", markersize=4)
    ax.set_xlim(cx - data.radius, cx + data.radius)
    ax.set_ylim(cy - data.radius, cy + data.radius)
    ax.set_aspect("equal")
    ax.set_xlabel(data.axis_labels[0])
    ax.set_ylabel(data.axis_labels[1])
    ax.set_title(data.title, fontsize=9)
    fig.savefig(path, format="svg", metadata={"Date": None})
    logger.debug(f"figure written to {path}")
    return path
