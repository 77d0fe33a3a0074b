"""Tests for local measure and density modules."""

import math
from unittest.mock import patch

import numpy as np
import pytest

from src.cone import EmptyCone, FlatCone, RayFan
from src.errors import AnalysisError, DimensionError
from src.measure import (
    DensityEstimate,
    Variety,
    cone_density,
    local_measure,
    lower_density,
    multiplicity,
    projected_measure,
    trace_segments,
    unit_ball_measure,
)


class TestDensityEstimate:
    """Tests for ratio tables over a radius ladder."""

    def test_unit_ball_measure(self):
        assert unit_ball_measure(1, 0.5) == 1.0
        assert unit_ball_measure(2, 1.0) == pytest.approx(math.pi)
        with pytest.raises(ValueError):
            unit_ball_measure(3, 1.0)

    def test_liminf_uses_tail(self):
        estimate = DensityEstimate.from_measures(1, [1.0, 0.5, 0.25, 0.125], [4.0, 1.5, 0.75, 0.375], 1e-3)
        assert estimate.ratios == (2.0, 1.5, 1.5, 1.5)
        assert estimate.liminf_estimate == 1.5
        assert estimate.trend == "decreasing"

    def test_radii_must_decrease(self):
        with pytest.raises(ValueError):
            DensityEstimate.from_measures(1, [0.5, 1.0], [1.0, 2.0], 1e-3)

    def test_constant_ratio(self):
        estimate = DensityEstimate.constant(2, [0.5, 0.25, 0.125], 1.0)
        assert estimate.trend == "flat"
        assert estimate.liminf_estimate == pytest.approx(1.0)

    def test_csv_table(self, tmp_path):
        estimate = DensityEstimate.constant(1, [0.5, 0.25], 2.0)
        path = estimate.to_csv(tmp_path / "density.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "r,measure,ratio"
        assert len(lines) == 3


class TestLocalMeasure:
    """Tests for traced lengths and areas."""

    def test_line_length(self):
        V = Variety.from_text([("y", [])])
        assert local_measure(V, (0, 0), 0.5, 0.5 / 64) == pytest.approx(1.0, rel=1e-3)

    def test_circle_arc(self):
        V = Variety.from_text([("x^2 + y^2 - 1", [])])
        expected = 4 * math.asin(0.125)
        assert local_measure(V, (1, 0), 0.25, 0.25 / 64) == pytest.approx(expected, rel=1e-3)

    def test_constraint_halves_line(self):
        V = Variety.from_text([("y", ["x"])])
        assert local_measure(V, (0, 0), 0.5, 0.5 / 64) == pytest.approx(0.5, rel=1e-3)

    def test_plane_disc(self):
        V = Variety.from_text([("z", [])])
        assert local_measure(V, (0, 0, 0), 0.5, 0.5 / 64) == pytest.approx(math.pi / 4, rel=0.02)

    def test_capped_cube_grid_warns(self):
        V = Variety.from_text([("z", [])])
        with patch("src.measure.hausdorff.logger") as log:
            area = local_measure(V, (0, 0, 0), 0.5, 0.5 / 512)
        log.warning.assert_called_once()
        assert "160" in log.warning.call_args.args[0]
        assert area == pytest.approx(math.pi / 4, rel=0.02)

    def test_uncapped_cube_grid_is_quiet(self):
        V = Variety.from_text([("z", [])])
        with patch("src.measure.hausdorff.logger") as log:
            local_measure(V, (0, 0, 0), 0.5, 0.5 / 64)
        log.warning.assert_not_called()

    def test_resolution_guard(self):
        V = Variety.from_text([("y", [])])
        with pytest.raises(AnalysisError):
            local_measure(V, (0, 0), 0.5, 0.1)

    def test_projected_parabola(self):
        V = Variety.from_text([("y - x^2", [])])
        half_width = math.sqrt((math.sqrt(2) - 1) / 2)
        assert projected_measure(V, (0, 0), 0.5, 0.5 / 64, (1, 0)) == pytest.approx(2 * half_width, rel=1e-3)

    def test_trace_segments_in_ambient_coordinates(self):
        V = Variety.from_text([("x^2 + y^2 - 1", [])])
        segments = trace_segments(V, (1, 0), 0.25, 0.25 / 64)
        assert segments.shape[1:] == (2, 2)
        radii = np.linalg.norm(segments.reshape(-1, 2), axis=1)
        np.testing.assert_allclose(radii, 1.0, atol=1e-4)

    def test_trace_needs_plane(self):
        V = Variety.from_text([("z", [])])
        with pytest.raises(DimensionError):
            trace_segments(V, (0, 0, 0), 0.5, 0.5 / 64)


class TestMultiplicity:
    """Tests for densities of germs and their cones."""

    def test_cone_densities(self):
        assert cone_density(FlatCone.of([0, 1]), 1) == 1.0
        assert cone_density(RayFan.of([(1, 0)]), 1) == 0.5
        with pytest.raises(AnalysisError):
            cone_density(EmptyCone(), 1)

    def test_smooth_curve_density_one(self):
        V = Variety.from_text([("y - x^2", [])])
        estimate = lower_density(V, (0, 0))
        assert estimate.liminf_estimate == pytest.approx(1.0, rel=0.02)

    def test_tangent_union_has_multiplicity_two(self):
        V = Variety.from_text([("y", []), ("y - x^2", [])])
        estimate = multiplicity(V, (0, 0), FlatCone.of([0, 1]))
        assert estimate.value == pytest.approx(2.0, rel=0.05)
        assert estimate.to_dict()["cone_density"] == pytest.approx(1.0)

    def test_cusp_against_single_ray(self):
        V = Variety.from_text([("y^2 - x^3", [])])
        estimate = multiplicity(V, (0, 0), RayFan.of([(1, 0)]))
        assert estimate.value == pytest.approx(2.0, rel=0.05)
        assert estimate.numerator.liminf_estimate == pytest.approx(1.0, rel=0.05)
