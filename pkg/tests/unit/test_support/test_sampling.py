"""Tests for sampling module."""

import numpy as np
import pytest

from src.errors import DimensionError, EmptyVarietyError
from src.expr import parse
from src.expr.numeric import horseshoe_field
from src.measure import Variety
from src.support import Box, project_to_zero_set, sample_surface, sample_variety, thin_out
from src.expr import NumericPolynomial


class TestBox:
    """Tests for the sampling box."""

    def test_parse(self):
        box = Box.parse("-1:1,0:4")
        assert box.lower == (-1.0, 0.0)
        assert box.upper == (1.0, 4.0)
        assert box.dimension == 2
        assert box.scale == 4.0

    @pytest.mark.parametrize("text", ["1:0,0:1", "a:b", "0:1:2,0:1", "0:1,"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            Box.parse(text)

    def test_cube_and_contains(self):
        box = Box.cube((0, 0, 0), 0.5)
        assert box.diameter == pytest.approx(np.sqrt(3))
        assert box.contains(np.array([[0.5, 0.0, 0.0], [0.6, 0.0, 0.0]])).tolist() == [True, False]

    def test_shrink_about_center(self):
        box = Box.cube((1, 1), 1.0).shrink(0.1, (1, 1))
        np.testing.assert_allclose(box.lower, (0.9, 0.9))
        np.testing.assert_allclose(box.upper, (1.1, 1.1))

    def test_bounds_must_match(self):
        with pytest.raises(DimensionError):
            Box((0.0,), (1.0, 1.0))


class TestSampleSurface:
    """Tests for Newton projection and thinning."""

    def test_circle_samples_on_curve(self):
        S = sample_surface(parse("x^2 + y^2 - 1"), Box.parse("-1.5:1.5,-1.5:1.5"), 0.05, seed=1, threads=1)
        radii = np.linalg.norm(S.points, axis=1)
        np.testing.assert_allclose(radii, 1.0, atol=1e-8)
        np.testing.assert_allclose(np.abs(np.sum(S.normals * S.points, axis=1)), 1.0, atol=1e-8)
        assert 100 < len(S) < 300

    def test_seeded_sampling_is_deterministic(self):
        f = parse("y - x^2")
        box = Box.parse("-1:1,-1:1")
        a = sample_surface(f, box, 0.05, seed=3, threads=1)
        b = sample_surface(f, box, 0.05, seed=3, threads=2)
        np.testing.assert_array_equal(a.points, b.points)

    def test_samples_respect_spacing(self):
        S = sample_surface(parse("y - x^2"), Box.parse("-1:1,-1:1"), 0.05, seed=1, threads=1)
        pairs = S.tree.query_pairs(0.025 * (1 - 1e-9))
        assert not pairs

    def test_empty_region(self):
        with pytest.raises(EmptyVarietyError):
            sample_surface(parse("x^2 + y^2 + 1"), Box.parse("-1:1,-1:1"), 0.1)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            sample_surface(parse("x + y"), Box.parse("-1:1,-1:1,-1:1"), 0.1)

    def test_non_polynomial_field(self):
        S = sample_surface(horseshoe_field(), Box.parse("-0.9:0.9,-1:4"), 0.05, seed=1, threads=1)
        residual = S.points[:, 0] ** 2 + np.exp(-S.points[:, 1]) - 1
        assert np.max(np.abs(residual)) < 1e-8

    def test_csv_export(self, tmp_path):
        S = sample_surface(parse("y - x^2"), Box.parse("-1:1,-1:1"), 0.1, seed=1, threads=1)
        lines = S.to_csv(tmp_path / "cloud.csv").read_text().splitlines()
        assert lines[0] == "x,y,nx,ny"
        assert len(lines) == len(S) + 1


class TestHelpers:
    """Tests for projection and thinning helpers."""

    def test_projection_lands_on_zero_set(self):
        field = NumericPolynomial(parse("x^2 + y^2 - 1"))
        projected = project_to_zero_set(field, np.array([[2.0, 0.0], [0.3, 0.4]]))
        np.testing.assert_allclose(np.linalg.norm(projected, axis=1), 1.0, atol=1e-10)

    def test_thin_out_prefers_priority(self):
        points = np.array([[0.0, 0.0], [0.01, 0.0], [1.0, 0.0]])
        kept = thin_out(points, 0.1, np.array([1.0, 0.0, 0.0]), threads=1)
        assert kept.tolist() == [1, 2]


class TestSampleVariety:
    """Tests for sampling unions of constrained patches."""

    def test_constraint_drops_half(self):
        V = Variety.from_text([("y - x^2", ["x"])])
        S = sample_variety(V, Box.parse("-1:1,-1:1"), 0.05, seed=1, threads=1)
        assert np.all(S.points[:, 0] >= 0)

    def test_union_merges_clouds(self):
        V = Variety.from_text([("y", []), ("y - x^2", [])])
        S = sample_variety(V, Box.parse("-1:1,-1:1"), 0.05, seed=1, threads=1)
        on_line = np.abs(S.points[:, 1]) < 1e-9
        assert on_line.any() and (~on_line).any()
