"""Tests for homogenization, closure and convex-set modules."""

from fractions import Fraction

import numpy as np
import pytest

from src.errors import AnalysisError, DegenerateError, DimensionError
from src.expr import NumericPolynomial, leading_form, parse
from src.projective import (
    ProjectivePoly,
    dehomogenize,
    entire_graph_direction,
    equivalent_quadratic_cones,
    homogenize,
    normal_cone_sample,
    p_transform,
    p_transform_identity,
    projective_closure,
    quadratic_signature,
    recession_cone_sample,
    slice_plane,
    assess_strict_convexity,
    swap_chart,
)
from src.projective.convex import line_parameters
from src.support import Box, sample_surface


@pytest.fixture(scope="module")
def parabola_cloud():
    return sample_surface(parse("y - x^2"), Box.parse("-2:2,-1:4"), 0.05, seed=42, threads=2)


class TestHomogenize:
    """Tests for homogenization and charts."""

    def test_homogenize_parabola(self):
        F = homogenize(parse("y - x^2"))
        assert F.degree == 2
        assert F.variables == ("x", "y", "w")
        assert dict(F.base.terms) == {(0, 1, 1): 1, (2, 0, 0): -1}

    def test_dehomogenize_is_inverse(self):
        f = parse("y*(1 - x^2) - 1")
        assert dehomogenize(homogenize(f)) == f

    def test_larger_degree(self):
        F = homogenize(parse("x - y"), degree=3)
        assert all(sum(e) == 3 for e in F.base.terms)
        with pytest.raises(DimensionError):
            homogenize(parse("x^2 - y"), degree=1)

    def test_not_homogeneous_rejected(self):
        with pytest.raises(DimensionError):
            ProjectivePoly(parse("x^2 - y"), 2)

    def test_zero_rejected(self):
        with pytest.raises(DegenerateError):
            homogenize(parse("x - x"))

    def test_swap_turns_asymptotic_cubic_into_node(self):
        swapped = swap_chart(homogenize(parse("y*(1 - x^2) - 1")), 1, 2)
        node = homogenize(parse("x^2 - y^2*(1 - y)"))
        assert swapped.base == node.base.scale(-1)

    def test_swap_out_of_range(self):
        with pytest.raises(DimensionError):
            swap_chart(homogenize(parse("y - x^2")), 0, 3)


class TestHemisphereTransform:
    """Tests for the transform x -> (x_1/x_n, ..., 1/x_n)."""

    def test_circle_becomes_hyperbola(self):
        assert p_transform(parse("x^2 + y^2 - 1")) == parse("x^2 - y^2 + 1")

    def test_involution(self):
        f = parse("y^3 - x^2*y + x - 2")
        assert p_transform(p_transform(f, 4), 4) == f

    @pytest.mark.parametrize("text", ["y - x^2", "x^2 + y^2 - 1", "z^3 - x*y + 1"])
    def test_identity_holds(self, text):
        assert p_transform_identity(parse(text))

    def test_needs_two_variables(self):
        with pytest.raises(DimensionError):
            p_transform(parse("x^2 - 1", ["x"]))


class TestQuadraticCones:
    """Tests for exact inertia of quadratic forms."""

    @pytest.mark.parametrize(
        "text, signature",
        [
            ("x^2 - y^2", (1, 1, 0)),
            ("x^2 + y^2 - z^2", (2, 1, 0)),
            ("x*y", (1, 1, 0)),
            ("x^2", (1, 0, 1)),
            ("2*z*y - x^2 - y^2", (1, 2, 0)),
        ],
    )
    def test_signature(self, text, signature):
        assert quadratic_signature(leading_form(parse(text))) == signature

    def test_equivalence_ignores_sign(self):
        a = leading_form(parse("x^2 + y^2 - z^2"))
        b = leading_form(parse("z^2 - x*y"))
        assert equivalent_quadratic_cones(a, b)

    def test_definite_is_not_a_cone_over_a_conic(self):
        a = leading_form(parse("x^2 + y^2"))
        b = leading_form(parse("x^2 - y^2"))
        assert not equivalent_quadratic_cones(a, b)

    def test_signature_needs_quadric(self):
        with pytest.raises(DimensionError):
            quadratic_signature(leading_form(parse("x^3 - y^3")))


class TestProjectiveClosure:
    """Tests for points at infinity of plane curves and surfaces."""

    def test_parabola_closure_is_smooth(self):
        report = projective_closure(parse("y - x^2"), threads=1)
        assert len(report.infinity_points) == 1
        point = report.infinity_points[0]
        assert point.direction == (Fraction(0), Fraction(1))
        assert point.verdict == "smooth"
        assert report.singular_points == ()
        assert report.asymptotes == ()

    def test_asymptotic_cubic(self):
        report = projective_closure(parse("y*(1 - x^2) - 1"), threads=2)
        assert len(report.singular_points) == 1
        node = report.singular_points[0]
        assert node.cone_kind == "cone"
        assert node.signature == (1, 1, 0)
        assert len(report.asymptotes) == 3
        for line in ("x - 1", "x + 1", "y"):
            assert parse(line) in report.asymptotes

    def test_teardrop_has_two_singular_points(self):
        report = projective_closure(parse("y*(1 - x^2*y) - 1"), threads=2)
        assert len(report.singular_points) == 2
        assert {p.cone_kind for p in report.singular_points} == {"even"}

    def test_parabolic_cylinder(self):
        report = projective_closure(parse("2*z - x^2 - 1"), threads=2)
        singular = report.singular_points
        assert len(singular) == 1
        assert singular[0].signature == (1, 2, 0)
        assert equivalent_quadratic_cones(singular[0].cone, leading_form(parse("z^2 + x^2 - y^2")))

    def test_report_dict(self):
        data = projective_closure(parse("y*(1 - x^2) - 1"), threads=1).to_dict()
        assert data["homogeneous"] == str(homogenize(parse("y*(1 - x^2) - 1")))
        assert any("asymptotes" in p for p in data["infinity_points"])

    def test_constant_rejected(self):
        with pytest.raises(DegenerateError):
            projective_closure(parse("x - x + 1"))


class TestConvexCones:
    """Tests for recession cones, normal cones and the entire-graph search."""

    def test_parabola_recession_cone_points_up(self, parabola_cloud):
        cone = recession_cone_sample(parabola_cloud)
        assert len(cone) >= 1
        assert cone.near((0.0, 1.0), 0.05)
        assert not cone.near((0.0, -1.0), 0.05)

    def test_normal_cone_contains_down(self, parabola_cloud):
        cone = normal_cone_sample(parabola_cloud)
        assert cone.kind == "normal"
        assert cone.near((0.0, -1.0), 0.05)
        assert sum(cone.confidence) == len(parabola_cloud)

    def test_parabola_is_entire_graph(self, parabola_cloud):
        result = entire_graph_direction(parse("y - x^2"), parabola_cloud)
        assert result.verified
        np.testing.assert_allclose(result.direction, (0.0, 1.0), atol=0.02)
        assert result.single_hits == 64
        assert result.to_dict()["entire_graph"] is True

    def test_line_nearly_along_axis_meets_parabola_once(self):
        u = np.array([1e-17, 1.0])
        s = line_parameters(NumericPolynomial(parse("y - x^2")), np.array([0.5, 0.0]), u, 100.0)
        np.testing.assert_allclose(s, [0.25])

    def test_line_roots_outside_reach_ignored(self):
        u = np.array([0.6, 0.8])
        s = line_parameters(NumericPolynomial(parse("y - x^2")), np.array([0.0, 0.0]), u, 1.0)
        np.testing.assert_allclose(s, [0.0])

    def test_nonconvex_cloud_rejected(self):
        S = sample_surface(parse("y - x^3"), Box.parse("-1:1,-1:1"), 0.05, seed=42, threads=1)
        with pytest.raises(AnalysisError):
            recession_cone_sample(S)
        assert entire_graph_direction(parse("y - x^3"), S).reason == "convexity test failed"

    def test_circle_is_bounded(self):
        S = sample_surface(parse("x^2 + y^2 - 1"), Box.parse("-1.5:1.5,-1.5:1.5"), 0.05, seed=42, threads=1)
        result = entire_graph_direction(parse("x^2 + y^2 - 1"), S)
        assert not result.verified
        assert "bounded" in result.reason

    def test_circle_is_strictly_convex(self):
        S = sample_surface(parse("x^2 + y^2 - 1"), Box.parse("-1.5:1.5,-1.5:1.5"), 0.05, seed=42, threads=1)
        assert assess_strict_convexity(S).passed


class TestSlicePlane:
    """Tests for exact restriction to a 2-plane."""

    def test_cone_slice(self):
        g = slice_plane(parse("x^2 + y^2 - z^2"), (0, 0, 0), (1, 0, 0), (0, 0, 1))
        assert g.variables == ("s", "t")
        assert dict(g.terms) == {(2, 0): 1, (0, 2): -1}

    def test_offset_slice(self):
        g = slice_plane(parse("z - x*y"), (0, 0, 1), (1, 1, 0), (0, 0, 1))
        assert dict(g.terms) == {(0, 0): 1, (0, 1): 1, (2, 0): -1}

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            slice_plane(parse("x*y"), (0, 0, 0), (1, 0), (0, 1))
