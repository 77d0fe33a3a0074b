"""Tests for the classification workflow."""

from fractions import Fraction

import numpy as np
import pytest

from src.classify import (
    ClassifyOptions,
    PointAnalysis,
    Rule,
    VerdictClass,
    classify_curve,
    classify_point,
    create_classify_workflow,
    fit_hoelder,
    rational_singular_points,
)
from src.classify.nodes import ClassifySupervisor, changes_sign, hypersurface_candidate, spanning_directions
from src.classify.verdict import format_exponent, hoelder_caveat
from src.errors import AnalysisError, DimensionError, NotOnVarietyError
from src.expr import parse
from src.measure import Variety
from src.support import Box


class TestClassifyPoint:
    """Tests for verdicts on the standard germs."""

    def test_regular_point(self):
        verdict = classify_point(parse("2*z - x^2 - 1"), (0, 0, Fraction(1, 2)))
        assert verdict.verdict_class == VerdictClass.REGULAR_POINT
        assert verdict.rule == Rule.NONZERO_GRADIENT
        np.testing.assert_allclose(np.abs(verdict.evidence.gradient), [0.0, 0.0, 2.0])

    def test_cusp(self):
        verdict = classify_point(parse("y^2 - x^3"), (0, 0))
        assert verdict.verdict_class == VerdictClass.CUSP
        assert verdict.rule == Rule.PLANAR_GERM
        assert verdict.evidence.branches["verdict"] == "Cusp"

    def test_quartic_graph_is_c1_with_hoelder_caveat(self):
        verdict = classify_point(parse("y^3 - x^4"), (0, 0))
        assert verdict.verdict_class == VerdictClass.C1_HYPERSURFACE
        assert verdict.evidence.hoelder["exponent"] == pytest.approx(1 / 3, rel=0.1)
        assert "not C^{1,α} for α > 1/3 (Hölder fit)" in verdict.caveats

    def test_node(self):
        verdict = classify_point(parse("x^2 - y^2*(1 - y)"), (0, 0))
        assert verdict.verdict_class == VerdictClass.MULTI_BRANCH

    def test_isolated_point_is_inconclusive(self):
        verdict = classify_point(parse("x^2 + y^2"), (0, 0))
        assert verdict.verdict_class == VerdictClass.INCONCLUSIVE
        assert verdict.rule == Rule.ISOLATED_POINT

    def test_cubic_cone_is_not_c1(self):
        verdict = classify_point(parse("x^3 + y^3 - z^3"), (0, 0, 0))
        assert verdict.verdict_class == VerdictClass.NOT_C1
        assert verdict.rule == Rule.NONFLAT_CONE
        witness = verdict.evidence.witness
        assert len(witness.directions) == 3
        assert abs(np.linalg.det(np.array(witness.directions))) > witness.threshold

    @pytest.mark.slow
    def test_tangent_union_is_sheets(self, tangent_union):
        verdict = classify_point(tangent_union, (0, 0))
        assert verdict.verdict_class == VerdictClass.UNION_OF_C1_SHEETS
        assert verdict.rule == Rule.FLAT_CONE_MULTIPLICITY
        assert verdict.evidence.multiplicity["value"] == pytest.approx(2.0, rel=0.05)
        assert "sheet count not certified" in verdict.caveats

    def test_point_off_variety(self):
        with pytest.raises(NotOnVarietyError):
            classify_point(parse("y - x^2"), (0, 1))

    def test_dimension_rejected(self):
        with pytest.raises(DimensionError):
            classify_point(parse("x1 + x4"), (0, 0, 0, 0))

    def test_json_uses_class_alias(self):
        data = classify_point(parse("y^2 - x^3"), (0, 0)).to_json_dict()
        assert data["class"] == "Cusp"
        assert data["rule"] == "planar-germ-dichotomy"
        assert data["point"] == ["0", "0"]
        assert "witness" not in data["evidence"]


class TestFitHoelder:
    """Tests for the normal-field exponent fit."""

    def test_parabola_is_lipschitz(self):
        V = Variety.from_text([("y - x^2", [])])
        fit = fit_hoelder(V, (0, 0), (0, 1))
        assert fit.exponent == pytest.approx(1.0, rel=0.05)
        assert fit.rvalue > 0.99

    def test_sextic_exponent(self):
        V = Variety.from_text([("y^5 - x^6", [])])
        fit = fit_hoelder(V, (0, 0), (0, 1))
        assert fit.exponent == pytest.approx(0.2, rel=0.1)

    def test_flat_line_has_no_deviation(self):
        V = Variety.from_text([("y", [])])
        with pytest.raises(AnalysisError):
            fit_hoelder(V, (0, 0), (0, 1))


class TestClassifyCurve:
    """Tests for batch classification of plane curves."""

    def test_node_has_one_singular_point(self):
        results = classify_curve(parse("x^2 - y^2*(1 - y)"), Box.parse("-2:2,-2:2"), threads=1)
        assert [p for p, _ in results] == [(Fraction(0), Fraction(0))]
        assert results[0][1].verdict_class == VerdictClass.MULTI_BRANCH

    def test_regular_curve(self):
        assert classify_curve(parse("y - x^2"), Box.parse("-2:2,-2:2")) == []

    def test_two_singular_points(self):
        points = rational_singular_points(parse("y^2 - x^2*(x - 1)^2"), Box.parse("-2:2,-2:2"))
        assert points == [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))]

    def test_needs_plane(self):
        with pytest.raises(DimensionError):
            classify_curve(parse("z - x*y"), Box.parse("-1:1,-1:1,-1:1"))


class TestWorkflow:
    """Tests for routing and the state view."""

    def test_workflow_compiles(self):
        assert create_classify_workflow() is not None

    @pytest.mark.parametrize(
        "fields, route",
        [
            ({}, "gradient"),
            ({"visited": ["gradient"], "regular": True}, "verdict"),
            ({"visited": ["gradient"]}, "cone"),
            ({"visited": ["gradient", "cone"], "planar_germ": True}, "germ"),
            ({"visited": ["gradient", "cone", "germ"], "planar_germ": True}, "symmetry"),
            ({"visited": ["gradient", "cone"], "flat_normal": (0.0, 1.0)}, "continuity"),
            ({"visited": ["gradient", "cone", "continuity"], "flat_normal": (0.0, 1.0)}, "support"),
            ({"visited": ["gradient", "cone", "continuity", "support", "symmetry"], "flat_normal": (0.0, 1.0)}, "multiplicity"),
            ({"status": "failed"}, "done"),
        ],
    )
    def test_next_step(self, fields, route):
        state = PointAnalysis(point=(0, 0), **fields)
        assert ClassifySupervisor().next_step(state) == route

    def test_state_round_trip(self):
        state = PointAnalysis(point=(0, 0), regular=True, visited=["gradient"], failures={"cone": "boom"})
        restored = PointAnalysis.from_graph_state(state.to_dict())
        assert restored == state

    def test_options_spacing(self):
        options = ClassifyOptions()
        assert options.spacing(1.0, 2) == pytest.approx(0.01)
        assert options.spacing(0.1, 3) == pytest.approx(0.005)


class TestHelpers:
    """Tests for cone helpers used by the verdict writer."""

    def test_hypersurface_candidate_in_plane(self):
        assert hypersurface_candidate(np.array([[1.0, 0.0], [-1.0, 0.0]]), 2)
        assert not hypersurface_candidate(np.array([[1.0, 0.0]]), 2)

    def test_spanning_directions(self):
        assert spanning_directions(np.array([[1.0, 0.0], [0.0, 1.0]]), 2) is not None
        assert spanning_directions(np.array([[1.0, 0.0], [-1.0, 0.0]]), 2) is None

    def test_changes_sign(self):
        assert changes_sign(parse("x^2 - y^2"), (0, 0), 1e-4, 200, 42)
        assert not changes_sign(parse("x^2 + y^2"), (0, 0), 1e-4, 200, 42)

    def test_exponent_formatting(self):
        assert format_exponent(0.3334) == "1/3"
        assert format_exponent(0.013) == "0.013"
        assert hoelder_caveat(0.95) is None
