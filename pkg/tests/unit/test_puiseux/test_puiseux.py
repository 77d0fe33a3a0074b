"""Tests for Newton polygon, Puiseux series and germ modules."""

from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from src.errors import DimensionError, IsolatedPointError, NotOnVarietyError, PuiseuxDepthError
from src.expr import parse
from src.puiseux import GermKind, branch_points, classify_germ, expand_germ, newton_polygon, puiseux_expand
from src.puiseux.series import ROOT_BITS


class TestNewtonPolygon:
    """Tests for lower edges and monomial splitting."""

    def test_cusp_single_edge(self):
        polygon = newton_polygon(parse("y^2 - x^3"))
        assert len(polygon.edges) == 1
        edge = polygon.edges[0]
        assert edge.slope == Fraction(3, 2)
        assert (edge.p, edge.q) == (3, 2)
        assert edge.height == 2

    def test_node_edge_has_both_lines(self):
        polygon = newton_polygon(parse("x^2 - y^2*(1 - y)"))
        assert [e.slope for e in polygon.edges] == [Fraction(1)]
        assert polygon.edges[0].face == parse("x^2 - y^2")

    def test_monomial_split(self):
        polygon = newton_polygon(parse("x*y^2 - x^4*y"))
        assert polygon.monomial == (1, 1)

    def test_needs_two_variables(self):
        with pytest.raises(DimensionError):
            newton_polygon(parse("x + z"))


class TestExpandGerm:
    """Tests for the Newton-Puiseux recursion."""

    def test_cusp_branch(self):
        expansion = expand_germ(parse("y^2 - x^3"))
        assert len(expansion.branches) == 1
        branch = expansion.branches[0]
        assert branch.e == 2
        assert branch.exponents == (Fraction(3, 2),)
        assert branch.exact
        assert expansion.weight == expansion.y_order == 2

    def test_branch_points_lie_on_curve(self):
        branch = puiseux_expand(parse("y^2 - x^3"))[0]
        for x, y in branch_points(branch, [0.1, -0.2, 0.3]):
            assert y * y == pytest.approx(x ** 3, abs=1e-12)

    def test_exact_branch_has_no_residual(self):
        f = parse("y^3 - x^4")
        branch = expand_germ(f).branches[0]
        assert branch.residual_valuation(f) is None

    def test_truncated_branch_beats_order(self):
        f = parse("y - x^2 - x^5")
        expansion = expand_germ(f, order=3)
        branch = expansion.branches[0]
        assert branch.truncation_order == 3
        assert branch.residual_valuation(f) > 3

    def test_irrational_root_is_numeric(self):
        expansion = expand_germ(parse("y^2 - 2*x^2"))
        assert len(expansion.branches) == 2
        assert all(b.numeric for b in expansion.branches)
        values = sorted(float(b.coefficients[-1]) for b in expansion.branches)
        np.testing.assert_allclose(values, [-np.sqrt(2), np.sqrt(2)])

    def test_irrational_root_keeps_extended_precision(self):
        expansion = expand_germ(parse("y^2 - 2*x^2"))
        with mp.workprec(ROOT_BITS):
            for b in expansion.branches:
                a = b.coefficients[-1]
                assert isinstance(a, mp.mpf)
                assert abs(a * a - 2) < mp.mpf(2) ** -120
        data = expansion.branches[-1].to_dict()
        assert data["terms"][-1][2].startswith("1.41421356237309504880168872")

    def test_definite_germ_is_not_real(self):
        expansion = expand_germ(parse("x^2 + y^2"))
        assert expansion.real_branches == ()

    def test_shear_for_vertical_line(self):
        expansion = expand_germ(parse("x"))
        assert expansion.shear == 1

    def test_depth_cap(self):
        with pytest.raises(PuiseuxDepthError):
            expand_germ(parse("y^3 - x^4"), depth_cap=0)

    def test_point_off_curve(self):
        with pytest.raises(NotOnVarietyError):
            expand_germ(parse("y - 1"))

    def test_to_dict_terms(self):
        data = expand_germ(parse("y^2 - x^3")).to_dict()
        assert data["branches"][0]["terms"] == [[3, 2, "1"]]


class TestClassifyGerm:
    """Tests for the cusp / C1 / multi-branch decision."""

    def test_cusp(self):
        report = classify_germ(parse("y^2 - x^3"))
        assert report.kind == GermKind.CUSP
        assert report.rays == ((1.0, 0.0), (1.0, 0.0))

    def test_quartic_graph_is_c1(self):
        report = classify_germ(parse("y^3 - x^4"))
        assert report.kind == GermKind.C1
        assert sorted(report.rays) == [(-1.0, 0.0), (1.0, 0.0)]

    def test_node_is_multi_branch(self):
        report = classify_germ(parse("x^2 - y^2*(1 - y)"))
        assert report.kind == GermKind.MULTI_BRANCH
        assert len(report.rays) == 4

    def test_piriform_points_along_y(self):
        report = classify_germ(parse("x^2 - y^3*(1 - y)"))
        assert report.kind == GermKind.CUSP
        np.testing.assert_allclose(report.rays[0], [0.0, 1.0])

    def test_vertical_line_undoes_shear(self):
        report = classify_germ(parse("x"))
        assert report.kind == GermKind.C1
        assert sorted(report.rays) == [(0.0, -1.0), (0.0, 1.0)]

    def test_translated_point(self):
        report = classify_germ(parse("y*(1 - x^2) - 1"), (0, 1))
        assert report.kind == GermKind.C1

    def test_isolated_point(self):
        with pytest.raises(IsolatedPointError):
            classify_germ(parse("x^2 + y^2"))

    def test_report_dict(self):
        data = classify_germ(parse("y^2 - x^3")).to_dict()
        assert data["verdict"] == "Cusp"
        assert data["resolved"] is True
        assert [h["dir"] for h in data["branches"][0]["half_branches"]] == [[1.0, 0.0], [1.0, 0.0]]
