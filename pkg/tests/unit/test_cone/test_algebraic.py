"""Tests for algebraic cone module."""

from fractions import Fraction

import numpy as np
import pytest

from src.cone import algebraic_cone, f_lambda, flat_normal, is_flat, sampled_flat_normal, sign_change_locus
from src.errors import DegenerateError, NotOnVarietyError
from src.expr import Polynomial, leading_form, parse


class TestAlgebraicCone:
    """Tests for the leading form at a point."""

    def test_cusp_at_origin(self):
        h = algebraic_cone(parse("y^2 - x^3"), (0, 0))
        assert h.degree == 2
        assert h.base == parse("y^2")

    def test_recentred_at_point(self):
        h = algebraic_cone(parse("x^2 + y^2 - 1"), (1, 0))
        assert h.degree == 1
        assert h.base == parse("2*x")

    def test_rational_point(self):
        h = algebraic_cone(parse("x^2 + y^2 - 1"), (Fraction(3, 5), Fraction(4, 5)))
        assert h.base == parse("6/5*x + 8/5*y")

    def test_point_off_variety(self):
        with pytest.raises(NotOnVarietyError):
            algebraic_cone(parse("y - x^2"), (0, 1))

    def test_zero_polynomial(self):
        with pytest.raises(DegenerateError):
            algebraic_cone(Polynomial.zero(("x", "y")), (0, 0))

    def test_f_lambda_converges_to_leading_form(self):
        f = parse("y^2 - x^3")
        scaled = f_lambda(f, 10)
        assert scaled == parse("y^2 - 1/10*x^3")
        assert leading_form(scaled).base == leading_form(f).base


class TestSignChangeLocus:
    """Tests for the odd/even split and flatness."""

    def test_even_square_has_no_sign_change(self):
        h = leading_form(parse("y^2 - x^3"))
        locus = sign_change_locus(h)
        assert locus.sign_change_factors == []
        assert locus.even_part == parse("y")
        assert is_flat(h, locus) is None

    def test_odd_power_of_linear_form_is_flat(self):
        h = leading_form(parse("z^3 - x^5*y - x*y^5"))
        normal, locus = flat_normal(h)
        assert locus is not None
        np.testing.assert_allclose(normal, [0.0, 0.0, 1.0])

    def test_definite_form_not_realizable(self):
        h = leading_form(parse("x^2 + y^2 + x^3"))
        locus = sign_change_locus(h)
        assert len(locus.realizable) == 1
        assert locus.realizable[0].realizable is False

    def test_irreducible_cubic_not_flat(self):
        h = leading_form(parse("x^3 + y^3 - z^3"))
        locus = sign_change_locus(h)
        assert len(locus.sign_change_factors) == 1
        assert is_flat(h, locus) is None
        zeros = locus.zero_directions()
        assert zeros.shape[1] == 3
        residual = zeros[:, 0] ** 3 + zeros[:, 1] ** 3 - zeros[:, 2] ** 3
        assert np.max(np.abs(residual)) < 1e-8

    def test_node_cone_has_two_lines(self):
        h = leading_form(parse("x^2 - y^2*(1 - y)"))
        locus = sign_change_locus(h)
        assert len(locus.sign_change_factors) == 2
        assert is_flat(h, locus) is None
        assert len(locus.zero_directions()) == 4

    def test_canonical_normal_sign(self):
        h = leading_form(parse("-x + y^2"))
        normal, _ = flat_normal(h)
        np.testing.assert_allclose(normal, [1.0, 0.0])

    def test_sampled_flatness_agrees(self):
        h = leading_form(parse("z^3 - x^5*y - x*y^5"))
        np.testing.assert_allclose(sampled_flat_normal(h), [0.0, 0.0, 1.0], atol=1e-6)
        assert sampled_flat_normal(leading_form(parse("x^3 + y^3 - z^3"))) is None

    def test_sampled_flatness_with_triple_root_in_plane(self):
        h = leading_form(parse("y^3 - x^5"))
        np.testing.assert_allclose(sampled_flat_normal(h), [0.0, 1.0], atol=1e-6)
