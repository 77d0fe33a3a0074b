"""Tests for polynomial module."""

from fractions import Fraction

import numpy as np
import pytest
import sympy

from src.errors import DegenerateError, DimensionError, FactorizationTimeout, NotOnVarietyError
from src.expr import (
    NumericPolynomial,
    Polynomial,
    homogeneity_check,
    leading_form,
    parse,
    square_free_factor,
    square_free_part,
)
from src.expr.numeric import horseshoe_field


class TestPolynomialArithmetic:
    """Tests for exact arithmetic and calculus."""

    def test_zero_coefficients_dropped(self):
        f = Polynomial(("x", "y"), {(1, 0): 1, (0, 1): 0})
        assert f.terms == {(1, 0): Fraction(1)}

    def test_degree_and_order(self):
        f = parse("x^2 - y^2*(1 - y)")
        assert f.degree == 3
        assert f.order == 2

    def test_translate_is_exact(self):
        f = parse("y*(1 - x^2) - 1")
        g = f.translate((0, 1))
        assert g.constant_term == 0
        assert g == parse("y - x^2 - x^2*y")

    def test_evaluate_exact_and_float(self):
        f = parse("x^2 + y^2 - 1")
        assert f.evaluate((Fraction(3, 5), Fraction(4, 5))) == 0
        assert f.evaluate((0.5, 0.5)) == pytest.approx(-0.5)

    def test_gradient(self):
        f = parse("y^2 - x^3")
        fx, fy = f.gradient
        assert fx == parse("-3*x^2")
        assert fy == parse("2*y")

    def test_with_variables_lifts_to_space(self):
        f = parse("x - y").with_variables(("x", "y", "z"))
        assert f.terms == {(1, 0, 0): Fraction(1), (0, 1, 0): Fraction(-1)}

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            parse("x + y").evaluate((1, 2, 3))

    def test_sympy_round_trip(self):
        f = parse("x^3 + y^3 - z^3")
        assert Polynomial.from_sympy(f.to_sympy(), f.variables) == f

    def test_symbols_are_flat(self):
        assert parse("x*y").symbols == (sympy.Symbol("x"), sympy.Symbol("y"))


class TestLeadingForm:
    """Tests for the lowest-degree homogeneous part."""

    def test_cusp(self):
        h = leading_form(parse("y^2 - x^3"))
        assert h.degree == 2
        assert h.base == parse("y^2")

    def test_node(self):
        h = leading_form(parse("x^2 - y^2*(1 - y)"))
        assert h.base == parse("x^2 - y^2")

    def test_constant_term_rejected(self):
        with pytest.raises(NotOnVarietyError):
            leading_form(parse("x^2 + y^2 - 1"))

    def test_zero_rejected(self):
        with pytest.raises(DegenerateError):
            leading_form(Polynomial.zero(("x", "y")))

    def test_homogeneity(self):
        h = leading_form(parse("z^3 - x^5*y - x*y^5"))
        assert homogeneity_check(h, [2, Fraction(-1, 3)], [(1, 2, 3), (0, 1, -1)])


class TestFactor:
    """Tests for factorization over the rationals."""

    def test_difference_of_squares_splits(self):
        factors = square_free_factor(parse("x^2 - y^2"))
        assert set(g for g, _ in factors.factors) == {parse("x - y"), parse("x + y")}
        assert factors.constant == 1

    def test_product_expands_back(self):
        f = parse("2*x^2 - 2*y^2")
        factors = square_free_factor(f)
        assert factors.expand() == f
        assert factors.constant == 2
        assert len(factors.factors) == 2

    def test_even_and_odd_multiplicities(self):
        factors = square_free_factor(parse("x^2*y"))
        assert [k for _, k in factors.odd] == [1]
        assert [k for _, k in factors.even] == [2]

    def test_square_free_part(self):
        assert square_free_part(parse("x^3*y^2")) == parse("x*y")

    def test_irreducible_cubic_stays_whole(self):
        factors = square_free_factor(parse("x^3 + y^3 - z^3"))
        assert len(factors.factors) == 1

    def test_degree_cap(self):
        with pytest.raises(FactorizationTimeout):
            square_free_factor(parse("x^30 - y"), degree_cap=24)

    def test_zero_rejected(self):
        with pytest.raises(DegenerateError):
            square_free_factor(Polynomial.zero(("x", "y")))


class TestNumericPolynomial:
    """Tests for vectorized float evaluation."""

    def test_value_and_gradient_shapes(self):
        f = NumericPolynomial(parse("x^2 + y^2 - 1"))
        points = np.array([[1.0, 0.0], [0.0, 2.0]])
        np.testing.assert_allclose(f.value(points), [0.0, 3.0])
        np.testing.assert_allclose(f.gradient(points), [[2.0, 0.0], [0.0, 4.0]])

    def test_along_line(self):
        f = NumericPolynomial(parse("y - x^2"))
        line = f.along_line(np.array([0.0, 1.0]), np.array([1.0, 0.0]))
        np.testing.assert_allclose(sorted(line.roots().real), [-1.0, 1.0])

    def test_horseshoe_field(self):
        field = horseshoe_field()
        assert field.dimension == 2
        assert field.value(np.array([0.0, 0.0])) == pytest.approx(0.0)
        np.testing.assert_allclose(field.gradient(np.array([0.0, 0.0])), [0.0, -1.0])
