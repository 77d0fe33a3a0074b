"""Tests for expression parser module."""

from fractions import Fraction

import pytest

from src.errors import ParseError
from src.expr import Polynomial, parse, variables_for_dimension


class TestParse:
    """Tests for parsing well-formed expressions."""

    def test_infers_plane_variables(self):
        f = parse("y^2 - x^3")
        assert f.variables == ("x", "y")
        assert f.terms == {(3, 0): Fraction(-1), (0, 2): Fraction(1)}

    def test_infers_space_when_z_appears(self):
        f = parse("z")
        assert f.variables == ("x", "y", "z")

    def test_indexed_variables(self):
        f = parse("x1*x3 - 1")
        assert f.variables == ("x1", "x2", "x3")

    def test_unary_minus_binds_looser_than_power(self):
        assert parse("-x^2") == -(parse("x") ** 2)

    @pytest.mark.parametrize(
        "text, terms",
        [
            ("-x^2", {(2, 0): Fraction(-1)}),
            ("(-x)^2", {(2, 0): Fraction(1)}),
            ("-(x^2)", {(2, 0): Fraction(-1)}),
            ("(-x)^3", {(3, 0): Fraction(-1)}),
            ("y - -x^2", {(0, 1): Fraction(1), (2, 0): Fraction(1)}),
            ("x*-y^2", {(1, 2): Fraction(-1)}),
        ],
    )
    def test_sign_and_power_grouping(self, text, terms):
        assert parse(text).terms == terms

    def test_rational_and_decimal_literals(self):
        f = parse("1/2*x + 0.25*y")
        assert f.terms[(1, 0)] == Fraction(1, 2)
        assert f.terms[(0, 1)] == Fraction(1, 4)

    def test_expands_products(self):
        assert parse("(1 - y)*y^3 - x^4") == parse("y^3 - y^4 - x^4")

    def test_explicit_variables(self):
        f = parse("y", ("x", "y", "z"))
        assert f.variables == ("x", "y", "z")
        assert f.terms == {(0, 1, 0): Fraction(1)}

    def test_canonical_printing(self):
        assert str(parse("y^2 - x^3")) == "-x^3 + y^2"


class TestParseErrors:
    """Tests for rejected input and reported offsets."""

    @pytest.mark.parametrize(
        "text,offset",
        [
            ("x**2", 1),
            ("2x", 1),
            ("x^1/2", 2),
            ("x^y", 2),
            ("x + ", 4),
            ("x $ y", 2),
            ("x/y", 1),
        ],
    )
    def test_offsets(self, text, offset):
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.offset == offset

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse("   ")

    def test_chained_exponent(self):
        with pytest.raises(ParseError, match="chained"):
            parse("x^2^3")

    def test_too_many_variables(self):
        with pytest.raises(ParseError, match="variable count"):
            parse("x9")

    def test_unknown_variable_for_explicit_list(self):
        with pytest.raises(ParseError, match="unknown variable"):
            parse("z", ("x", "y"))

    def test_mixed_plain_and_indexed(self):
        with pytest.raises(ParseError, match="cannot mix"):
            parse("x + x2")

    def test_zero_denominator(self):
        with pytest.raises(ParseError, match="zero denominator"):
            parse("1/0*x")


class TestVariablesForDimension:
    """Tests for default variable names."""

    def test_plane_and_space(self):
        assert variables_for_dimension(2) == ("x", "y")
        assert variables_for_dimension(3) == ("x", "y", "z")

    def test_higher_dimension(self):
        assert variables_for_dimension(4) == ("x1", "x2", "x3", "x4")

    def test_rejects_out_of_range(self):
        with pytest.raises(ParseError):
            variables_for_dimension(9)

    def test_generators_match(self):
        x, y = Polynomial.generators(variables_for_dimension(2))
        assert parse("x*y") == x * y
