"""Exact polynomial layer: parsing, arithmetic, leading forms and factorization."""

from src.expr.factor import FactorList, square_free_factor, square_free_part
from src.expr.numeric import FunctionField, NumericPolynomial, ScalarField, as_field
from src.expr.parser import parse, variables_for_dimension
from src.expr.polynomial import (
    HomogeneousForm,
    Polynomial,
    evaluate,
    exact_point,
    gradient,
    homogeneity_check,
    leading_form,
    translate,
)

__all__ = [
    "FactorList",
    "FunctionField",
    "HomogeneousForm",
    "NumericPolynomial",
    "Polynomial",
    "ScalarField",
    "as_field",
    "evaluate",
    "exact_point",
    "gradient",
    "homogeneity_check",
    "leading_form",
    "parse",
    "square_free_factor",
    "square_free_part",
    "translate",
    "variables_for_dimension",
]
