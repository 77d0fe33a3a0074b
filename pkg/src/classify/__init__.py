"""Regularity verdicts for points of real algebraic hypersurfaces."""

from src.classify.batch import classify_curve, rational_singular_points
from src.classify.graph import classify_point, create_classify_workflow
from src.classify.hoelder import HoelderFit, fit_hoelder
from src.classify.state import ClassifyOptions, ClassifyState, PointAnalysis
from src.classify.verdict import Evidence, Rule, Verdict, VerdictClass, Witness

__all__ = [
    "ClassifyOptions",
    "ClassifyState",
    "Evidence",
    "HoelderFit",
    "PointAnalysis",
    "Rule",
    "Verdict",
    "VerdictClass",
    "Witness",
    "classify_curve",
    "classify_point",
    "create_classify_workflow",
    "fit_hoelder",
    "rational_singular_points",
]
