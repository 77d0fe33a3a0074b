"""Verdict models, rule identifiers and caveat wording."""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class VerdictClass(str, Enum):
    REGULAR_POINT = "RegularPoint"
    C1_HYPERSURFACE = "C1_Hypersurface"
    C11_HYPERSURFACE = "C11_Hypersurface"
    UNION_OF_C1_SHEETS = "UnionOfC1Sheets"
    CUSP = "Cusp"
    NOT_C1 = "NotC1"
    MULTI_BRANCH = "MultiBranch"
    INCONCLUSIVE = "Inconclusive"


class Rule(str, Enum):
    """Decision rules a verdict can rest on."""

    NONZERO_GRADIENT = "nonzero-gradient"
    PLANAR_GERM = "planar-germ-dichotomy"
    ISOLATED_POINT = "isolated-real-point"
    POSITIVE_SUPPORT = "flat-cone-positive-support"
    DOUBLE_SUPPORT = "flat-cone-double-support"
    FLAT_CONE_MULTIPLICITY = "flat-cone-multiplicity"
    NONFLAT_CONE = "nonflat-cone"
    ASYMMETRIC_CONE = "asymmetric-cone"
    NORMAL_DISCONTINUITY = "normal-discontinuity"
    NONE = "none"


class Witness(BaseModel):
    """Machine-checkable certificate behind a NotC1 verdict."""

    kind: str
    directions: list[list[float]] = Field(default_factory=list)
    points: list[list[float]] = Field(default_factory=list)
    normals: list[list[float]] = Field(default_factory=list)
    distances: list[float] = Field(default_factory=list)
    angles: list[float] = Field(default_factory=list)
    threshold: Optional[float] = None


class Evidence(BaseModel):
    """Every quantity computed while classifying a point."""

    leading_form: Optional[str] = None
    degree: Optional[int] = None
    gradient: Optional[list[float]] = None
    flat_normal: Optional[list[float]] = None
    sign_locus: Optional[dict] = None
    cone: Optional[dict] = None
    multiplicity: Optional[dict] = None
    support: Optional[list[dict]] = None
    continuity: Optional[dict] = None
    symmetry: Optional[dict] = None
    branches: Optional[dict] = None
    hoelder: Optional[dict] = None
    witness: Optional[Witness] = None
    failures: Optional[dict[str, str]] = None


class Verdict(BaseModel):
    """Regularity class of a point with the rule invoked and its evidence."""

    model_config = ConfigDict(populate_by_name=True)

    point: list[str]
    verdict_class: VerdictClass = Field(alias="class")
    rule: Rule
    evidence: Evidence = Field(default_factory=Evidence)
    caveats: list[str] = Field(default_factory=list)

    def to_json_dict(self) -> dict:
        return self.model_dump(mode="json", by_alias=True, exclude_none=True)


def format_exponent(exponent: float) -> str:
    """Small-denominator rendering of a fitted exponent, e.g. 0.3334 -> "1/3"."""
    approx = Fraction(exponent).limit_denominator(12)
    if abs(float(approx) - exponent) <= 0.1 * abs(exponent):
        return str(approx)
    return f"{exponent:.3f}"


def hoelder_caveat(exponent: float) -> str | None:
    """Caveat for a C1 germ whose normal field is only Hölder with a small exponent."""
    if exponent >= 0.9:
        return None
    return f"not C^{{1,α}} for α > {format_exponent(exponent)} (Hölder fit)"


SHEETS_CAVEAT = "sheet count not certified"
