"""Real half-branches, their tangent rays, and the cusp / C1 / multi-branch verdict."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from src.cone.descriptors import angle_between, unit
from src.errors import IsolatedPointError
from src.expr.polynomial import Polynomial
from src.logger import get_logger
from src.puiseux.series import PuiseuxBranch, PuiseuxExpansion, expand_germ

logger = get_logger(__name__)

RAY_TOL = 1e-9


@dataclass(frozen=True)
class HalfBranch:
    """The part of a real branch swept by t -> 0 from one side.

    Attributes:
        branch: Parent branch.
        sign: Sign of the parameter t along this half.
        tangent_ray: Unit limit of the secant direction, in original coordinates.
    """

    branch: PuiseuxBranch
    sign: int
    tangent_ray: tuple[float, float]

    def to_dict(self) -> dict:
        return {"sign": self.sign, "dir": list(self.tangent_ray)}


def _leading(branch: PuiseuxBranch) -> tuple[int | None, Fraction | float]:
    for k, a in branch.terms:
        if a:
            return k, a
    return None, 0


def tangent_ray(branch: PuiseuxBranch, sign: int) -> tuple[float, float]:
    """Direction of (ε t^e, a t^k0) as t -> 0 with the given sign, undoing the shear."""
    k0, a = _leading(branch)
    x_sign = branch.epsilon * sign ** branch.e
    if k0 is None or k0 > branch.e:
        ray = (float(x_sign), 0.0)
    elif k0 < branch.e:
        ray = (0.0, float(np.sign(float(a) * sign ** k0)))
    else:
        ray = (float(x_sign), float(a) * sign ** k0)
    dx, dy = ray
    dx += branch.shear * dy
    return tuple(float(v) for v in unit((dx, dy)))


def half_branches(branches: Sequence[PuiseuxBranch]) -> list[HalfBranch]:
    """Both halves t > 0 and t < 0 of every real branch.

    Non-real branches contribute none. Within one branch the two rays are
    equal or opposite, since they come from the same leading term.
    """
    halves = []
    for branch in branches:
        if not branch.real:
            continue
        for sign in (1, -1):
            halves.append(HalfBranch(branch, sign, tangent_ray(branch, sign)))
    return halves


class GermKind(str, Enum):
    CUSP = "Cusp"
    C1 = "C1"
    MULTI_BRANCH = "MultiBranch"


@dataclass(frozen=True)
class GermReport:
    """Verdict on a plane curve germ with the evidence behind it."""

    kind: GermKind
    expansion: PuiseuxExpansion
    halves: tuple[HalfBranch, ...]

    @property
    def rays(self) -> tuple[tuple[float, float], ...]:
        return tuple(h.tangent_ray for h in self.halves)

    @property
    def resolved(self) -> bool:
        """False when a numeric root of higher multiplicity stands for several unseparated branches."""
        return all(not (b.numeric and b.multiplicity > 1) for b in self.expansion.branches)

    def to_dict(self) -> dict:
        branches = []
        for branch in self.expansion.branches:
            entry = branch.to_dict()
            entry["half_branches"] = [h.to_dict() for h in self.halves if h.branch is branch]
            branches.append(entry)
        return {
            "edges": [e.to_dict() for e in self.expansion.polygon.edges],
            "shear": self.expansion.shear,
            "branches": branches,
            "verdict": self.kind.value,
            "resolved": self.resolved,
        }


def classify_germ(f: Polynomial, p: Sequence | None = None, order: Fraction | int | None = None) -> GermReport:
    """Decide whether Z(f) is a cusp, a C1 curve or several branches at p (default: the origin).

    Raises:
        IsolatedPointError: no real half-branch passes through p.
    """
    g = f.translate(p) if p is not None else f
    expansion = expand_germ(g, order)
    halves = tuple(half_branches(expansion.branches))
    if not halves:
        raise IsolatedPointError(f"{f} has an isolated real point at {tuple(p) if p is not None else 'the origin'}")
    if len(halves) == 2 and halves[0].branch.multiplicity == 1:
        first, second = halves
        angle = angle_between(first.tangent_ray, second.tangent_ray)
        kind = GermKind.CUSP if angle < RAY_TOL or np.allclose(first.tangent_ray, second.tangent_ray) else GermKind.C1
    else:
        kind = GermKind.MULTI_BRANCH
    logger.info(f"germ of {f}: {kind.value} with {len(halves)} half-branches")
    return GermReport(kind=kind, expansion=expansion, halves=halves)
