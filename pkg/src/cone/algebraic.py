"""Algebraic tangent cone h_f, its sign-change locus and the flatness test."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import bisect

from src.cone.descriptors import canonical_normal, merge_directions
from src.errors import DegenerateError, FactorizationTimeout, NotOnVarietyError
from src.expr.factor import square_free_factor
from src.expr.numeric import NumericPolynomial
from src.expr.polynomial import HomogeneousForm, Polynomial, exact_point, leading_form
from src.logger import get_logger

logger = get_logger(__name__)

MAX_EVIDENCE = 32
SIGN_EPS = 1e-12
BISECT_STEPS = 200


def algebraic_cone(f: Polynomial, p: Sequence) -> HomogeneousForm:
    """Leading form of f recentred at p.

    Raises:
        DegenerateError: f is zero.
        NotOnVarietyError: f(p) != 0.
    """
    if f.is_zero:
        raise DegenerateError("zero polynomial has no tangent cone")
    p = exact_point(p)
    value = f.evaluate(p)
    if value != 0:
        raise NotOnVarietyError(f"f({', '.join(map(str, p))}) = {value}, point is not on Z(f)")
    return leading_form(f.translate(p))


def f_lambda(f: Polynomial, lam: Fraction | int) -> Polynomial:
    """λ^m f(x/λ); converges to h_f coefficientwise as λ grows."""
    lam = Fraction(lam)
    m = leading_form(f).degree
    return Polynomial(f.variables, {e: c * lam ** (m - sum(e)) for e, c in f.terms.items()})


def random_unit_vectors(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    vectors = rng.standard_normal((count, n))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


@dataclass(frozen=True)
class FactorSign:
    """An odd-multiplicity factor of h and whether it changes sign on the sphere."""

    factor: Polynomial
    multiplicity: int
    realizable: bool
    evidence: tuple[tuple[float, ...], ...] = ()

    def to_dict(self) -> dict:
        return {
            "factor": str(self.factor),
            "multiplicity": self.multiplicity,
            "realizable": self.realizable,
            "evidence": [list(e) for e in self.evidence],
        }


@dataclass(frozen=True)
class SignLocus:
    """Odd/even split of h: input = constant · odd_part · even_part^2."""

    constant: Fraction
    odd_part: Polynomial
    even_part: Polynomial
    realizable: tuple[FactorSign, ...]
    even_factors: tuple[tuple[Polynomial, int], ...] = field(default=())

    @property
    def sign_change_factors(self) -> list[FactorSign]:
        return [r for r in self.realizable if r.realizable]

    def zero_directions(self) -> np.ndarray:
        """Sampled unit directions where the realizable odd factors vanish."""
        rows = [e for r in self.sign_change_factors for e in r.evidence]
        n = self.odd_part.nvars
        return np.array(rows, dtype=float).reshape(-1, n)

    def to_dict(self) -> dict:
        return {
            "odd_part": str(self.odd_part),
            "even_part": str(self.even_part),
            "factors": [r.to_dict() for r in self.realizable],
        }


def _zeros_on_arcs(g: NumericPolynomial, positive: np.ndarray, negative: np.ndarray, limit: int) -> list[np.ndarray]:
    """Bisect chords between opposite-sign unit vectors, projecting back to the sphere."""
    found = []
    for a in positive:
        if len(found) >= limit:
            break
        b = negative[np.argmax(negative @ a)]
        if np.dot(a, b) < -1 + 1e-9:
            continue

        def along(t: float) -> float:
            v = (1 - t) * a + t * b
            return float(g.value(v / np.linalg.norm(v)))

        t = bisect(along, 0.0, 1.0, xtol=1e-13, maxiter=BISECT_STEPS)
        v = (1 - t) * a + t * b
        found.append(v / np.linalg.norm(v))
    return found


def _circle_zeros(g: NumericPolynomial, count: int = 4096) -> list[np.ndarray]:
    theta = (np.arange(count) + 0.5) * (2 * np.pi / count)
    points = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    values = g.value(points)
    found = []
    for k in range(count):
        a, b = theta[k], theta[(k + 1) % count] + (2 * np.pi if k == count - 1 else 0.0)
        va, vb = values[k], values[(k + 1) % count]
        if va == 0:
            found.append(points[k])
        elif va * vb < 0:
            t = bisect(lambda s: float(g.value(np.array([np.cos(s), np.sin(s)]))), a, b, xtol=1e-13, maxiter=BISECT_STEPS)
            found.append(np.array([np.cos(t), np.sin(t)]))
    return found


def sign_change_locus(h: HomogeneousForm, samples: int = 2000, seed: int = 42) -> SignLocus:
    """Split h into odd and even parts and test each odd factor for a sign change.

    An odd factor is realizable when it takes both signs on the unit sphere;
    its evidence is a set of zero directions between opposite-sign samples.

    Raises:
        FactorizationTimeout: h exceeds the factorization degree cap.
    """
    factors = square_free_factor(h.base)
    variables = h.base.variables
    n = len(variables)
    rng = np.random.default_rng(seed)
    sphere = random_unit_vectors(rng, samples, n)

    odd_part = Polynomial.constant(variables, 1)
    even_part = Polynomial.constant(variables, 1)
    realizable = []
    for factor, multiplicity in factors.factors:
        if multiplicity // 2:
            even_part = even_part * factor ** (multiplicity // 2)
        if multiplicity % 2 == 0:
            continue
        odd_part = odd_part * factor
        g = NumericPolynomial(factor)
        values = g.value(sphere)
        scale = float(np.max(np.abs(values))) or 1.0
        positive = sphere[values > SIGN_EPS * scale]
        negative = sphere[values < -SIGN_EPS * scale]
        changes = len(positive) > 0 and len(negative) > 0
        evidence: list[np.ndarray] = []
        if changes:
            if n == 2:
                evidence = _circle_zeros(g)
            else:
                evidence = _zeros_on_arcs(g, positive, negative, MAX_EVIDENCE)
        if changes and evidence:
            merged = merge_directions(np.array(evidence), 1e-6)[:MAX_EVIDENCE]
            evidence_rows = tuple(tuple(float(x) for x in e) for e in merged)
        else:
            evidence_rows = ()
        logger.debug(f"factor {factor} (multiplicity {multiplicity}) sign change: {changes}")
        realizable.append(FactorSign(factor, multiplicity, bool(changes), evidence_rows))

    return SignLocus(
        constant=factors.constant,
        odd_part=odd_part,
        even_part=even_part,
        realizable=tuple(realizable),
        even_factors=tuple(factors.even),
    )


def is_flat(h: HomogeneousForm, locus: SignLocus) -> np.ndarray | None:
    """Unit normal when the realizable odd part is a single linear form, else None."""
    changing = locus.sign_change_factors
    if len(changing) != 1 or changing[0].factor.degree != 1:
        return None
    linear = changing[0].factor
    n = linear.nvars
    coefficients = np.zeros(n)
    for exponent, c in linear.terms.items():
        coefficients[exponent.index(1)] = float(c)
    return canonical_normal(coefficients)


def sampled_flat_normal(h: HomogeneousForm, samples: int = 2000, seed: int = 42, tol: float = 1e-6) -> np.ndarray | None:
    """Flatness without factorization: fit a plane through sign-change zeros of h."""
    g = NumericPolynomial(h.base)
    n = h.base.nvars
    rng = np.random.default_rng(seed)
    sphere = random_unit_vectors(rng, samples, n)
    values = g.value(sphere)
    scale = float(np.max(np.abs(values))) or 1.0
    positive = sphere[values > SIGN_EPS * scale]
    negative = sphere[values < -SIGN_EPS * scale]
    if len(positive) == 0 or len(negative) == 0:
        return None
    zeros = _circle_zeros(g) if n == 2 else _zeros_on_arcs(g, positive, negative, 4 * MAX_EVIDENCE)
    zeros = np.array(zeros)
    if len(zeros) < n - 1:
        return None
    _, singular, vt = np.linalg.svd(zeros, full_matrices=False)
    if singular[-1] > tol * np.sqrt(len(zeros)):
        return None
    return canonical_normal(vt[-1])


def flat_normal(h: HomogeneousForm, samples: int = 2000, seed: int = 42) -> tuple[np.ndarray | None, SignLocus | None]:
    """Symbolic flatness with a sampling fallback when factorization is capped."""
    try:
        locus = sign_change_locus(h, samples, seed)
    except FactorizationTimeout as exc:
        logger.warning(f"{exc}; falling back to sampled flatness")
        return sampled_flat_normal(h, samples, seed), None
    return is_flat(h, locus), locus
