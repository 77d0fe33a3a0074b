"""Points at infinity of the projective closure and the germs of the closure there."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy
from scipy.optimize import least_squares

from src.cone.algebraic import flat_normal
from src.cone.descriptors import merge_directions
from src.config import config
from src.errors import DegenerateError, DimensionError, FactorizationTimeout
from src.expr.factor import square_free_factor
from src.expr.numeric import NumericPolynomial
from src.expr.polynomial import HomogeneousForm, Polynomial, leading_form
from src.logger import get_logger
from src.projective.homogenize import ProjectivePoly, chart_point, dehomogenize, homogenize

logger = get_logger(__name__)

DENOMINATOR_CAP = 10_000
POLISH_TOL = 1e-10
REPRESENTATIVES = 4


@dataclass(frozen=True)
class InfinityPoint:
    """A real point [u : 0] of the closure with the analysis of its chart germ.

    Attributes:
        direction: Affine part u, exact when ``exact`` holds.
        chart: Homogeneous coordinate set to 1 for the analysis.
        point: Coordinates of [u : 0] in that chart, the last one being w = 0.
        cone: Leading form of the chart polynomial at ``point`` (exact points only).
        cone_kind: hyperplane | flat | cone | even (no sign change) | unknown.
        verdict: smooth | C1-flagged | singular.
        signature: (positive, negative, zero) eigenvalue counts of a quadratic cone.
        asymptotes: Affine lines, as linear polynomials, the curve approaches towards this point.
    """

    direction: tuple
    chart: int
    point: tuple
    cone: HomogeneousForm | None
    cone_kind: str
    verdict: str
    exact: bool = True
    signature: tuple[int, int, int] | None = None
    asymptotes: tuple[Polynomial, ...] = ()

    def to_dict(self) -> dict:
        data = {
            "chart": self.chart,
            "point": [str(x) if isinstance(x, Fraction) else float(x) for x in self.point],
            "direction": [str(x) if isinstance(x, Fraction) else float(x) for x in self.direction],
            "cone_kind": self.cone_kind,
            "verdict": self.verdict,
            "exact": self.exact,
        }
        if self.cone is not None:
            data["cone"] = str(self.cone)
        if self.signature is not None:
            data["signature"] = list(self.signature)
        if self.asymptotes:
            data["asymptotes"] = [f"{a} = 0" for a in self.asymptotes]
        return data


@dataclass(frozen=True)
class ClosureReport:
    homogeneous: ProjectivePoly
    infinity_points: tuple[InfinityPoint, ...]

    @property
    def singular_points(self) -> tuple[InfinityPoint, ...]:
        return tuple(p for p in self.infinity_points if p.verdict != "smooth")

    @property
    def asymptotes(self) -> tuple[Polynomial, ...]:
        return tuple(a for p in self.infinity_points for a in p.asymptotes)

    def to_dict(self) -> dict:
        return {
            "homogeneous": str(self.homogeneous),
            "infinity_points": [p.to_dict() for p in self.infinity_points],
        }


def quadratic_signature(h: HomogeneousForm) -> tuple[int, int, int]:
    """Exact inertia (positive, negative, zero) of a quadratic form.

    The symmetric matrix has only real eigenvalues; they are isolated
    exactly from its characteristic polynomial.
    """
    if h.degree != 2:
        raise DimensionError(f"signature needs a quadratic form, got degree {h.degree}")
    n = h.base.nvars
    matrix = sympy.zeros(n, n)
    for e, c in h.base.terms.items():
        c = sympy.Rational(c.numerator, c.denominator)
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            matrix[i, i] += c
        else:
            matrix[i, j] += c / 2
            matrix[j, i] += c / 2
    lam = sympy.Symbol("lam")
    roots = sympy.Poly(matrix.charpoly(lam).as_expr(), lam).real_roots()
    positive = sum(1 for r in roots if r > 0)
    negative = sum(1 for r in roots if r < 0)
    return positive, negative, n - positive - negative


def equivalent_quadratic_cones(h1: HomogeneousForm, h2: HomogeneousForm) -> bool:
    """Whether two quadratic forms differ by a real linear change of variables and a sign."""
    p1, n1, z1 = quadratic_signature(h1)
    p2, n2, z2 = quadratic_signature(h2)
    return z1 == z2 and {p1, n1} == {p2, n2}


def _canonical_sign(u: np.ndarray) -> np.ndarray:
    for x in u:
        if abs(x) > 1e-12:
            return u if x > 0 else -u
    return u


def _rationalize(u: np.ndarray, predicate) -> tuple[Fraction, ...] | None:
    pivot = int(np.argmax(np.abs(u)))
    scaled = u / u[pivot]
    exact = tuple(Fraction(float(x)).limit_denominator(DENOMINATOR_CAP) for x in scaled)
    if exact[pivot] < 0:
        exact = tuple(-x for x in exact)
    return exact if predicate(exact) else None


def _binary_directions(top: Polynomial) -> list[tuple[tuple, bool]]:
    """Real zeros of a binary form, as (direction, exact) pairs."""
    directions: list[tuple[tuple, bool]] = []
    try:
        factors = [g for g, _ in square_free_factor(top).factors]
    except FactorizationTimeout:
        factors = [top]
    for g in factors:
        if g.degree == 1:
            a = g.terms.get((1, 0), Fraction(0))
            b = g.terms.get((0, 1), Fraction(0))
            direction = (-b, a) if (-b > 0 or (-b == 0 and a > 0)) else (b, -a)
            directions.append((direction, True))
            continue
        t = sympy.Symbol("t")
        univariate = sympy.Poly(g.to_sympy().as_expr().subs({g.symbols[0]: t, g.symbols[1]: 1}), t)
        for root in univariate.real_roots():
            if root.is_Rational:
                directions.append(((Fraction(int(root.p), int(root.q)), Fraction(1)), True))
            else:
                directions.append(((float(root.evalf(30)), 1.0), False))
        if g.evaluate((1, 0)) == 0:
            directions.append(((Fraction(1), Fraction(0)), True))
    return directions


def fibonacci_sphere(count: int) -> np.ndarray:
    i = np.arange(count) + 0.5
    phi = np.arccos(1 - 2 * i / count)
    theta = np.pi * (1 + 5 ** 0.5) * i
    return np.stack([np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)], axis=1)


def _polish(residual, seeds: np.ndarray) -> list[np.ndarray]:
    found = []
    for seed in seeds:
        result = least_squares(residual, seed, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200)
        if np.linalg.norm(residual(result.x)) < POLISH_TOL:
            found.append(_canonical_sign(result.x / np.linalg.norm(result.x)))
    return found


def _spatial_directions(top: Polynomial, next_part: Polynomial, samples: int) -> list[tuple[tuple, bool]]:
    """Singular points at infinity plus a few regular representatives, found on the sphere and polished."""
    g = NumericPolynomial(top)
    below = NumericPolynomial(next_part) if not next_part.is_zero else None
    sphere = fibonacci_sphere(samples)

    def singular_residual(u: np.ndarray) -> np.ndarray:
        extra = [below.value(u)] if below is not None else [0.0]
        return np.concatenate([g.gradient(u), [g.value(u)], extra, [u @ u - 1.0]])

    def zero_residual(u: np.ndarray) -> np.ndarray:
        return np.array([g.value(u), u @ u - 1.0])

    gradients = np.linalg.norm(g.gradient(sphere), axis=1)
    lower = np.abs(below.value(sphere)) if below is not None else np.zeros(len(sphere))
    singular_score = gradients + lower + np.abs(g.value(sphere))
    regular_score = np.abs(g.value(sphere)) / np.maximum(gradients, 1e-12)

    singular = _polish(singular_residual, sphere[np.argsort(singular_score)[:32]])
    regular = _polish(zero_residual, sphere[np.argsort(regular_score)[:64]])

    def vanishes(u: tuple) -> bool:
        return top.evaluate(u) == 0

    def is_singular(u: tuple) -> bool:
        return vanishes(u) and all(d.evaluate(u) == 0 for d in top.gradient) and next_part.evaluate(u) == 0

    results: list[tuple[tuple, bool]] = []
    for candidates, predicate, limit in ((singular, is_singular, None), (regular, vanishes, REPRESENTATIVES)):
        if not candidates:
            continue
        merged = merge_directions(np.vstack([candidates, -np.array(candidates)]), config.numeric.angular_tol)
        kept = []
        for u in merged:
            u = _canonical_sign(u)
            if any(np.allclose(u, v) for v in kept):
                continue
            kept.append(u)
        for u in kept[:limit]:
            exact = _rationalize(u, predicate)
            entry = (exact, True) if exact is not None else (tuple(float(x) for x in u), False)
            if entry not in results:
                results.append(entry)
    return results


def _asymptotes(f: Polynomial, h: HomogeneousForm, chart: int, point: tuple) -> tuple[Polynomial, ...]:
    """Linear factors αX + βW of a plane chart cone, pulled back to α(x_o - a x_c) + β = 0."""
    try:
        factors = [g for g, _ in square_free_factor(h.base).factors if g.degree == 1]
    except FactorizationTimeout:
        return ()
    other = 1 - chart
    a = point[0]
    x_other = Polynomial.variable(f.variables, f.variables[other])
    x_chart = Polynomial.variable(f.variables, f.variables[chart])
    lines = []
    for g in factors:
        alpha = g.terms.get((1, 0), Fraction(0))
        beta = g.terms.get((0, 1), Fraction(0))
        if alpha == 0:
            continue
        line = (x_other - x_chart.scale(a)).scale(alpha) + Polynomial.constant(f.variables, beta)
        lines.append(line.scale(1 / alpha))
    return tuple(lines)


def analyze_infinity_point(f: Polynomial, F: ProjectivePoly, direction: tuple, exact: bool) -> InfinityPoint:
    """Run the tangent-cone analysis of the closure at [direction : 0] in the chart of its largest coordinate."""
    chart = int(np.argmax([abs(float(x)) for x in direction]))
    if not exact:
        u = np.asarray(direction, dtype=float)
        u = u / u[chart]
        point = tuple(float(x) for i, x in enumerate(u) if i != chart) + (0.0,)
        top = NumericPolynomial(f.homogeneous_part(f.degree))
        lower = NumericPolynomial(f.homogeneous_part(f.degree - 1))
        grad = np.concatenate([top.gradient(u), [lower.value(u)]])
        smooth = np.linalg.norm(grad) > 1e-8
        return InfinityPoint(
            direction=direction,
            chart=chart,
            point=point,
            cone=None,
            cone_kind="hyperplane" if smooth else "unknown",
            verdict="smooth" if smooth else "singular",
            exact=False,
        )
    point = chart_point(direction, chart)
    germ = dehomogenize(F, chart).translate(point)
    h = leading_form(germ)
    signature = None
    if h.degree == 1:
        kind, verdict = "hyperplane", "smooth"
    else:
        normal, locus = flat_normal(h, config.numeric.sphere_samples, config.runtime.seed)
        if normal is not None:
            kind, verdict = "flat", "C1-flagged"
        elif locus is not None and not locus.sign_change_factors:
            kind, verdict = "even", "singular"
        else:
            kind, verdict = "cone", "singular"
        if h.degree == 2:
            signature = quadratic_signature(h)
    asymptotes = _asymptotes(f, h, chart, point) if f.nvars == 2 else ()
    logger.debug(f"point at infinity {direction} (chart {chart}): {kind}, {verdict}")
    return InfinityPoint(
        direction=direction,
        chart=chart,
        point=point,
        cone=h,
        cone_kind=kind,
        verdict=verdict,
        signature=signature,
        asymptotes=asymptotes,
    )


def infinity_directions(f: Polynomial, samples: int | None = None) -> list[tuple[tuple, bool]]:
    """Real zeros [u : 0] of the closure, as (u, exact) pairs."""
    top = f.homogeneous_part(f.degree)
    if f.nvars == 2:
        return _binary_directions(top)
    if f.nvars == 3:
        samples = samples if samples is not None else config.numeric.sphere_samples
        return _spatial_directions(top, f.homogeneous_part(f.degree - 1), samples)
    raise DimensionError(f"closure analysis supports 2 or 3 variables, got {f.nvars}")


def projective_closure(f: Polynomial, samples: int | None = None, threads: int | None = None) -> ClosureReport:
    """Homogenize f and analyze every real point at infinity found.

    Raises:
        DegenerateError: f is zero or constant.
    """
    if f.is_constant:
        raise DegenerateError(f"{f} has no projective closure to analyze")
    F = homogenize(f)
    directions = infinity_directions(f, samples)
    threads = threads if threads is not None else config.runtime.threads
    with ThreadPoolExecutor(max_workers=threads) as pool:
        points = list(pool.map(lambda item: analyze_infinity_point(f, F, *item), directions))
    logger.info(f"closure of {f}: {len(points)} real points at infinity, {sum(p.verdict != 'smooth' for p in points)} singular")
    return ClosureReport(homogeneous=F, infinity_points=tuple(points))