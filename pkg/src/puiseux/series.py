"""Truncated Newton-Puiseux expansion of plane curve germs at the origin.

Every branch is carried as a parametrization

    x = ε t^e,    y = Σ a_k t^k

in the (possibly sheared) coordinates of the germ. The recursion keeps
exact rational coefficients and splits the parameter by sign when an
edge has an even denominator, so that every real branch gets a real
parametrization.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import mpmath as mp
import sympy
from sympy import integer_nthroot

from src.config import config
from src.errors import AnalysisError, DegenerateError, DimensionError, FactorizationTimeout, NotOnVarietyError, PuiseuxDepthError
from src.expr.factor import square_free_part
from src.expr.polynomial import Polynomial
from src.logger import get_logger
from src.puiseux.newton import Edge, NewtonPolygon, lower_edges, newton_polygon, y_order

logger = get_logger(__name__)

XY = ("x", "y")
T = ("t",)
PRECISION = 40
ROOT_BITS = 128

Coefficient = Fraction | mp.mpf


@dataclass(frozen=True)
class PuiseuxBranch:
    """One branch x = ε t^e, y = Σ a_k t^k, or the leading part of one.

    Attributes:
        e: Ramification index.
        epsilon: Sign of x along the parameter, ±1.
        terms: (k, a_k) pairs with increasing k; y-exponent k/e.
        truncation_order: Order in x up to which the series is valid;
            None for an exact polynomial branch.
        real: False for branches whose next coefficient is non-real.
        numeric: The last coefficient is an irrational root held as a
            ROOT_BITS-bit mpmath float.
        multiplicity: Number of coincident branches this entry stands for.
        shear: c of the shear x -> x + c*y applied before expanding.
    """

    e: int
    epsilon: int
    terms: tuple[tuple[int, Coefficient], ...]
    truncation_order: Fraction | None
    real: bool = True
    numeric: bool = False
    multiplicity: int = 1
    shear: int = 0

    @property
    def exact(self) -> bool:
        return self.truncation_order is None

    @property
    def exponents(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(k, self.e) for k, _ in self.terms)

    @property
    def coefficients(self) -> tuple[Coefficient, ...]:
        return tuple(a for _, a in self.terms)

    @property
    def weight(self) -> int:
        """Number of roots y(x) of f this entry accounts for."""
        return self.e * self.multiplicity

    def residual_valuation(self, f: Polynomial) -> Fraction | None:
        """Order in x of f along the truncated series; None when f vanishes identically on it.

        Requires rational coefficients; ``f`` is in the original, unsheared coordinates.
        """
        if self.numeric:
            raise AnalysisError("residual valuation needs exact coefficients")
        y = Polynomial(T, {(k,): a for k, a in self.terms})
        x = Polynomial(T, {(self.e,): self.epsilon}) + y.scale(self.shear)
        residual = f.compose([x, y], T)
        if residual.is_zero:
            return None
        return Fraction(residual.order, self.e)

    def to_dict(self) -> dict:
        return {
            "e": self.e,
            "epsilon": self.epsilon,
            "terms": [[Fraction(k, self.e).numerator, Fraction(k, self.e).denominator, _json_coefficient(a)] for k, a in self.terms],
            "truncation_order": str(self.truncation_order) if self.truncation_order is not None else None,
            "real": self.real,
            "numeric": self.numeric,
            "multiplicity": self.multiplicity,
            "shear": self.shear,
        }


def _json_coefficient(a: Coefficient) -> str:
    return str(a) if isinstance(a, Fraction) else mp.nstr(a, mp.libmp.prec_to_dps(ROOT_BITS))


@dataclass
class _Node:
    """State of one path of the recursion.

    G(s, w) = f(ε s^e, P(s) + τ s^k w) / s^(shift), with x, y standing for s, w.
    """

    G: Polynomial
    e: int = 1
    epsilon: int = 1
    tau: int = 1
    k: int = 0
    P: dict[int, Coefficient] = field(default_factory=dict)
    depth: int = 0

    def branch(self, truncation_order: Fraction | None, **kwargs) -> PuiseuxBranch:
        return PuiseuxBranch(
            e=self.e,
            epsilon=self.epsilon,
            terms=tuple(sorted((k, a) for k, a in self.P.items() if a)),
            truncation_order=truncation_order,
            **kwargs,
        )


@dataclass(frozen=True)
class PuiseuxExpansion:
    """All branches of a germ with the bookkeeping that produced them."""

    branches: tuple[PuiseuxBranch, ...]
    polygon: NewtonPolygon
    germ: Polynomial
    shear: int
    y_order: int
    order: Fraction

    @property
    def real_branches(self) -> tuple[PuiseuxBranch, ...]:
        return tuple(b for b in self.branches if b.real)

    @property
    def weight(self) -> int:
        return sum(b.weight for b in self.branches)

    def to_dict(self) -> dict:
        return {
            "edges": [e.to_dict() for e in self.polygon.edges],
            "shear": self.shear,
            "y_order": self.y_order,
            "order": str(self.order),
            "branches": [b.to_dict() for b in self.branches],
        }


def shear_off_x(f: Polynomial) -> tuple[Polynomial, int]:
    """Replace f by f(x + c*y, y) with the least c >= 1 making f(0, y) nonzero, when x divides f."""
    if y_order(f) >= 0:
        return f, 0
    x, y = Polynomial.generators(f.variables)
    for c in range(1, f.degree + 2):
        sheared = f.compose([x + y.scale(c), y])
        if y_order(sheared) >= 0:
            logger.debug(f"sheared {f} by x -> x + {c}y")
            return sheared, c
    raise DegenerateError(f"no shear makes {f} regular in y")


def _real_roots(psi: sympy.Poly) -> tuple[list[tuple[sympy.Expr, int]], int]:
    """Real roots of Ψ with multiplicities, and the number of non-real roots counted with multiplicity."""
    roots = psi.real_roots(multiple=False) if psi.degree() > 0 else []
    counted = sum(m for _, m in roots)
    return [(r, int(m)) for r, m in roots], psi.degree() - counted


def _exact_root(z: sympy.Expr, q: int) -> Fraction | None:
    """|z|^(1/q) as a rational, when it is one."""
    if not z.is_Rational:
        return None
    num, exact_num = integer_nthroot(abs(int(z.p)), q)
    den, exact_den = integer_nthroot(int(z.q), q)
    if exact_num and exact_den:
        return Fraction(num, den)
    return None


def _irrational_root(z: sympy.Expr, q: int, sign: int) -> mp.mpf:
    """sign · |z|^(1/q) to ROOT_BITS bits."""
    with mp.workprec(ROOT_BITS):
        return sign * mp.root(abs(mp.mpf(sympy.N(z, PRECISION))), q)


def _step(G: Polynomial, edge: Edge, sigma: int, c: Fraction) -> Polynomial:
    """G(σ s^q, s^p (c + w)) / s^L."""
    w = Polynomial.variable(XY, "y")
    image_x = Polynomial(XY, {(edge.q, 0): sigma})
    image_y = Polynomial(XY, {(edge.p, 0): 1}) * (w + c)
    moved = G.compose([image_x, image_y], XY)
    level = edge.level
    terms = {}
    for (i, j), a in moved.terms.items():
        if i < level:
            raise AnalysisError(f"Newton step left a term of order {i} below the edge level {level}")
        terms[(i - level, j)] = a
    return Polynomial(XY, terms)


def _expand(node: _Node, order: Fraction, cap: int, out: list[PuiseuxBranch]) -> None:
    if node.depth > cap:
        raise PuiseuxDepthError(f"Newton-Puiseux recursion exceeded depth {cap}", partial=list(out))
    G = node.G
    n = y_order(G)
    j_min = min(j for _, j in G.terms)
    if j_min > 0:
        out.append(node.branch(None, multiplicity=j_min))
    if n == j_min:
        return
    for edge in lower_edges(G):
        exponent = Fraction(node.k * edge.q + edge.p, node.e * edge.q)
        if n == 1 and exponent > order:
            out.append(node.branch(order))
            continue
        roots, nonreal = _real_roots(edge.reduced_face())
        if nonreal:
            out.append(PuiseuxBranch(
                e=node.e * edge.q,
                epsilon=node.epsilon,
                terms=tuple(sorted((kk * edge.q, a) for kk, a in node.P.items() if a)),
                truncation_order=exponent,
                real=False,
                multiplicity=nonreal,
            ))
        for z, m in roots:
            _follow_root(node, edge, z, m, order, cap, out)


def _follow_root(node: _Node, edge: Edge, z: sympy.Expr, m: int, order: Fraction, cap: int, out: list[PuiseuxBranch]) -> None:
    q = edge.q
    sign = 1 if z > 0 else -1
    sigma = 1 if q % 2 else sign
    e, k = node.e * q, node.k * q + edge.p
    epsilon = node.epsilon * sigma ** node.e
    tau = node.tau * sigma ** node.k
    P = {kk * q: a * sigma ** kk for kk, a in node.P.items()}
    magnitude = _exact_root(z, q)
    c_sign = sign if q % 2 else 1
    if magnitude is None:
        P[k] = _irrational_root(z, q, tau * c_sign)
        logger.debug(f"irrational face root {z}; branch truncated at exponent {Fraction(k, e)}")
        out.append(_Node(G=node.G, e=e, epsilon=epsilon, tau=tau, k=k, P=P).branch(Fraction(k, e), numeric=True, multiplicity=m))
        return
    c = c_sign * magnitude
    P[k] = tau * c
    child = _Node(G=_step(node.G, edge, sigma, c), e=e, epsilon=epsilon, tau=tau, k=k, P=P, depth=node.depth + 1)
    _expand(child, order, cap, out)


def _sort_key(branch: PuiseuxBranch) -> tuple:
    leading = branch.exponents[0] if branch.terms else Fraction(10 ** 9)
    return (not branch.real, leading, branch.e, branch.epsilon, str(branch.terms))


def _germ(f: Polynomial) -> Polynomial:
    if f.nvars != 2:
        raise DimensionError(f"Puiseux expansion needs a plane curve, got {f.nvars} variables")
    if f.is_constant:
        raise DegenerateError(f"{f} defines no curve")
    if f.constant_term != 0:
        raise NotOnVarietyError(f"{f} does not vanish at the origin")
    try:
        reduced = square_free_part(f)
    except FactorizationTimeout:
        logger.warning(f"expanding {f} without square-free reduction")
        reduced = f
    return Polynomial(XY, dict(reduced.terms))


def expand_germ(f: Polynomial, order: Fraction | int | None = None, depth_cap: int | None = None) -> PuiseuxExpansion:
    """Newton-Puiseux expansion of the germ of Z(f) at the origin.

    Args:
        f: Bivariate polynomial with f(0, 0) = 0.
        order: x-order to which branches are expanded; defaults to
            twice the first edge slope plus two.
        depth_cap: Maximum recursion depth; defaults to the configured cap.

    Raises:
        NotOnVarietyError: f(0, 0) != 0.
        PuiseuxDepthError: The recursion hit the cap; ``partial`` holds the branches found.
    """
    g = _germ(f)
    sheared, shear = shear_off_x(g)
    edges = lower_edges(sheared)
    if order is None:
        order = 2 * edges[0].slope + 2 if edges else Fraction(2)
    order = Fraction(order)
    cap = depth_cap if depth_cap is not None else config.symbolic.puiseux_depth_cap

    out: list[PuiseuxBranch] = []
    _expand(_Node(G=sheared), order, cap, out)
    branches = tuple(sorted((replace(b, shear=shear) for b in out), key=_sort_key))

    n0 = y_order(sheared)
    weight = sum(b.weight for b in branches)
    if weight != n0:
        raise AnalysisError(f"branch weights sum to {weight}, expected ord_y = {n0}")
    for b in branches:
        if b.real and not b.numeric and not b.exact:
            v = b.residual_valuation(g)
            if v is not None and v <= b.truncation_order:
                raise AnalysisError(f"residual order {v} does not exceed truncation order {b.truncation_order}")

    logger.info(f"{len(branches)} Puiseux branches of {f} at the origin (shear {shear}, order {order})")
    return PuiseuxExpansion(
        branches=branches,
        polygon=newton_polygon(sheared),
        germ=g,
        shear=shear,
        y_order=n0,
        order=order,
    )


def puiseux_expand(f: Polynomial, order: Fraction | int | None = None, depth_cap: int | None = None) -> list[PuiseuxBranch]:
    """Branches of Z(f) at the origin up to the given x-order."""
    return list(expand_germ(f, order, depth_cap).branches)


def branch_points(branch: PuiseuxBranch, parameters: Sequence[float]) -> list[tuple[float, float]]:
    """Evaluate the truncated parametrization at float parameter values, in unsheared coordinates."""
    points = []
    for t in parameters:
        y = sum(float(a) * t ** k for k, a in branch.terms)
        x = branch.epsilon * t ** branch.e + branch.shear * y
        points.append((x, y))
    return points
