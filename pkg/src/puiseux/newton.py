"""Newton polygons of bivariate polynomials at the origin."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from src.errors import DegenerateError, DimensionError
from src.expr.polynomial import Polynomial

Point = tuple[int, int]


@dataclass(frozen=True)
class Edge:
    """A lower edge from ``start`` (smaller i, larger j) to ``end`` of the support of Σ a_ij x^i y^j.

    Attributes:
        slope: μ = Δi / Δj, the exponent of the branches y ~ c x^μ the edge produces.
        face: Terms of the polynomial lying on the edge.
    """

    start: Point
    end: Point
    slope: Fraction
    face: Polynomial

    @property
    def p(self) -> int:
        return self.slope.numerator

    @property
    def q(self) -> int:
        return self.slope.denominator

    @property
    def height(self) -> int:
        return self.start[1] - self.end[1]

    @property
    def level(self) -> int:
        """L with q*i + p*j = L along the edge."""
        return self.q * self.start[0] + self.p * self.start[1]

    def face_polynomial(self) -> Polynomial:
        """Univariate Σ a_ij c^j over the edge."""
        terms: dict[tuple[int], Fraction] = {}
        for (i, j), a in self.face.terms.items():
            terms[(j,)] = terms.get((j,), Fraction(0)) + a
        return Polynomial(("c",), terms)

    def reduced_face(self) -> sympy.Poly:
        """Ψ with Σ a_ij c^j = c^j_end Ψ(c^q); its roots z give c^q = z."""
        z = sympy.Symbol("z")
        expr = sympy.Integer(0)
        for (i, j), a in self.face.terms.items():
            expr += sympy.Rational(a.numerator, a.denominator) * z ** ((j - self.end[1]) // self.q)
        return sympy.Poly(expr, z, domain=sympy.QQ)

    def to_dict(self) -> dict:
        return {
            "slope": str(self.slope),
            "start": list(self.start),
            "end": list(self.end),
            "face": str(self.face),
        }


@dataclass(frozen=True)
class NewtonPolygon:
    """Support and lower edges of f = x^a y^b g, computed for g.

    Attributes:
        support: Exponent pairs (i, j) of g.
        edges: Lower edges of g sorted by increasing slope.
        monomial: (a, b) of the split-off monomial factor.
    """

    support: tuple[Point, ...]
    edges: tuple[Edge, ...]
    monomial: Point = (0, 0)

    def to_dict(self) -> dict:
        return {
            "support": [list(s) for s in self.support],
            "edges": [e.to_dict() for e in self.edges],
            "monomial": list(self.monomial),
        }


def y_order(f: Polynomial) -> int:
    """ord_y f(0, y); -1 when x divides f."""
    return min((j for (i, j) in f.terms if i == 0), default=-1)


def lower_edges(f: Polynomial) -> tuple[Edge, ...]:
    """Edges of the lower hull from (0, ord_y f(0,y)) to the lowest row of the support.

    Requires f(0, y) to be nonzero.
    """
    n = y_order(f)
    if n < 0:
        raise DegenerateError(f"x divides {f}; shear before taking the Newton polygon")
    lowest: dict[int, int] = {}
    for i, j in f.terms:
        if j <= n:
            lowest[j] = min(lowest.get(j, i), i)
    points = sorted(((i, j) for j, i in lowest.items()), key=lambda pt: -pt[1])
    hull: list[Point] = []
    for c in points:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            if (b[0] - a[0]) * (b[1] - c[1]) >= (c[0] - b[0]) * (a[1] - b[1]):
                hull.pop()
            else:
                break
        hull.append(c)
    edges = []
    for a, b in zip(hull, hull[1:]):
        slope = Fraction(b[0] - a[0], a[1] - b[1])
        level = slope.denominator * a[0] + slope.numerator * a[1]
        face = Polynomial(
            f.variables,
            {e: c for e, c in f.terms.items() if slope.denominator * e[0] + slope.numerator * e[1] == level},
        )
        edges.append(Edge(a, b, slope, face))
    return tuple(edges)


def split_monomial(f: Polynomial) -> tuple[Polynomial, Point]:
    a = min(i for i, _ in f.terms)
    b = min(j for _, j in f.terms)
    if a == 0 and b == 0:
        return f, (0, 0)
    return Polynomial(f.variables, {(i - a, j - b): c for (i, j), c in f.terms.items()}), (a, b)


def newton_polygon(f: Polynomial) -> NewtonPolygon:
    """Newton polygon of a plane curve germ at the origin.

    Pure monomial factors x^a y^b are split off and reported; the edges
    belong to the remaining factor.

    Raises:
        DimensionError: f is not bivariate.
        DegenerateError: f is constant.
    """
    if f.nvars != 2:
        raise DimensionError(f"Newton polygons need 2 variables, got {f.nvars}")
    if f.is_constant:
        raise DegenerateError("constant polynomial has no Newton polygon")
    g, monomial = split_monomial(f)
    edges = lower_edges(g) if not g.is_constant else ()
    return NewtonPolygon(support=tuple(sorted(g.terms)), edges=edges, monomial=monomial)
