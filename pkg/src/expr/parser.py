"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := term { ("+"|"-") term }
    term   := factor { "*" factor }
    factor := "-" factor | base [ "^" uint ]
    base   := ident | number | "(" expr ")"
    ident  := "x" | "y" | "z" | "x" uint
    number := uint [ "/" uint ] | decimal

Unary minus binds looser than ``^`` so ``-x^2`` is -(x^2).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple, Sequence

from src.errors import ParseError
from src.expr.polynomial import Polynomial

MAX_VARIABLES = 8
MAX_EXPONENT = 256

_TOKEN_RE = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<number>\d+\.\d*|\.\d+|\d+)
  | (?P<ident>x\d+|[xyz])
  | (?P<op>[-+*^()/])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str
    text: str
    offset: int


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    """Split text into tokens, raising ParseError at the first unknown character."""
    tokens: list[Token] = []
    index = 0
    while index < len(text):
        match = _TOKEN_RE.match(text, index)
        if match is None:
            raise ParseError(f"unexpected character {text[index]!r}", _byte_offset(text, index))
        kind = match.lastgroup
        if kind != "space":
            tokens.append(Token(kind, match.group(), _byte_offset(text, index)))
        index = match.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


def infer_variables(tokens: Sequence[Token]) -> tuple[str, ...]:
    """Pick the ambient variable list from the identifiers used.

    ``x, y`` for plane expressions, ``x, y, z`` once ``z`` appears, and
    ``x1..xk`` for indexed names.
    """
    names = {t.text for t in tokens if t.kind == "ident"}
    indexed = {n for n in names if len(n) > 1}
    if indexed:
        plain = names - indexed
        if plain:
            token = next(t for t in tokens if t.kind == "ident" and t.text in plain)
            raise ParseError(f"cannot mix {token.text!r} with indexed variables", token.offset)
        top = max(int(n[1:]) for n in indexed)
        if top == 0:
            raise ParseError("variable indices start at 1", tokens[0].offset)
        if top > MAX_VARIABLES:
            token = next(t for t in tokens if t.kind == "ident" and int(t.text[1:] or 0) == top)
            raise ParseError(f"unsupported variable count {top} (maximum {MAX_VARIABLES})", token.offset)
        return tuple(f"x{i}" for i in range(1, max(top, 2) + 1))
    if "z" in names:
        return ("x", "y", "z")
    return ("x", "y")


class Parser:
    """Parse a token stream into a Polynomial over a fixed variable list."""

    def __init__(self, tokens: list[Token], variables: Sequence[str]):
        self.tokens = tokens
        self.variables = tuple(variables)
        self.position = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.current
        self.position += 1
        return token

    def expect(self, text: str) -> Token:
        if self.current.text != text:
            raise ParseError(f"expected {text!r}, found {self.current.text or 'end of input'!r}", self.current.offset)
        return self.advance()

    def parse(self) -> Polynomial:
        if self.current.kind == "end":
            raise ParseError("empty expression", self.current.offset)
        result = self.expr()
        if self.current.kind != "end":
            self._fail_trailing()
        return result

    def _fail_trailing(self) -> None:
        token = self.current
        if token.kind in ("ident", "number") or token.text == "(":
            raise ParseError("implicit multiplication is not accepted; use '*'", token.offset)
        if token.text == "^":
            raise ParseError("chained exponents are not accepted", token.offset)
        if token.text == "/":
            raise ParseError("division is only allowed inside rational literals", token.offset)
        raise ParseError(f"unexpected {token.text!r}", token.offset)

    def expr(self) -> Polynomial:
        result = self.term()
        while self.current.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> Polynomial:
        result = self.factor()
        while self.current.text == "*":
            star = self.advance()
            if self.current.text == "*":
                raise ParseError("unsupported operator '**'; use '^'", star.offset)
            result = result * self.factor()
        return result

    def factor(self) -> Polynomial:
        if self.current.text == "-":
            self.advance()
            return -self.factor()
        value = self.base()
        if self.current.text == "^":
            self.advance()
            value = value ** self.exponent()
        return value

    def exponent(self) -> int:
        token = self.current
        if token.kind != "number" or "." in token.text:
            raise ParseError("non-integer exponent", token.offset)
        self.advance()
        if self.current.text == "/":
            raise ParseError("non-integer exponent", token.offset)
        k = int(token.text)
        if k > MAX_EXPONENT:
            raise ParseError(f"exponent {k} exceeds {MAX_EXPONENT}", token.offset)
        return k

    def base(self) -> Polynomial:
        token = self.current
        if token.kind == "ident":
            self.advance()
            if token.text not in self.variables:
                raise ParseError(f"unknown variable {token.text!r}", token.offset)
            return Polynomial.variable(self.variables, token.text)
        if token.kind == "number":
            return Polynomial.constant(self.variables, self.number())
        if token.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if token.kind == "end":
            raise ParseError("unexpected end of input", token.offset)
        raise ParseError(f"unexpected {token.text!r}", token.offset)

    def number(self) -> Fraction:
        token = self.advance()
        value = Fraction(token.text)
        if self.current.text == "/":
            slash = self.advance()
            if "." in token.text or self.current.kind != "number" or "." in self.current.text:
                raise ParseError("rational literals are uint/uint", slash.offset)
            denominator = int(self.advance().text)
            if denominator == 0:
                raise ParseError("zero denominator", slash.offset)
            value = value / denominator
        return value


def parse(text: str, variables: Sequence[str] | None = None) -> Polynomial:
    """Parse expression text into a canonical Polynomial.

    Args:
        text: Expression following the module grammar.
        variables: Ambient variable list; inferred from the text when omitted.

    Returns:
        The expanded polynomial.

    Raises:
        ParseError: Syntax errors, unsupported variable counts and
            non-integer exponents, with the byte offset of the culprit.
    """
    tokens = tokenize(text)
    if variables is None:
        variables = infer_variables(tokens)
    elif len(variables) > MAX_VARIABLES:
        raise ParseError(f"unsupported variable count {len(variables)} (maximum {MAX_VARIABLES})", 0)
    return Parser(tokens, variables).parse()


def variables_for_dimension(n: int) -> tuple[str, ...]:
    """Default variable names for an ambient dimension."""
    if n == 2:
        return ("x", "y")
    if n == 3:
        return ("x", "y", "z")
    if 1 <= n <= MAX_VARIABLES:
        return tuple(f"x{i}" for i in range(1, n + 1))
    raise ParseError(f"unsupported variable count {n} (maximum {MAX_VARIABLES})", 0)
