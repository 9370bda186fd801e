"""Recursive descent parser for polynomial coefficient expressions.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' integer)?
    atom   := integer | identifier | '(' expr ')'

Identifiers are the declared variable names plus the reserved parameter
``a``.  Rationals are written ``p/q``; division is only allowed by nonzero
constant expressions (which may involve ``a``), never by variables.
Exponents must be literal non-negative integers.

Errors carry the character position and a description of what was expected,
so job files can point at the offending column.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polynomials import Polynomial
from .scalars import PARAM_NAME, Scalar


class ParseError(ValueError):
    """Syntax or semantic error in an expression, with a position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


@dataclass(frozen=True)
class _Token:
    kind: str  # number | ident | op | end
    text: str
    position: int


_OPS = set("+-*/^()")


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            # decimal literals stay exact: Fraction("0.5") == 1/2
            if i + 1 < n and text[i] == "." and text[i + 1].isdigit():
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
            tokens.append(_Token("number", text[start:i], start))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(_Token("ident", text[start:i], start))
            continue
        if ch in _OPS:
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], var_names: Sequence[str]):
        self._tokens = tokens
        self._pos = 0
        self._vars = {name: i for i, name in enumerate(var_names)}
        self._num_vars = len(var_names)

    def _peek(self) -> _Token:
        return self._tokens[self._pos]

    def _advance(self) -> _Token:
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def _expect_op(self, op: str) -> None:
        tok = self._peek()
        if tok.kind == "op" and tok.text == op:
            self._advance()
            return
        raise ParseError(f"expected {op!r}", tok.position)

    def parse(self) -> Polynomial:
        value = self._expr()
        tok = self._peek()
        if tok.kind != "end":
            raise ParseError(
                f"unexpected {tok.text!r}; expected '+', '-', '*', '/', '^' or end of input",
                tok.position,
            )
        return value

    def _expr(self) -> Polynomial:
        value = self._term()
        while True:
            tok = self._peek()
            if tok.kind == "op" and tok.text in "+-":
                self._advance()
                rhs = self._term()
                value = value + rhs if tok.text == "+" else value - rhs
            else:
                return value

    def _term(self) -> Polynomial:
        value = self._factor()
        while True:
            tok = self._peek()
            if tok.kind == "op" and tok.text in "*/":
                self._advance()
                rhs = self._factor()
                if tok.text == "*":
                    value = value * rhs
                else:
                    value = self._divide(value, rhs, tok.position)
            else:
                return value

    def _divide(self, num: Polynomial, den: Polynomial, position: int) -> Polynomial:
        if not den.is_constant():
            raise ParseError("division by a non-constant expression", position)
        c = den.constant_coefficient()
        if c.is_zero:
            raise ParseError("division by zero", position)
        return num.scale(Scalar.of(1) / c)

    def _factor(self) -> Polynomial:
        tok = self._peek()
        if tok.kind == "op" and tok.text == "-":
            self._advance()
            return -self._factor()
        return self._power()

    def _power(self) -> Polynomial:
        base = self._atom()
        tok = self._peek()
        if tok.kind == "op" and tok.text == "^":
            self._advance()
            exp_tok = self._peek()
            if exp_tok.kind != "number" or not exp_tok.text.isdigit():
                raise ParseError(
                    "exponent must be a non-negative integer literal", exp_tok.position
                )
            self._advance()
            return base ** int(exp_tok.text)
        return base

    def _atom(self) -> Polynomial:
        tok = self._advance()
        if tok.kind == "number":
            return Polynomial.constant(self._num_vars, Fraction(tok.text))
        if tok.kind == "ident":
            if tok.text == PARAM_NAME:
                return Polynomial.parameter(self._num_vars)
            index = self._vars.get(tok.text)
            if index is None:
                known = ", ".join(sorted(self._vars) + [PARAM_NAME])
                raise ParseError(
                    f"unknown identifier {tok.text!r} (known: {known})", tok.position
                )
            return Polynomial.variable(self._num_vars, index)
        if tok.kind == "op" and tok.text == "(":
            value = self._expr()
            self._expect_op(")")
            return value
        raise ParseError(
            f"unexpected {tok.text or 'end of input'!r}; expected a number, "
            "identifier, '(' or '-'",
            tok.position,
        )


def parse_poly_expr(text: str, var_names: Sequence[str]) -> Polynomial:
    """Parse an expression into a polynomial over the declared variables.

    ``a`` always denotes the formal parameter and cannot be declared as a
    variable name.
    """
    names = list(var_names)
    if PARAM_NAME in names:
        raise ValueError(f"{PARAM_NAME!r} is reserved for the formal parameter")
    if len(set(names)) != len(names):
        raise ValueError("duplicate variable names")
    return _Parser(_tokenize(text), names).parse()


def parse_scalar_expr(text: str) -> Scalar:
    """Parse a constant expression (numbers and ``a`` only) into a scalar."""
    poly = parse_poly_expr(text, [])
    return poly.constant_coefficient()
