"""Text form of differential operators: lexer, recursive-descent parser, printer.

Grammar (LL(1), explicit ``*``)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := power ('*' power)*
    power  := atom ['^' ['-'] int]
    atom   := number | ident | deriv | '(' expr ')'

``i`` is the imaginary unit; ``dt``, ``dr``, ``dzeta``, ``dmu`` and their
body-indexed forms are derivative tokens. Products compose operators, so
``t*dt`` is t∂_t while ``dt*t`` is 1 + t∂_t.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .diffop import DiffOp, op_compose
from .errors import ExprSyntaxError, UnknownSymbolError
from .exactalg import I, STANDARD_RINGS, Ring, select_ring

logger = logging.getLogger("metawardpy.parser")

IMAGINARY_UNIT = "i"

_TOKEN_RE = re.compile(
    r"(?P<space>[ \t\r]+)|(?P<newline>\n)"
    r"|(?P<number>\d+(?:/\d+|\.\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^()])")

_KNOWN_NAMES = frozenset(name for ring in STANDARD_RINGS for name in ring.names)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class Symbol:
    """Resolved identifier: a variable, or the derivative with respect to one."""

    name: str
    derivative: bool


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise ExprSyntaxError(f"Unexpected character {text[pos]!r}", line, column)
        kind = match.lastgroup
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind != "space":
            tokens.append(Token(kind, match.group(), line, column))
        pos = match.end()
    return tokens


def resolve_symbol(token: Token) -> Optional[Symbol]:
    """Map an identifier token to a Symbol (None for the imaginary unit)."""
    name = token.text
    if name == IMAGINARY_UNIT:
        return None
    if name in _KNOWN_NAMES:
        return Symbol(name, False)
    if name.startswith("d") and name[1:] in _KNOWN_NAMES:
        target = name[1:]
        if not any(ring.symbol(target).differentiable for ring in STANDARD_RINGS if target in ring):
            raise ExprSyntaxError(
                f"Derivative of non-differentiable symbol '{target}'", token.line, token.column)
        return Symbol(target, True)
    raise UnknownSymbolError(name, token.line, token.column)


def symbols_of(texts: Iterable[str]) -> set[str]:
    names = set()
    for text in texts:
        for token in tokenize(text):
            if token.kind == "ident":
                symbol = resolve_symbol(token)
                if symbol is not None:
                    names.add(symbol.name)
    return names


class _Parser:
    def __init__(self, text: str, ring: Ring) -> None:
        self._tokens = tokenize(text)
        self._pos = 0
        self._ring = ring
        self._end_line = text.count("\n") + 1
        self._end_column = len(text) - text.rfind("\n")

    def parse(self) -> DiffOp:
        op = self._expr()
        if self._peek() is not None:
            self._fail(self._peek())
        return op

    def _peek(self) -> Optional[Token]:
        return self._tokens[self._pos] if self._pos < len(self._tokens) else None

    def _next(self) -> Token:
        token = self._peek()
        if token is None:
            raise ExprSyntaxError("Unexpected end of input", self._end_line, self._end_column)
        self._pos += 1
        return token

    def _accept(self, *texts: str) -> Optional[Token]:
        token = self._peek()
        if token is not None and token.kind == "op" and token.text in texts:
            self._pos += 1
            return token
        return None

    @staticmethod
    def _fail(token: Token):
        raise ExprSyntaxError(f"Unexpected {token.text!r}", token.line, token.column)

    def _expr(self) -> DiffOp:
        sign = self._accept("+", "-")
        op = self._term()
        if sign is not None and sign.text == "-":
            op = -op
        while (sign := self._accept("+", "-")) is not None:
            rhs = self._term()
            op = op + rhs if sign.text == "+" else op - rhs
        return op

    def _term(self) -> DiffOp:
        op = self._power()
        while self._accept("*") is not None:
            op = op_compose(op, self._power())
        return op

    def _power(self) -> DiffOp:
        start = self._peek()
        op, symbol = self._atom()
        if self._accept("^") is None:
            return op
        negative = self._accept("-") is not None
        token = self._next()
        if token.kind != "number" or not token.text.isdigit():
            raise ExprSyntaxError("Exponent must be an integer", token.line, token.column)
        exponent = int(token.text)
        if negative:
            if symbol is None or symbol.derivative or not self._ring.symbol(symbol.name).invertible:
                raise ExprSyntaxError(
                    "Negative exponents are only allowed on the invertible symbol mu",
                    start.line, start.column)
            return DiffOp.scalar(self._ring, self._ring.var(symbol.name) ** -exponent)
        result = DiffOp.scalar(self._ring, 1)
        for _ in range(exponent):
            result = op_compose(result, op)
        return result

    def _atom(self) -> tuple[DiffOp, Optional[Symbol]]:
        token = self._next()
        if token.kind == "number":
            return DiffOp.scalar(self._ring, Fraction(token.text)), None
        if token.kind == "ident":
            symbol = resolve_symbol(token)
            if symbol is None:
                return DiffOp.scalar(self._ring, I), None
            if symbol.name not in self._ring:
                raise UnknownSymbolError(token.text, token.line, token.column)
            if symbol.derivative:
                return DiffOp.partial(self._ring, symbol.name), symbol
            return DiffOp.scalar(self._ring, self._ring.var(symbol.name)), symbol
        if token.text == "(":
            op = self._expr()
            if self._accept(")") is None:
                token = self._peek()
                if token is None:
                    raise ExprSyntaxError("Expected ')'", self._end_line, self._end_column)
                self._fail(token)
            return op, None
        self._fail(token)


def parse_op_expr(text: str, ring: Optional[Ring] = None) -> DiffOp:
    """Parse operator text into an exact DiffOp.

    Without ``ring`` the smallest standard ring holding every symbol is used.
    """
    if ring is None:
        ring = select_ring(symbols_of([text]))
    op = _Parser(text, ring).parse()
    logger.debug("Parsed %r over %s", text, ring.name)
    return op


def format_op(op: DiffOp) -> str:
    """Canonical text; parse_op_expr(format_op(op), op.ring) == op."""
    return str(op)
