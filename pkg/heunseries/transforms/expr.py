"""Parameter-map expressions: arithmetic over a, q, alpha, beta, gamma, delta.

    expr  = term { ('+' | '-') term }
    term  = unary { ('*' | '/') unary }
    unary = '-' unary | primary
    primary = NUMBER | SYMBOL | '(' expr ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

from ..core import PARAM_NAMES
from ..errors import DomainError, ExpressionError

SYMBOLS = frozenset(PARAM_NAMES)

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<sym>[A-Za-z_]\w*)|(?P<op>[-+*/()]))"
)

# binding strength for printing; unary minus binds tighter than * and /
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_NEG_PREC = 3


@dataclass(frozen=True)
class Num:
    value: float

    def evaluate(self, binding: Mapping[str, float]) -> float:
        return self.value

    def to_text(self) -> str:
        v = self.value
        return str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)


@dataclass(frozen=True)
class Sym:
    name: str

    def evaluate(self, binding: Mapping[str, float]) -> float:
        try:
            return float(binding[self.name])
        except KeyError:
            raise ExpressionError(f"unbound symbol '{self.name}'") from None

    def to_text(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg:
    operand: ParamExpr

    def evaluate(self, binding: Mapping[str, float]) -> float:
        return -self.operand.evaluate(binding)

    def to_text(self) -> str:
        return "-" + _wrap(self.operand, _NEG_PREC)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: ParamExpr
    right: ParamExpr

    def evaluate(self, binding: Mapping[str, float]) -> float:
        u = self.left.evaluate(binding)
        v = self.right.evaluate(binding)
        if self.op == "+":
            return u + v
        if self.op == "-":
            return u - v
        if self.op == "*":
            return u * v
        if v == 0:
            raise DomainError(f"division by zero in '{self.to_text()}'")
        return u / v

    def to_text(self) -> str:
        prec = _PREC[self.op]
        # operators associate left; an equal-precedence right operand keeps its parentheses
        right_prec = prec + 1
        return f"{_wrap(self.left, prec)} {self.op} {_wrap(self.right, right_prec)}"


ParamExpr = Union[Num, Sym, Neg, BinOp]


def _precedence(e: ParamExpr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _NEG_PREC
    return _NEG_PREC + 1


def _wrap(e: ParamExpr, min_prec: int) -> str:
    text = e.to_text()
    return f"({text})" if _precedence(e) < min_prec else text


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionError(f"unexpected character '{text[bad]}'", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> ParamExpr:
        e = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected '{value}'", pos)
        return e

    def expr(self) -> ParamExpr:
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> ParamExpr:
        left = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> ParamExpr:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.primary()

    def primary(self) -> ParamExpr:
        kind, value, pos = self.take()
        if kind == "num":
            return Num(float(value))
        if kind == "sym":
            if value not in SYMBOLS:
                raise ExpressionError(f"unknown symbol '{value}'", pos)
            return Sym(value)
        if (kind, value) == ("op", "("):
            e = self.expr()
            kind, value, pos = self.take()
            if (kind, value) != ("op", ")"):
                raise ExpressionError("expected ')'", pos)
            return e
        if kind == "end":
            raise ExpressionError("unexpected end of expression", pos)
        raise ExpressionError(f"unexpected '{value}'", pos)


def parse_param_expr(text: str) -> ParamExpr:
    """Parse an expression; errors carry the 0-based character position."""
    if not isinstance(text, str):
        raise ExpressionError(f"expression must be a string, got {type(text).__name__}")
    parser = _Parser(text)
    try:
        return parser.parse()
    except RecursionError:
        raise ExpressionError("expression nested too deeply", parser.peek()[2]) from None
