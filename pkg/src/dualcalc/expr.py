"""Expression trees in one dual variable ``x``, with a parser and printer.

Grammar (whitespace insensitive)::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := atom ("^" integer)? | "-" factor
    atom   := number | number "eps" | "eps" | "x" | func "(" expr ")" | "(" expr ")"
    func   := "sin" | "cos" | "exp" | "log"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .dual_algebra import DualReal, format_dual
from .errors import ParseError

FUNCTIONS = ("sin", "cos", "exp", "log")


@dataclass(frozen=True)
class Const:
    value: DualReal


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int

    def __post_init__(self):
        if isinstance(self.exponent, bool) or not isinstance(self.exponent, int):
            raise TypeError("power exponents must be integers")


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"

    def __post_init__(self):
        if self.func not in FUNCTIONS:
            raise ValueError(f"unknown function {self.func!r}")


Expr = Union[Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call]
X = Var()


def const(value) -> Const:
    return Const(DualReal.coerce(value))


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]+)|(?P<op>[-+*/^()]))"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                start = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[start]!r}", start)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return ("end", None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.take()
        if text != value:
            found = "end of input" if kind == "end" else repr(text)
            raise ParseError(f"expected {value!r}, found {found}", pos)

    def parse(self) -> Expr:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> Expr:
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.factor())
        node = self.atom()
        if self.peek()[1] == "^":
            self.take()
            node = Pow(node, self.integer())
        return node

    def integer(self) -> int:
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, text, pos = self.take()
        if kind != "num":
            found = "end of input" if kind == "end" else repr(text)
            raise ParseError(f"expected integer exponent, found {found}", pos)
        if not text.isdigit():
            raise ParseError(f"exponent {text!r} is not an integer", pos)
        return sign * int(text)

    def atom(self) -> Expr:
        kind, text, pos = self.take()
        if kind == "num":
            value = float(text)
            if self.peek()[1] == "eps":
                self.take()
                return Const(DualReal(0.0, value))
            return Const(DualReal(value, 0.0))
        if kind == "name":
            if text == "x":
                return X
            if text == "eps":
                return Const(DualReal(0.0, 1.0))
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            raise ParseError(f"unknown name {text!r}", pos)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {found}", pos)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _prec(node) -> int:
    if isinstance(node, Const):
        v = node.value
        simple = (v.re == 0.0 or v.ze == 0.0) and v.re >= 0 and v.ze >= 0
        return 5 if simple else 0
    return _PREC.get(type(node), 5)


def to_text(node: Expr) -> str:
    def wrap(child, min_prec):
        s = to_text(child)
        return f"({s})" if _prec(child) < min_prec else s

    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return format_dual(node.value)
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    if isinstance(node, Neg):
        return f"-{wrap(node.arg, 3)}"
    if isinstance(node, Pow):
        return f"{wrap(node.base, 5)}^{node.exponent}"
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(node)]
    p = _PREC[type(node)]
    # left-associative: the right operand needs parens at equal precedence
    return f"{wrap(node.left, p)}{op}{wrap(node.right, p + 1)}"
