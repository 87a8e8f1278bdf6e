"""Expression language for world-sheet coordinates.

Grammar (EBNF)::

    expr    = term , { ("+" | "-") , term } ;
    term    = unary , { ("*" | "/") , unary } ;
    unary   = "-" , unary | "+" , unary | power ;
    power   = atom , [ ("^" | "**") , integer ] ;
    integer = [ "-" ] , digits | "(" , [ "-" ] , digits , ")" ;
    atom    = number | name | func , "(" , expr , ")" | "(" , expr , ")" ;
    func    = "sin" | "cos" | "exp" | "log" | "sqrt" ;

``name`` is a chart variable (``u1``, ..., ``t``), a named parameter, or one of
the constants ``pi`` and ``e``.  Exponents are integer literals only, and
``-u^2`` parses as ``-(u^2)``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import EvaluationError, ParseError

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")
CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
                    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
                    r"|(?P<op>\*\*|[-+*/^()]))")


@dataclass(frozen=True)
class Node:
    """Expression tree node.

    ``kind`` is one of ``const``, ``var``, ``add``, ``sub``, ``mul``, ``div``,
    ``neg``, ``pow`` or a function name.  ``value`` holds the constant, the
    variable index, or the integer exponent.
    """

    kind: str
    args: tuple = ()
    value: float | int | None = None
    name: str | None = None
    offset: int = field(default=0, compare=False)

    def __str__(self):
        return unparse(self)


def const(x) -> Node:
    return Node("const", value=float(x))


def var(name: str, index: int) -> Node:
    return Node("var", value=index, name=name)


class _Parser:
    def __init__(self, text, chart, params):
        self.text = text
        self.chart = list(chart)
        self.params = dict(params or {})
        self.tokens = self._tokenize(text)
        self.pos = 0

    @staticmethod
    def _tokenize(text):
        out = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            m = _TOKEN.match(text, i)
            if m is None or m.end() == i:
                raise ParseError(f"unexpected character {text[i]!r}", i)
            kind = m.lastgroup
            start = m.start(kind)
            out.append((kind, m.group(kind), start))
            i = m.end()
        out.append(("end", "", len(text)))
        return out

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, op):
        kind, val, off = self.take()
        if kind != "op" or val != op:
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {op!r}, found {found}", off)

    def parse(self):
        node = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", off)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            _, op, off = self.take()
            node = Node("add" if op == "+" else "sub", (node, self.term()), offset=off)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            _, op, off = self.take()
            node = Node("mul" if op == "*" else "div", (node, self.unary()), offset=off)
        return node

    def unary(self):
        kind, val, off = self.peek()
        if kind == "op" and val == "-":
            self.take()
            arg = self.unary()
            if arg.kind == "const":
                return Node("const", value=-arg.value, offset=off)
            return Node("neg", (arg,), offset=off)
        if kind == "op" and val == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, off = self.peek()
        if kind == "op" and val in ("^", "**"):
            self.take()
            node = Node("pow", (base,), value=self.integer(), offset=off)
            k2, v2, o2 = self.peek()
            if k2 == "op" and v2 in ("^", "**"):
                raise ParseError("chained exponent; parenthesize the base", o2)
            return node
        return base

    def integer(self):
        kind, val, off = self.peek()
        paren = kind == "op" and val == "("
        if paren:
            self.take()
            kind, val, off = self.peek()
        sign = 1
        if kind == "op" and val == "-":
            self.take()
            sign = -1
            kind, val, off = self.peek()
        if kind != "num" or not val.isdigit():
            raise ParseError("exponent must be an integer literal", off)
        self.take()
        if paren:
            self.expect(")")
        return sign * int(val)

    def atom(self):
        kind, val, off = self.take()
        if kind == "num":
            return Node("const", value=float(val), offset=off)
        if kind == "name":
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Node(val, (arg,), offset=off)
            if val in self.chart:
                return Node("var", value=self.chart.index(val), name=val, offset=off)
            if val in self.params:
                return Node("const", value=float(self.params[val]), offset=off)
            if val in CONSTANTS:
                return Node("const", value=CONSTANTS[val], offset=off)
            raise ParseError(f"unknown identifier {val!r}", off)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {found}", off)


def parse_expr(text: str, chart, params=None) -> Node:
    """Parse ``text`` into a tree over the variable names in ``chart``.

    ``params`` maps extra names to numeric values, substituted as constants.
    """
    return _Parser(text, chart, params).parse()


_BINOPS = {"add": "+", "sub": "-", "mul": "*", "div": "/"}


def unparse(node: Node) -> str:
    """Fully parenthesized text that parses back to an equal tree."""
    k = node.kind
    if k == "const":
        v = node.value
        return repr(v) if v >= 0 else f"({v!r})"
    if k == "var":
        return node.name
    if k in _BINOPS:
        a, b = node.args
        return f"({unparse(a)} {_BINOPS[k]} {unparse(b)})"
    if k == "neg":
        return f"(-{unparse(node.args[0])})"
    if k == "pow":
        return f"({unparse(node.args[0])}^{node.value})" if node.value >= 0 \
            else f"({unparse(node.args[0])}^({node.value}))"
    return f"{k}({unparse(node.args[0])})"


def variables(node: Node) -> set:
    if node.kind == "var":
        return {node.value}
    out = set()
    for a in node.args:
        out |= variables(a)
    return out


def evaluate(node: Node, point) -> float:
    """Plain float evaluation (no derivatives)."""
    k = node.kind
    if k == "const":
        return node.value
    if k == "var":
        return float(point[node.value])
    if k == "neg":
        return -evaluate(node.args[0], point)
    if k in _BINOPS:
        a = evaluate(node.args[0], point)
        b = evaluate(node.args[1], point)
        if k == "add":
            return a + b
        if k == "sub":
            return a - b
        if k == "mul":
            return a * b
        if b == 0.0:
            raise EvaluationError("division by zero", unparse(node))
        return a / b
    x = evaluate(node.args[0], point)
    if k == "pow":
        if x == 0.0 and node.value < 0:
            raise EvaluationError("zero to a negative power", unparse(node))
        return x ** node.value
    if k == "log" and x <= 0.0:
        raise EvaluationError("log of nonpositive value", unparse(node))
    if k == "sqrt" and x < 0.0:
        raise EvaluationError("sqrt of negative value", unparse(node))
    try:
        return getattr(math, k)(x)
    except OverflowError:
        raise EvaluationError("overflow", unparse(node)) from None
