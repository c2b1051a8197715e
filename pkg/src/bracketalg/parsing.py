"""Shared textual grammar.

Scalars:  rationals (`-1729/5`), `sqrt(<rational>)` (normalized to a
square-free radicand at parse time, so sqrt(7/6) becomes (1/6)*sqrt(42)),
`i` as an alias for sqrt(-1), the parameters `f`, `g1`, `g2`, products `*`,
quotients `/` by rational scalars, integer powers `^`, sums with `+`/`-`,
and parentheses.

Trees:  generator names (`J1 S1 S2 T2 B1 B3 B5 ...`) and the coupled nodes
`com(<expr>,<expr>;<j>)` / `acom(<expr>,<expr>;<j>)`.

A term line is a scalar expression times a single tree, e.g.
`(-1729/5)*i*sqrt(2) * com(com(com(T2,S1;2),S1;1),com(S2,S1;1);0)`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from . import algebra
from .exactnum import ParamPoly, RadNum

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/^;,]))")


class ParseError(ValueError):
    def __init__(self, message, pos=None, line=None):
        at = ""
        if line is not None:
            at = " (line %d" % line + (", col %d)" % (pos + 1) if pos is not None else ")")
        elif pos is not None:
            at = " (col %d)" % (pos + 1)
        super().__init__(message + at)
        self.message = message
        self.pos = pos
        self.line = line


def tokenize(text: str, line: Optional[int] = None):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            rest = text[pos:].strip()
            if not rest:
                break
            raise ParseError("unexpected character %r" % rest[0], pos, line)
        if m.group(1):
            tokens.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("sym", m.group(3), m.start(3)))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive descent over a token list.

    Values are (scalar: ParamPoly, tree: BracketTree | None) pairs;
    multiplication may attach at most one tree to a scalar, addition and
    division are scalar-only.
    """

    def __init__(self, tokens, line=None):
        self.tokens = tokens
        self.i = 0
        self.line = line

    def error(self, msg):
        pos = self.tokens[self.i][2] if self.i < len(self.tokens) else None
        raise ParseError(msg, pos, self.line)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, None)

    def take(self):
        tok = self.peek()
        if tok[0] is None:
            self.error("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, sym):
        kind, val, _ = self.take()
        if kind != "sym" or val != sym:
            self.error("expected %r" % sym)

    # expr := product (('+'|'-') product)*
    def expr(self):
        scalar, tree = self.product()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "+-":
                self.i += 1
                rs, rt = self.product()
                if tree is not None or rt is not None:
                    self.error("trees cannot appear inside sums")
                scalar = scalar + rs if val == "+" else scalar - rs
            else:
                return scalar, tree

    # product := factor (('*'|'/') factor)*
    def product(self):
        scalar, tree = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "*/":
                self.i += 1
                rs, rt = self.factor()
                if val == "/":
                    if rt is not None:
                        self.error("cannot divide by a tree")
                    if not rs.is_constant() or not rs.constant_value().is_rational():
                        self.error("division only by rational scalars")
                    scalar = scalar * Fraction(1, rs.constant_value().as_fraction())
                else:
                    if tree is not None and rt is not None:
                        self.error("more than one tree in a product")
                    scalar = scalar * rs
                    tree = tree or rt
            else:
                return scalar, tree

    # factor := atom ('^' integer)?
    def factor(self):
        scalar, tree = self.atom()
        kind, val, _ = self.peek()
        if kind == "sym" and val == "^":
            self.i += 1
            k2, v2, _ = self.take()
            if k2 != "num":
                self.error("exponent must be a non-negative integer")
            if tree is not None:
                self.error("trees cannot be raised to powers")
            out = ParamPoly.const(1)
            for _ in range(v2):
                out = out * scalar
            scalar = out
        return scalar, tree

    def atom(self):
        kind, val, pos = self.take()
        if kind == "sym" and val == "-":
            scalar, tree = self.factor()
            return scalar * Fraction(-1), tree
        if kind == "sym" and val == "+":
            return self.factor()
        if kind == "sym" and val == "(":
            scalar, tree = self.expr()
            self.expect(")")
            return scalar, tree
        if kind == "num":
            num = Fraction(val)
            return ParamPoly.const(num), None
        if kind == "name":
            if val == "sqrt":
                self.expect("(")
                q = self.rational()
                self.expect(")")
                if q < 0:
                    # sqrt(-n) = i*sqrt(n)
                    mag = RadNum.sqrt_rational(-q)
                    value = mag * RadNum({-1: Fraction(1)})
                else:
                    value = RadNum.sqrt_rational(q)
                return ParamPoly.const(value), None
            if val == "i":
                return ParamPoly.const(RadNum({-1: Fraction(1)})), None
            if val in ("f", "g1", "g2"):
                return ParamPoly.param(val), None
            if val in ("com", "acom"):
                self.expect("(")
                _, left = self.tree_arg()
                self.expect(",")
                _, right = self.tree_arg()
                self.expect(";")
                sign = 1
                k2, v2, _ = self.take()
                if k2 == "sym" and v2 == "-":
                    sign = -1
                    k2, v2, _ = self.take()
                if k2 != "num":
                    self.error("spin label must be an integer")
                self.expect(")")
                node = algebra.com if val == "com" else algebra.acom
                return ParamPoly.const(1), node(left, right, sign * v2)
            try:
                return ParamPoly.const(1), algebra.leaf(val)
            except KeyError:
                raise ParseError("unknown name %r" % val, pos, self.line)
        self.error("unexpected token %r" % (val,))

    def tree_arg(self):
        scalar, tree = self.expr()
        if tree is None:
            self.error("bracket arguments must be trees")
        if scalar != ParamPoly.const(1):
            self.error("bracket arguments cannot carry scalar factors")
        return scalar, tree

    def rational(self) -> Fraction:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "sym" and val in "+-":
            self.i += 1
            if val == "-":
                sign = -1
        k2, v2, _ = self.take()
        if k2 != "num":
            self.error("expected a number")
        num = Fraction(sign * v2)
        kind, val, _ = self.peek()
        if kind == "sym" and val == "/":
            self.i += 1
            k3, v3, _ = self.take()
            if k3 != "num" or v3 == 0:
                self.error("expected a non-zero denominator")
            num /= v3
        return num

    def done(self):
        if self.i != len(self.tokens):
            self.error("trailing input")


def parse_scalar(text: str, line: Optional[int] = None) -> ParamPoly:
    """Parse a scalar (ParamPoly) expression."""
    p = _Parser(tokenize(text, line), line)
    scalar, tree = p.expr()
    p.done()
    if tree is not None:
        p.i = 0
        raise ParseError("expected a scalar, found a tree", None, line)
    return scalar


def parse_tree(text: str, line: Optional[int] = None):
    """Parse a bare bracket tree."""
    p = _Parser(tokenize(text, line), line)
    scalar, tree = p.expr()
    p.done()
    if tree is None or scalar != ParamPoly.const(1):
        raise ParseError("expected a bare tree expression", None, line)
    return tree


def parse_term(text: str, line: Optional[int] = None):
    """Parse `<coefficient> * <tree>` into (ParamPoly, BracketTree)."""
    p = _Parser(tokenize(text, line), line)
    scalar, tree = p.expr()
    p.done()
    if tree is None:
        raise ParseError("term carries no tree", None, line)
    return scalar, tree
