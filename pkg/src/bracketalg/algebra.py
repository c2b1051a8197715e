"""Graded spin-parity generators and coupled bracket trees.

A BracketTree is either a generator leaf or a coupled commutator /
anticommutator node carrying the spin label of the coupled result.  Trees
expand into the free associative algebra on multiplet components via
Clebsch-Gordan weights; the standard so(3) derivation action on the
expansion is provided for covariance checks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactnum import POLY_ZERO, ParamPoly, RAD_ZERO, RadNum
from .wigner import cg

COM = "com"
ACOM = "acom"
LEAF = "leaf"

PLUS = 1
MINUS = -1


@dataclass(frozen=True)
class GeneratorSymbol:
    name: str
    j: int
    parity: int  # +1 or -1
    grade: int


REGISTRY = {
    g.name: g
    for g in (
        GeneratorSymbol("J1", 1, PLUS, 1),
        GeneratorSymbol("S1", 1, MINUS, 2),
        GeneratorSymbol("S2", 2, MINUS, 2),
        GeneratorSymbol("T2", 2, PLUS, 2),
        GeneratorSymbol("B1", 0, PLUS, 2),
        GeneratorSymbol("B3", 0, PLUS, 4),
    )
}

_B_NAME = re.compile(r"^B(\d+)$")


def generator(name: str) -> GeneratorSymbol:
    """Look up a registry generator; odd-index B generators made on demand."""
    sym = REGISTRY.get(name)
    if sym is not None:
        return sym
    m = _B_NAME.match(name)
    if m:
        k = int(m.group(1))
        if k % 2 == 1:  # B(2l+1) carries grade 2l+2
            return GeneratorSymbol(name, 0, PLUS, k + 1)
    raise KeyError("unknown generator %r" % name)


@dataclass(frozen=True)
class BracketTree:
    kind: str
    gen: Optional[GeneratorSymbol] = None
    left: Optional["BracketTree"] = None
    right: Optional["BracketTree"] = None
    jlabel: Optional[int] = None

    def is_leaf(self) -> bool:
        return self.kind == LEAF

    def __str__(self):
        if self.kind == LEAF:
            return self.gen.name
        return "%s(%s,%s;%d)" % (self.kind, self.left, self.right, self.jlabel)

    def __repr__(self):
        return "BracketTree<%s>" % self


def leaf(name: str) -> BracketTree:
    return BracketTree(LEAF, gen=generator(name))


def com(left: BracketTree, right: BracketTree, jlabel: int) -> BracketTree:
    return BracketTree(COM, left=left, right=right, jlabel=jlabel)


def acom(left: BracketTree, right: BracketTree, jlabel: int) -> BracketTree:
    return BracketTree(ACOM, left=left, right=right, jlabel=jlabel)


def spin(t: BracketTree) -> int:
    if t.kind == LEAF:
        return t.gen.j
    return t.jlabel


def parity(t: BracketTree) -> int:
    if t.kind == LEAF:
        return t.gen.parity
    return parity(t.left) * parity(t.right)


def spin_parity(t: BracketTree) -> tuple:
    return spin(t), parity(t)


def grade(t: BracketTree) -> int:
    """Integer scaling grade: commutators lower the sum by one."""
    if t.kind == LEAF:
        return t.gen.grade
    g = grade(t.left) + grade(t.right)
    return g - 1 if t.kind == COM else g


def leaf_count(t: BracketTree) -> int:
    if t.kind == LEAF:
        return 1
    return leaf_count(t.left) + leaf_count(t.right)


def iter_leaves(t: BracketTree):
    if t.kind == LEAF:
        yield t.gen
    else:
        yield from iter_leaves(t.left)
        yield from iter_leaves(t.right)


@dataclass
class TreeReport:
    violations: list  # of (path, message)

    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if not self.violations:
            return "ok"
        return "\n".join("%s: %s" % (p or "<root>", msg)
                         for p, msg in self.violations)


def check_tree(t: BracketTree) -> TreeReport:
    """Verify triangle, parity and grade bookkeeping at every node.

    Also flags nodes that expand to zero identically: a commutator of two
    structurally equal subtrees needs an odd coupled spin, an anticommutator
    an even one.
    """
    violations: list[tuple[str, str]] = []

    def walk(node, path):
        if node.kind == LEAF:
            return
        walk(node.left, path + "L")
        walk(node.right, path + "R")
        jl, jr, j = spin(node.left), spin(node.right), node.jlabel
        if not abs(jl - jr) <= j <= jl + jr:
            violations.append(
                (path, "triangle violation: %d (x) %d cannot reach %d"
                 % (jl, jr, j)))
        if node.left == node.right:
            if node.kind == COM and j % 2 == 0:
                violations.append(
                    (path, "IDENTICALLY-VANISHING: commutator of equal "
                           "operands at even spin %d" % j))
            if node.kind == ACOM and j % 2 == 1:
                violations.append(
                    (path, "IDENTICALLY-VANISHING: anticommutator of equal "
                           "operands at odd spin %d" % j))

    walk(t, "")
    return TreeReport(violations)


# ---------------------------------------------------------------------------
# Free associative expansion
# ---------------------------------------------------------------------------

Word = tuple  # of (generator name, m) letters


class WordPoly:
    """Linear combination of words in multiplet components, over ParamPoly."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = dict(terms) if terms else {}

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, WordPoly):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, POLY_ZERO) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return WordPoly(out)

    def __sub__(self, other):
        return self + other.scale(RadNum.rational(-1))

    def scale(self, factor) -> "WordPoly":
        """Multiply every coefficient by a RadNum or ParamPoly factor."""
        if isinstance(factor, (RadNum, int, Fraction)):
            if not isinstance(factor, RadNum):
                factor = RadNum.rational(factor)
            if not factor:
                return WordPoly()
            return WordPoly({w: c * factor for w, c in self.terms.items()})
        if not factor:
            return WordPoly()
        out = {}
        for w, c in self.terms.items():
            p = c * factor
            if p:
                out[w] = p
        return WordPoly(out)

    def dump(self) -> str:
        """One `<coefficient> <letter>...` per line, lexicographically."""
        lines = []
        for w in sorted(self.terms):
            letters = " ".join("%s[%d]" % (name, m) for name, m in w)
            lines.append("%s  %s" % (self.terms[w], letters))
        return "\n".join(lines)

    def __repr__(self):
        return "WordPoly(%d words)" % len(self.terms)


_EXPAND_CACHE: dict[tuple[BracketTree, int], WordPoly] = {}


def expand(t: BracketTree, m: int) -> WordPoly:
    """Project component m of the coupled tree into the free algebra."""
    j = spin(t)
    if abs(m) > j:
        raise ValueError("|m| = %d exceeds spin %d of %s" % (abs(m), j, t))
    return _expand(t, m)


def _expand(t: BracketTree, m: int) -> WordPoly:
    key = (t, m)
    cached = _EXPAND_CACHE.get(key)
    if cached is not None:
        return cached
    if t.kind == LEAF:
        out = WordPoly({((t.gen.name, m),): ParamPoly.const(1)})
    else:
        jl, jr, j = spin(t.left), spin(t.right), t.jlabel
        sign = -1 if t.kind == COM else 1
        acc: dict[Word, ParamPoly] = {}
        for m1 in range(max(-jl, m - jr), min(jl, m + jr) + 1):
            m2 = m - m1
            weight = cg(jl, m1, jr, m2, j, m)
            if not weight:
                continue
            lw = _expand(t.left, m1)
            rw = _expand(t.right, m2)
            for w1, c1 in lw.terms.items():
                for w2, c2 in rw.terms.items():
                    c = (c1 * c2) * weight
                    if not c:
                        continue
                    fwd = w1 + w2
                    s = acc.get(fwd, POLY_ZERO) + c
                    if s:
                        acc[fwd] = s
                    else:
                        acc.pop(fwd, None)
                    bwd = w2 + w1
                    s = acc.get(bwd, POLY_ZERO) + (c * sign)
                    if s:
                        acc[bwd] = s
                    else:
                        acc.pop(bwd, None)
        out = WordPoly(acc)
    _EXPAND_CACHE[key] = out
    return out


J3, JPLUS, JMINUS = "J3", "Jplus", "Jminus"


def act(op: str, w: WordPoly) -> WordPoly:
    """so(3) derivation action on a WordPoly (Leibniz rule over letters)."""
    if op not in (J3, JPLUS, JMINUS):
        raise ValueError("unknown operator %r" % op)
    acc: dict[Word, ParamPoly] = {}

    def put(word, coeff):
        s = acc.get(word, POLY_ZERO) + coeff
        if s:
            acc[word] = s
        else:
            acc.pop(word, None)

    for word, coeff in w.terms.items():
        if op == J3:
            total = sum(m for _, m in word)
            if total:
                put(word, coeff * RadNum.rational(total))
            continue
        step = 1 if op == JPLUS else -1
        for i, (name, m) in enumerate(word):
            j = generator(name).j
            val = (j - step * m) * (j + step * m + 1)
            if val <= 0:
                continue
            factor = RadNum.sqrt_rational(val)
            new_word = word[:i] + ((name, m + step),) + word[i + 1:]
            put(new_word, coeff * factor)
    return WordPoly(acc)


# ---------------------------------------------------------------------------
# Relations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    coefficient: ParamPoly
    tree: BracketTree

    def __str__(self):
        return "(%s) * %s" % (self.coefficient, self.tree)


@dataclass
class Relation:
    terms: list  # of Term


def expand_relation(rel: Relation, m: int) -> WordPoly:
    """Coefficient-weighted sum of term expansions at component m."""
    spins = {(spin(t.tree), parity(t.tree)) for t in rel.terms}
    if len(spins) > 1:
        raise ValueError("mixed spin-parity in relation: %s" % sorted(spins))
    total = WordPoly()
    for t in rel.terms:
        total = total + expand(t.tree, m).scale(t.coefficient)
    return total
