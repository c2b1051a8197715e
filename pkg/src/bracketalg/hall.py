"""Ordering, enumeration and rank selection of coupled bracket monomials.

The comparator follows the three-stage scheme for pure commutators: sort by
generator occurrence counts under T2 > S2 > S1, then by the length of the
longest uninterrupted iterated commutator chain, then recursively by
(left, right, spin label).  Anticommutator nodes and the remaining
generators are fitted into the same scheme as a declared convention:
ACOM ranks below COM at equal counts and chain length, and J1 and the
B-generators rank below S1.

Witt-formula necklace counts and a Lyndon-word Hall set for plain binary
Lie words provide the dimension cross-checks.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from sympy import divisors, mobius

from . import linsolve
from .algebra import (ACOM, COM, LEAF, BracketTree, acom, check_tree, com,
                      expand, grade, leaf, leaf_count, parity, spin)
from .exactnum import RAD_ZERO, RadNum

# descending significance: more T2 outranks more S2, etc.
_GEN_ORDER = ("T2", "S2", "S1", "J1")


def _gen_rank(name: str) -> tuple:
    if name in _GEN_ORDER:
        return (0, _GEN_ORDER.index(name))
    # B-family below everything, higher index lower
    return (1, int(name[1:]))


def _counts(t: BracketTree) -> dict:
    if t.kind == LEAF:
        return {t.gen.name: 1}
    out = dict(_counts(t.left))
    for k, v in _counts(t.right).items():
        out[k] = out.get(k, 0) + v
    return out


def count_vector(t: BracketTree) -> tuple:
    """Occurrence counts ordered by generator significance (descending)."""
    counts = _counts(t)
    names = sorted(counts, key=_gen_rank)
    return tuple((name, counts[name]) for name in names)


def _comb_len(t: BracketTree) -> int:
    """Number of generators in the iterated-commutator comb ending here."""
    if t.kind == LEAF:
        return 1
    if t.kind == COM and t.right.kind == LEAF:
        return _comb_len(t.left) + 1
    return 1


def chainlen(t: BracketTree) -> int:
    """Length of the longest uninterrupted iterated commutator in t."""
    best = _comb_len(t)
    if t.kind != LEAF:
        best = max(best, chainlen(t.left), chainlen(t.right))
    return best


def _cmp(a, b):
    return (a > b) - (a < b)


def _count_cmp(a: BracketTree, b: BracketTree) -> int:
    ca, cb = _counts(a), _counts(b)
    for name in sorted(set(ca) | set(cb), key=_gen_rank):
        d = _cmp(ca.get(name, 0), cb.get(name, 0))
        if d:
            return d
    return 0


def compare(a: BracketTree, b: BracketTree) -> int:
    """Total order on bracket trees; returns -1, 0 or 1 (1 means a > b)."""
    d = _count_cmp(a, b)
    if d:
        return d
    d = _cmp(chainlen(a), chainlen(b))
    if d:
        return d
    return _structural_cmp(a, b)


def _structural_cmp(a: BracketTree, b: BracketTree) -> int:
    if a.kind == LEAF or b.kind == LEAF:
        if a.kind == LEAF and b.kind == LEAF:
            # lower rank tuple = more significant generator = greater
            return _cmp(_gen_rank(b.gen.name), _gen_rank(a.gen.name))
        return -1 if a.kind == LEAF else 1  # nodes outrank leaves
    if a.kind != b.kind:
        return 1 if a.kind == COM else -1  # COM above ACOM
    d = compare(a.left, b.left)
    if d:
        return d
    d = compare(a.right, b.right)
    if d:
        return d
    return _cmp(a.jlabel, b.jlabel)


sort_key = functools.cmp_to_key(compare)


@dataclass(frozen=True)
class SpinParitySlice:
    grade: int
    spin: int
    parity: int
    alphabet: tuple  # generator names

    def __post_init__(self):
        if self.grade < 1:
            raise ValueError("grade must be >= 1")


class EnumerationLimitError(ValueError):
    pass


def _subtrees(alphabet, n, pure_commutators, cache):
    """All valid coupled trees with exactly n leaves over the alphabet."""
    key = (alphabet, n, pure_commutators)
    if key in cache:
        return cache[key]
    out = []
    if n == 1:
        out = [leaf(name) for name in alphabet]
    else:
        kinds = (COM,) if pure_commutators else (COM, ACOM)
        for k in range(1, n):
            for lt in _subtrees(alphabet, k, pure_commutators, cache):
                jl = spin(lt)
                for rt in _subtrees(alphabet, n - k, pure_commutators, cache):
                    jr = spin(rt)
                    for j in range(abs(jl - jr), jl + jr + 1):
                        for kind in kinds:
                            if lt == rt and (
                                    (kind == COM and j % 2 == 0)
                                    or (kind == ACOM and j % 2 == 1)):
                                continue  # identically vanishing
                            node = com if kind == COM else acom
                            out.append(node(lt, rt, j))
    cache[key] = out
    return out


def enumerate_trees(slc: SpinParitySlice, max_leaves: int,
                    pure_commutators: bool = False,
                    max_candidates: int = 2_000_000) -> list:
    """All valid non-vanishing trees in the slice, sorted descending."""
    cache: dict = {}
    found = []
    for n in range(1, max_leaves + 1):
        for t in _subtrees(tuple(slc.alphabet), n, pure_commutators, cache):
            if (grade(t) == slc.grade and spin(t) == slc.spin
                    and parity(t) == slc.parity):
                found.append(t)
        total = sum(len(v) for v in cache.values())
        if total > max_candidates:
            raise EnumerationLimitError(
                "candidate count %d exceeds limit %d"
                % (total, max_candidates))
    found.sort(key=sort_key, reverse=True)
    return found


def rank_select(candidates) -> tuple:
    """(free-envelope rank, greedy-in-order independent subset).

    Each candidate is expanded at its top component m = spin; independence
    is measured in word coordinates of the free associative algebra, which
    can only over-count independence relative to any quotient algebra.
    """
    if not candidates:
        return 0, []
    spins = {(spin(t), parity(t)) for t in candidates}
    if len(spins) > 1:
        raise ValueError("candidates must share spin-parity, got %s"
                         % sorted(spins))
    vectors = []
    word_index: dict = {}
    for t in candidates:
        w = expand(t, spin(t))
        vec = {}
        for word, coeff in w.terms.items():
            idx = word_index.setdefault(word, len(word_index))
            vec[idx] = coeff.constant_value()
        vectors.append(vec)
    entries = {}
    for col, vec in enumerate(vectors):
        for idx, val in vec.items():
            entries[(idx, col)] = val
    system = linsolve.SparseSystem(max(len(word_index), 1), len(candidates),
                                   entries)
    total_rank = linsolve.rank(system)

    # greedy selection by incremental elimination in candidate order
    basis: dict[int, dict] = {}  # pivot word index -> reduced row
    chosen = []
    for t, vec in zip(candidates, vectors):
        row = dict(vec)
        for pivot, brow in basis.items():
            v = row.get(pivot)
            if not v:
                continue
            factor = v * brow[pivot].inverse()
            for idx, bv in brow.items():
                nv = row.get(idx, RAD_ZERO) - factor * bv
                if nv:
                    row[idx] = nv
                else:
                    row.pop(idx, None)
        if row:
            basis[min(row)] = row
            chosen.append(t)
    assert len(chosen) == total_rank
    return total_rank, chosen


# ---------------------------------------------------------------------------
# Witt dimensions and plain Hall words
# ---------------------------------------------------------------------------

def witt(k: int, n: int) -> int:
    """Dimension of the degree-n part of the free Lie algebra on k letters."""
    if k < 1 or n < 1:
        raise ValueError("need k >= 1, n >= 1")
    return sum(int(mobius(d)) * k ** (n // d) for d in divisors(n)) // n


def lyndon_words(k: int, n: int) -> list:
    """All Lyndon words of length n over the alphabet 0..k-1."""
    out = []
    for w in itertools.product(range(k), repeat=n):
        if all(w < w[i:] for i in range(1, n)):
            out.append(w)
    return out


def _bracketing(w: tuple) -> tuple:
    """Standard right bracketing of a Lyndon word, as a nested tuple."""
    if len(w) == 1:
        return w[0]
    # split at the longest proper Lyndon suffix
    for i in range(1, len(w)):
        v = w[i:]
        if all(v < v[j:] for j in range(1, len(v))):
            return (_bracketing(w[:i]), _bracketing(v))
    raise AssertionError("not a Lyndon word: %r" % (w,))


def hall_trees(k: int, n: int) -> list:
    """A Hall set of degree-n Lie bracketings on k letters (via Lyndon)."""
    return [_bracketing(w) for w in lyndon_words(k, n)]
