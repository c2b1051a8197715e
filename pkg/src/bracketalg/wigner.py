"""Exact Clebsch-Gordan coefficients for integer spins.

Two independent computations are provided and cross-checked in the test
suite: the Racah closed-form sum (`cg`) and a ladder-operator construction
(`cg_table_ladder`).  Both return RadNum values in the Condon-Shortley
convention, i.e. real coefficients with <j1 j1; j2 (j-j1) | j j> positive.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial
from typing import NamedTuple

from .exactnum import RAD_ONE, RAD_ZERO, RadNum

DEFAULT_MAX_J = 8


class SpinLabel(NamedTuple):
    j: int
    m: int


class CgKey(NamedTuple):
    j1: int
    m1: int
    j2: int
    m2: int
    j: int
    m: int


class SpinLimitError(ValueError):
    """Requested table beyond the configured spin limit."""


def _check_integer_spins(*vals):
    for v in vals:
        if not isinstance(v, int):
            raise TypeError("integer spins/projections only, got %r" % (v,))


def cg(j1, m1, j2, m2, j, m) -> RadNum:
    """<j1 m1; j2 m2 | j m> via the Racah sum.

    Selection failures (m != m1+m2, triangle violation, out-of-range
    projections) return exact zero.
    """
    _check_integer_spins(j1, m1, j2, m2, j, m)
    if min(j1, j2, j) < 0:
        raise ValueError("negative spin")
    if m != m1 + m2 or not abs(j1 - j2) <= j <= j1 + j2:
        return RAD_ZERO
    if abs(m1) > j1 or abs(m2) > j2 or abs(m) > j:
        return RAD_ZERO

    # prefactor under the square root: rational
    pref = Fraction(
        (2 * j + 1)
        * factorial(j1 + j2 - j) * factorial(j1 - j2 + j)
        * factorial(-j1 + j2 + j),
        factorial(j1 + j2 + j + 1),
    )
    pref *= (factorial(j1 + m1) * factorial(j1 - m1)
             * factorial(j2 + m2) * factorial(j2 - m2)
             * factorial(j + m) * factorial(j - m))

    total = Fraction(0)
    kmin = max(0, j2 - j - m1, j1 + m2 - j)
    kmax = min(j1 + j2 - j, j1 - m1, j2 + m2)
    for k in range(kmin, kmax + 1):
        den = (factorial(k)
               * factorial(j1 + j2 - j - k)
               * factorial(j1 - m1 - k)
               * factorial(j2 + m2 - k)
               * factorial(j - j2 + m1 + k)
               * factorial(j - j1 - m2 + k))
        total += Fraction((-1) ** k, den)
    if not total:
        return RAD_ZERO
    return RadNum.sqrt_rational(pref) * total


def three_j(j1, m1, j2, m2, j3, m3) -> RadNum:
    """Wigner 3j symbol as a thin wrapper around cg."""
    c = cg(j1, m1, j2, m2, j3, -m3)
    if not c:
        return RAD_ZERO
    sign = (-1) ** (j1 - j2 - m3)
    inv = RadNum.sqrt_rational(Fraction(1, 2 * j3 + 1))
    return c * inv * sign


_TABLE_CACHE: dict[tuple[int, int], dict[CgKey, RadNum]] = {}
_TABLE_LOCK = threading.Lock()


def cg_table(j1: int, j2: int, max_j: int = DEFAULT_MAX_J) -> dict[CgKey, RadNum]:
    """All non-zero coefficients for the pair (j1, j2), memoized."""
    _check_integer_spins(j1, j2)
    if j1 < 0 or j2 < 0:
        raise ValueError("negative spin")
    if j1 > max_j or j2 > max_j:
        raise SpinLimitError("cg_table limited to j <= %d" % max_j)
    with _TABLE_LOCK:
        cached = _TABLE_CACHE.get((j1, j2))
    if cached is not None:
        return cached
    table: dict[CgKey, RadNum] = {}
    for j in range(abs(j1 - j2), j1 + j2 + 1):
        for m1 in range(-j1, j1 + 1):
            for m2 in range(-j2, j2 + 1):
                c = cg(j1, m1, j2, m2, j, m1 + m2)
                if c:
                    table[CgKey(j1, m1, j2, m2, j, m1 + m2)] = c
    with _TABLE_LOCK:
        _TABLE_CACHE.setdefault((j1, j2), table)
    return table


def _ladder_sqrt(j: int, m: int, sign: int) -> RadNum:
    """Matrix element sqrt((j -+ m)(j +- m + 1)) of J+ (sign=+1) / J- (sign=-1)."""
    val = (j - sign * m) * (j + sign * m + 1)
    return RadNum.sqrt_rational(val)


def cg_table_ladder(j1: int, j2: int) -> dict[CgKey, RadNum]:
    """Independent oracle: build the coupling table by ladder operators.

    For each j the top state |j j> is the (unique up to scale) J+-annihilated
    vector in the m = j subspace, normalized with the Condon-Shortley sign;
    lower m states follow by applying J-.
    """
    _check_integer_spins(j1, j2)
    table: dict[CgKey, RadNum] = {}
    for j in range(j1 + j2, abs(j1 - j2) - 1, -1):
        # coefficients of |j j> over |m1, j-m1>
        lo = max(-j1, j - j2)
        hi = min(j1, j + j2)
        coeffs = {lo: RAD_ONE}
        for a in range(lo + 1, hi + 1):
            # J+ annihilation couples c_{a-1} and c_a
            up1 = Fraction((j1 - (a - 1)) * (j1 + a))
            up2 = Fraction((j2 - (j - a)) * (j2 + (j - a) + 1))
            coeffs[a] = coeffs[a - 1] * (-RadNum.sqrt_rational(up1 / up2))
        norm2 = RAD_ZERO
        for c in coeffs.values():
            norm2 = norm2 + c * c
        inv_norm = RadNum.sqrt_rational(1 / norm2.as_fraction())
        coeffs = {m1: c * inv_norm for m1, c in coeffs.items()}
        # Condon-Shortley: coefficient at m1 = j1 is positive
        top = coeffs[j1]
        (rad, q), = top.terms.items()
        if q < 0:
            coeffs = {m1: -c for m1, c in coeffs.items()}
        state = {(m1, j - m1): c for m1, c in coeffs.items()}
        for (m1, m2), c in state.items():
            table[CgKey(j1, m1, j2, m2, j, j)] = c
        # descend through the multiplet with J-
        m = j
        while m > -j:
            inv = RadNum.sqrt_rational(Fraction(1, (j + m) * (j - m + 1)))
            nxt: dict[tuple[int, int], RadNum] = {}
            for (m1, m2), c in state.items():
                if m1 > -j1:
                    w = c * _ladder_sqrt(j1, m1, -1) * inv
                    key = (m1 - 1, m2)
                    nxt[key] = nxt.get(key, RAD_ZERO) + w
                if m2 > -j2:
                    w = c * _ladder_sqrt(j2, m2, -1) * inv
                    key = (m1, m2 - 1)
                    nxt[key] = nxt.get(key, RAD_ZERO) + w
            state = {k: v for k, v in nxt.items() if v}
            m -= 1
            for (m1, m2), c in state.items():
                table[CgKey(j1, m1, j2, m2, j, m)] = c
    return table
