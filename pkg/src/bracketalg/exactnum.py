"""Exact coefficient arithmetic.

Two layers:

* ``RadNum`` -- finite sums  sum_n  q_n * sqrt(n)  with q_n rational and n a
  square-free integer.  n = 1 carries the rational part, n = -1 encodes the
  imaginary unit, and mixed negative radicands like sqrt(-2) are allowed
  (they mean i*sqrt(2)).  Values are normalized on construction, so equality
  is plain dictionary equality.

* ``ParamPoly`` -- commutative polynomials in the three named parameters
  f, g1, g2 with RadNum coefficients.
"""

from __future__ import annotations

from fractions import Fraction

from sympy import factorint

PARAMS = ("f", "g1", "g2")

_SQFREE_CACHE: dict[int, tuple[int, int]] = {}


class RadicandLimitError(ArithmeticError):
    """Inversion would need more conjugation generators than allowed."""


def squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, r) with n = s*s*r, r square-free, for n > 0."""
    if n in _SQFREE_CACHE:
        return _SQFREE_CACHE[n]
    s, r = 1, 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            r *= p
    _SQFREE_CACHE[n] = (s, r)
    return s, r


def _mul_radicands(r1: int, r2: int) -> tuple[int, Fraction]:
    """sqrt(r1)*sqrt(r2) = mult * sqrt(rad), rad square-free.

    Negative radicands follow the convention sqrt(-n) = i*sqrt(n), so
    sqrt(-1)*sqrt(-1) = -1.
    """
    sign = -1 if (r1 < 0 and r2 < 0) else 1
    s, r = squarefree_split(abs(r1) * abs(r2))
    if (r1 < 0) != (r2 < 0):
        r = -r
    return r, Fraction(sign * s)


class RadNum:
    """Immutable exact number: rational combination of square roots."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        # radicands must already be square-free; zero coefficients dropped
        self.terms = {r: Fraction(c) for r, c in terms.items() if c} if terms else {}
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def rational(q) -> "RadNum":
        q = Fraction(q)
        return RadNum({1: q} if q else None)

    @staticmethod
    def sqrt_rational(q) -> "RadNum":
        """Exact sqrt of a non-negative rational, as (1/b)*sqrt(a*b)."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("sqrt_rational needs a non-negative rational")
        if q == 0:
            return RadNum()
        return rad_normalize(q.numerator * q.denominator,
                             Fraction(1, q.denominator))

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_rational(self) -> bool:
        return not self.terms or set(self.terms) == {1}

    def as_fraction(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if set(self.terms) != {1}:
            raise ValueError("not a rational value: %s" % self)
        return self.terms[1]

    def term_count(self) -> int:
        return len(self.terms)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, RadNum):
            return NotImplemented
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for r, q in other.terms.items():
            s = out.get(r, 0) + q
            if s:
                out[r] = s
            else:
                out.pop(r, None)
        return RadNum(out)

    def __neg__(self):
        return RadNum({r: -q for r, q in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, RadNum):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RadNum()
            return RadNum({r: q * other for r, q in self.terms.items()})
        if not isinstance(other, RadNum):
            return NotImplemented
        out: dict[int, Fraction] = {}
        for r1, q1 in self.terms.items():
            for r2, q2 in other.terms.items():
                rad, mult = _mul_radicands(r1, r2)
                s = out.get(rad, 0) + q1 * q2 * mult
                if s:
                    out[rad] = s
                else:
                    out.pop(rad, None)
        return RadNum(out)

    __rmul__ = __mul__

    def conjugate(self, gen: int) -> "RadNum":
        """Flip the sign of every term whose radicand involves generator gen.

        gen is a prime, or -1 for the imaginary unit.
        """
        out = {}
        for r, q in self.terms.items():
            hit = (r < 0) if gen == -1 else (abs(r) % gen == 0)
            out[r] = -q if hit else q
        return RadNum(out)

    def generators(self) -> set[int]:
        gens: set[int] = set()
        for r in self.terms:
            if r < 0:
                gens.add(-1)
            for p in factorint(abs(r)):
                gens.add(p)
        return gens

    def inverse(self, max_radicands: int = 6) -> "RadNum":
        """Exact multiplicative inverse by repeated conjugation."""
        if not self.terms:
            raise ZeroDivisionError("RadNum inverse of zero")
        gens = self.generators()
        if len(gens) > max_radicands:
            raise RadicandLimitError(
                "inversion over %d radicand generators exceeds limit %d"
                % (len(gens), max_radicands))
        num = RadNum.rational(1)
        den = self
        while not den.is_rational():
            gen = min(den.generators())
            conj = den.conjugate(gen)
            num = num * conj
            den = den * conj
        return num * Fraction(1, den.as_fraction())

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, RadNum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- formatting --------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for r in sorted(self.terms):
            q = self.terms[r]
            if r == 1:
                piece = _fmt_fraction(q)
            elif q == 1:
                piece = "sqrt(%d)" % r
            elif q == -1:
                piece = "-sqrt(%d)" % r
            else:
                piece = "%s*sqrt(%d)" % (_fmt_fraction(q), r)
            parts.append(piece)
        out = parts[0]
        for piece in parts[1:]:
            out += " - " + piece[1:] if piece.startswith("-") else " + " + piece
        return out

    def __repr__(self):
        return "RadNum(%s)" % self


def _fmt_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


RAD_ZERO = RadNum()
RAD_ONE = RadNum.rational(1)


def rad_normalize(radicand: int, coeff) -> RadNum:
    """coeff*sqrt(radicand) with square factors pulled into the coefficient."""
    if radicand == 0:
        raise ValueError("zero radicand")
    coeff = Fraction(coeff)
    if not coeff:
        return RadNum()
    s, r = squarefree_split(abs(radicand))
    if radicand < 0:
        r = -r
    return RadNum({r: coeff * s})


def rad_add(a: RadNum, b: RadNum) -> RadNum:
    return a + b


def rad_mul(a: RadNum, b: RadNum) -> RadNum:
    return a * b


def rad_inv(a: RadNum, max_radicands: int = 6) -> RadNum:
    return a.inverse(max_radicands)


# ---------------------------------------------------------------------------
# Polynomials in f, g1, g2
# ---------------------------------------------------------------------------

_ZERO_MONO = (0, 0, 0)


class ParamPoly:
    """Polynomial in the parameters f, g1, g2 over RadNum.

    terms maps exponent triples (e_f, e_g1, e_g2) to non-zero RadNum values.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        self.terms = dict(terms) if terms else {}
        self._hash = None

    @staticmethod
    def const(value) -> "ParamPoly":
        if not isinstance(value, RadNum):
            value = RadNum.rational(value)
        return ParamPoly({_ZERO_MONO: value} if value else None)

    @staticmethod
    def param(name: str) -> "ParamPoly":
        mono = [0, 0, 0]
        mono[PARAMS.index(name)] = 1
        return ParamPoly({tuple(mono): RAD_ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {_ZERO_MONO}

    def constant_value(self) -> RadNum:
        if not self.terms:
            return RAD_ZERO
        if set(self.terms) != {_ZERO_MONO}:
            raise ValueError("not a constant polynomial: %s" % self)
        return self.terms[_ZERO_MONO]

    def degree(self, name: str) -> int:
        """Degree in one parameter; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        i = PARAMS.index(name)
        return max(mono[i] for mono in self.terms)

    def __add__(self, other):
        if not isinstance(other, ParamPoly):
            return NotImplemented
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, RAD_ZERO) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return ParamPoly(out)

    def __neg__(self):
        return ParamPoly({mono: -c for mono, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RadNum)):
            if not isinstance(other, RadNum):
                other = RadNum.rational(other)
            if not other:
                return ParamPoly()
            return ParamPoly({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, ParamPoly):
            return NotImplemented
        out: dict[tuple, RadNum] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                s = out.get(mono, RAD_ZERO) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return ParamPoly(out)

    __rmul__ = __mul__

    def evaluate(self, f=0, g1=0, g2=0) -> RadNum:
        """Substitute rational values for f, g1, g2."""
        vals = (Fraction(f), Fraction(g1), Fraction(g2))
        total = RAD_ZERO
        for mono, c in self.terms.items():
            scale = Fraction(1)
            for v, e in zip(vals, mono):
                scale *= v ** e
            total = total + c * scale
        return total

    def __eq__(self, other):
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            names = []
            for name, e in zip(PARAMS, mono):
                if e == 1:
                    names.append(name)
                elif e > 1:
                    names.append("%s^%d" % (name, e))
            cs = str(c)
            if names:
                if cs == "1":
                    cs = ""
                elif cs == "-1":
                    cs = "-"
                elif len(c.terms) > 1 or not c.is_rational():
                    cs = "(%s)*" % cs
                else:
                    cs += "*"
                parts.append(cs + "*".join(names))
            else:
                parts.append("(%s)" % cs if len(c.terms) > 1 else cs)
        out = parts[0]
        for piece in parts[1:]:
            out += " - " + piece[1:] if piece.startswith("-") else " + " + piece
        return out

    def __repr__(self):
        return "ParamPoly(%s)" % self


POLY_ZERO = ParamPoly()
POLY_ONE = ParamPoly.const(1)
