"""Exact so(3)-covariant, graded bracket calculus.

Subpackages by responsibility:

- ``exactnum``: exact numbers with square roots (RadNum) and polynomial
  coefficients in the parameters f, g1, g2 (ParamPoly);
- ``wigner``: exact integer-spin Clebsch-Gordan coefficients in two
  independent implementations;
- ``algebra``: generator registry, coupled commutator/anticommutator
  trees, expansion into the free associative algebra, grading/parity
  bookkeeping, the so(3) derivation action;
- ``parsing``: the shared textual grammar;
- ``relation_io``: relation-file I/O, the shipped corpus, the structural
  validator, the per-term covariance check;
- ``hall``: ordering, enumeration, free-envelope rank selection, Witt
  dimensions;
- ``linsolve``: sparse exact linear algebra with dense fraction-free
  oracles;
- ``cli``: the ``bracketalg`` command.
"""

from .exactnum import ParamPoly, RadNum
from .algebra import BracketTree, WordPoly, acom, act, com, expand, leaf

__all__ = [
    "ParamPoly",
    "RadNum",
    "BracketTree",
    "WordPoly",
    "acom",
    "act",
    "com",
    "expand",
    "leaf",
]

__version__ = "0.1.0"
