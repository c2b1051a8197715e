"""Sparse exact linear algebra over RadNum with polynomial right-hand sides.

The main path is division-based sparse Gaussian elimination with a
Markowitz-style minimum-fill pivot rule; a dense fraction-free (Bareiss)
path serves as determinant routine and cross-validation oracle.  Matrices
must be parameter-free (RadNum entries); the parameters f, g1, g2 may only
ride along on the right-hand side, so every division is by a field pivot
and solutions stay polynomial in the parameters.

When every entry (and every right-hand-side coefficient) is rational, the
elimination switches to gmpy2.mpq arithmetic for speed; the pivot rule and
results are identical either way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from gmpy2 import mpq

from .exactnum import ParamPoly, RAD_ZERO, RadNum
from . import parsing

DEFAULT_DET_LIMIT = 64


class ParameterInMatrixError(ValueError):
    """A matrix entry carries f/g1/g2; only the RHS may."""


@dataclass
class SparseSystem:
    rows: int
    cols: int
    entries: dict  # (row, col) -> RadNum, no zeros, no duplicates
    rhs: Optional[list] = None  # per-row ParamPoly

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not 0 <= r < self.rows or not 0 <= c < self.cols:
                raise ValueError("entry (%d, %d) out of range" % (r, c))
            if isinstance(v, ParamPoly):
                if not v.is_constant():
                    raise ParameterInMatrixError(
                        "parameter-carrying matrix entry at (%d, %d)" % (r, c))
                v = v.constant_value()
            if not isinstance(v, RadNum):
                v = RadNum.rational(v)
            if v:
                clean[(r, c)] = v
        self.entries = clean
        if self.rhs is not None:
            if len(self.rhs) != self.rows:
                raise ValueError("rhs length %d != rows %d"
                                 % (len(self.rhs), self.rows))
            self.rhs = [b if isinstance(b, ParamPoly) else ParamPoly.const(b)
                        for b in self.rhs]

    def is_rational(self) -> bool:
        if not all(v.is_rational() for v in self.entries.values()):
            return False
        if self.rhs is not None:
            for b in self.rhs:
                if not all(c.is_rational() for c in b.terms.values()):
                    return False
        return True


@dataclass
class SolveResult:
    status: str  # "unique" | "inconsistent" | "underdetermined"
    rank: int
    solution: Optional[list] = None       # per-column ParamPoly
    free_cols: list = field(default_factory=list)
    inconsistent_row: Optional[int] = None


# ---------------------------------------------------------------------------
# Field adapters: identical elimination logic over RadNum or mpq
# ---------------------------------------------------------------------------

class _RadOps:
    @staticmethod
    def to_field(v):
        return v

    @staticmethod
    def from_field(v):
        return v

    @staticmethod
    def div(a, b):
        return a * b.inverse()

    @staticmethod
    def term_count(v):
        return v.term_count()


class _RatOps:
    @staticmethod
    def to_field(v):
        q = v.as_fraction() if isinstance(v, RadNum) else Fraction(v)
        return mpq(q.numerator, q.denominator)

    @staticmethod
    def from_field(v):
        return RadNum.rational(Fraction(int(v.numerator), int(v.denominator)))

    @staticmethod
    def div(a, b):
        return a / b

    @staticmethod
    def term_count(v):
        return 1


def _rhs_cells(system, ops):
    """Per-row polynomial RHS as {monomial: field scalar} dicts."""
    cells = []
    for b in system.rhs:
        cells.append({mono: ops.to_field(c) for mono, c in b.terms.items()})
    return cells


def _cell_to_poly(cell, ops) -> ParamPoly:
    return ParamPoly({mono: ops.from_field(v) for mono, v in cell.items()
                      if v})


_PIVOT_COL_SCAN = 16  # columns examined per pivot choice


def _eliminate(system: SparseSystem, with_rhs: bool):
    """Forward elimination.  Returns (ops, rows, rhs, pivots, zero_rows).

    rows is a list of {col: value} dicts in echelon form; pivots is the
    ordered list of (row, col) pivot positions; zero_rows are rows whose
    matrix part vanished.
    """
    ops = _RatOps if system.is_rational() else _RadOps
    rows = [dict() for _ in range(system.rows)]
    for (r, c), v in system.entries.items():
        rows[r][c] = ops.to_field(v)
    rhs = _rhs_cells(system, ops) if (with_rhs and system.rhs is not None) \
        else None

    col_rows: dict[int, set] = {}
    for r, row in enumerate(rows):
        for c in row:
            col_rows.setdefault(c, set()).add(r)

    pivots = []
    zero_rows = [r for r, row in enumerate(rows) if not row]
    while col_rows:
        # Markowitz-style choice: among the sparsest columns pick the entry
        # with the smallest (row fill) * (col fill) product; ties broken by
        # value term count, then column, then row, for determinism.
        min_count = min(len(s) for s in col_rows.values())
        cands = sorted(c for c, s in col_rows.items()
                       if len(s) <= min_count + 1)[:_PIVOT_COL_SCAN]
        best = None
        for c in cands:
            ccount = len(col_rows[c])
            for r in sorted(col_rows[c]):
                key = ((len(rows[r]) - 1) * (ccount - 1),
                       ops.term_count(rows[r][c]), c, r)
                if best is None or key < best[0]:
                    best = (key, r, c)
        _, pr, pc = best
        pivots.append((pr, pc))
        pivrow = rows[pr]
        pivval = pivrow[pc]
        pivrhs = rhs[pr] if rhs is not None else None
        # retire the pivot row from the active structure
        for c in pivrow:
            s = col_rows.get(c)
            if s is not None:
                s.discard(pr)
                if not s:
                    del col_rows[c]
        # eliminate the pivot column from the remaining active rows
        for r in sorted(col_rows.pop(pc, ())):
            row = rows[r]
            factor = ops.div(row.pop(pc), pivval)
            for c, v in pivrow.items():
                if c == pc:
                    continue
                s = row.get(c)
                if s is None:
                    nv = -factor * v
                    if nv:
                        row[c] = nv
                        col_rows.setdefault(c, set()).add(r)
                else:
                    nv = s - factor * v
                    if nv:
                        row[c] = nv
                    else:
                        del row[c]
                        cs = col_rows.get(c)
                        if cs is not None:
                            cs.discard(r)
                            if not cs:
                                del col_rows[c]
            if rhs is not None and pivrhs:
                cell = rhs[r]
                for mono, v in pivrhs.items():
                    old = cell.get(mono)
                    nv = -factor * v if old is None else old - factor * v
                    if nv:
                        cell[mono] = nv
                    else:
                        cell.pop(mono, None)
            if not row:
                zero_rows.append(r)
    return ops, rows, rhs, pivots, zero_rows


def rank(system: SparseSystem) -> int:
    _, _, _, pivots, _ = _eliminate(system, with_rhs=False)
    return len(pivots)


def nullspace(system: SparseSystem) -> list:
    """Basis of the right null space; vectors are per-column RadNum lists."""
    ops, rows, _, pivots, _ = _eliminate(system, with_rhs=False)
    pivot_cols = {c for _, c in pivots}
    free_cols = [c for c in range(system.cols) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        x = {fc: ops.to_field(RadNum.rational(1))}
        for pr, pc in reversed(pivots):
            row = rows[pr]
            acc = None
            for c, v in row.items():
                if c == pc:
                    continue
                xv = x.get(c)
                if xv is not None:
                    acc = v * xv if acc is None else acc + v * xv
            if acc:
                x[pc] = ops.div(-acc, row[pc])
        vec = [RAD_ZERO] * system.cols
        for c, v in x.items():
            if v:
                vec[c] = ops.from_field(v)
        basis.append(vec)
    return basis


def solve(system: SparseSystem) -> SolveResult:
    """Exact solve with a polynomial RHS.

    Reports free columns when underdetermined and the first inconsistent
    row otherwise; parameters never enter any division.
    """
    if system.rhs is None:
        raise ValueError("system has no right-hand side")
    ops, rows, rhs, pivots, zero_rows = _eliminate(system, with_rhs=True)
    for r in sorted(zero_rows):
        if rhs[r]:
            return SolveResult("inconsistent", len(pivots),
                               inconsistent_row=r)
    pivot_cols = {c for _, c in pivots}
    free_cols = [c for c in range(system.cols) if c not in pivot_cols]
    if free_cols:
        return SolveResult("underdetermined", len(pivots),
                           free_cols=free_cols)
    x: dict[int, dict] = {}
    for pr, pc in reversed(pivots):
        row = rows[pr]
        cell = dict(rhs[pr])
        for c, v in row.items():
            if c == pc:
                continue
            for mono, xv in x[c].items():
                old = cell.get(mono)
                nv = -(v * xv) if old is None else old - v * xv
                if nv:
                    cell[mono] = nv
                else:
                    cell.pop(mono, None)
        piv = row[pc]
        x[pc] = {mono: ops.div(v, piv) for mono, v in cell.items()}
    solution = [_cell_to_poly(x.get(c, {}), ops) for c in range(system.cols)]
    return SolveResult("unique", len(pivots), solution=solution)


# ---------------------------------------------------------------------------
# Dense fraction-free path (oracle / determinants)
# ---------------------------------------------------------------------------

def det_bareiss(matrix, max_size: int = DEFAULT_DET_LIMIT) -> RadNum:
    """Exact determinant of a dense RadNum matrix by Bareiss elimination."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square")
    if n > max_size:
        raise ValueError("matrix size %d exceeds limit %d" % (n, max_size))
    if n == 0:
        return RadNum.rational(1)
    a = [list(row) for row in matrix]
    sign = 1
    prev = RadNum.rational(1)
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return RAD_ZERO
        prev_inv = prev.inverse()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) * prev_inv
            a[i][k] = RAD_ZERO
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def dense_rank(matrix) -> int:
    """Rank of a dense RadNum matrix by plain Gaussian elimination."""
    a = [list(row) for row in matrix]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = a[r][c].inverse()
        for i in range(r + 1, nrows):
            if a[i][c]:
                f = a[i][c] * inv
                for j in range(c, ncols):
                    a[i][j] = a[i][j] - f * a[r][j]
        r += 1
        if r == nrows:
            break
    return r


def det_cofactor(matrix) -> RadNum:
    """Recursive cofactor expansion; independent small-matrix oracle."""
    n = len(matrix)
    if n == 0:
        return RadNum.rational(1)
    if n == 1:
        return matrix[0][0]
    total = RAD_ZERO
    for c in range(n):
        if not matrix[0][c]:
            continue
        minor = [[row[j] for j in range(n) if j != c] for row in matrix[1:]]
        term = matrix[0][c] * det_cofactor(minor)
        total = total + (term if c % 2 == 0 else -term)
    return total


def to_dense(system: SparseSystem):
    mat = [[RAD_ZERO] * system.cols for _ in range(system.rows)]
    for (r, c), v in system.entries.items():
        mat[r][c] = v
    return mat


# ---------------------------------------------------------------------------
# Matrix file format: header `rows cols`, entries `r c <coeff>`, optional
# right-hand side lines `b r <coeff>`.
# ---------------------------------------------------------------------------

def parse_matrix(text: str) -> SparseSystem:
    lines = text.splitlines()
    header = None
    entries = {}
    rhs_map = {}
    for ln, raw in enumerate(lines, start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        parts = stripped.split(None, 2)
        if header is None:
            if len(parts) != 2:
                raise parsing.ParseError("expected header `rows cols`",
                                         line=ln)
            header = (int(parts[0]), int(parts[1]))
            continue
        if parts[0] == "b":
            if len(parts) != 3:
                raise parsing.ParseError("expected `b <row> <coefficient>`",
                                         line=ln)
            rhs_map[int(parts[1])] = parsing.parse_scalar(parts[2], line=ln)
            continue
        if len(parts) != 3:
            raise parsing.ParseError("expected `row col <coefficient>`",
                                     line=ln)
        r, c = int(parts[0]), int(parts[1])
        coeff = parsing.parse_scalar(parts[2], line=ln)
        if (r, c) in entries:
            raise parsing.ParseError("duplicate entry (%d, %d)" % (r, c),
                                     line=ln)
        entries[(r, c)] = coeff
    if header is None:
        raise parsing.ParseError("missing header")
    rows, cols = header
    rhs = None
    if rhs_map:
        rhs = [rhs_map.get(r, ParamPoly()) for r in range(rows)]
    return SparseSystem(rows, cols, entries, rhs)
