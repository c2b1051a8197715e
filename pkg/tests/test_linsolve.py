"""Sparse exact linear algebra and its dense fraction-free oracles."""

import random
from fractions import Fraction

import pytest

from bracketalg.exactnum import RAD_ZERO, ParamPoly, RadNum
from bracketalg.linsolve import (
    ParameterInMatrixError,
    SparseSystem,
    dense_rank,
    det_bareiss,
    det_cofactor,
    nullspace,
    parse_matrix,
    rank,
    solve,
    to_dense,
)

S2 = RadNum.sqrt_rational(2)
ONE = RadNum.rational(1)


def _sys(rows, cols, entries, rhs=None):
    return SparseSystem(rows, cols, entries, rhs)


def test_identity_rank_and_nullspace():
    s = _sys(5, 5, {(i, i): ONE for i in range(5)})
    assert rank(s) == 5
    assert nullspace(s) == []


def test_radical_rank_deficiency():
    # [[1, sqrt2],[sqrt2, 2]]: second row is sqrt2 times the first
    s = _sys(2, 2, {(0, 0): ONE, (0, 1): S2, (1, 0): S2,
                    (1, 1): RadNum.rational(2)})
    assert rank(s) == 1
    basis = nullspace(s)
    assert len(basis) == 1
    (vec,) = basis
    # the kernel is spanned by (-sqrt2, 1)
    scale = vec[1]
    assert vec[0] == -S2 * scale


def test_nullspace_vectors_are_exact():
    rng = random.Random(5)
    for _ in range(20):
        n = 8
        entries = {}
        for r in range(5):
            for c in range(n):
                if rng.random() < 0.5:
                    entries[(r, c)] = RadNum(
                        {rng.choice((1, 2, 3)): Fraction(rng.randint(-3, 3))})
        s = _sys(5, n, entries)
        for vec in nullspace(s):
            for r in range(5):
                acc = RAD_ZERO
                for c in range(n):
                    v = entries.get((r, c))
                    if v:
                        acc = acc + v * vec[c]
                assert acc == RAD_ZERO


def test_solve_identity():
    b = [ParamPoly.const(3), ParamPoly.param("f")]
    s = _sys(2, 2, {(0, 0): ONE, (1, 1): ONE}, rhs=b)
    result = solve(s)
    assert result.status == "unique"
    assert result.solution == b


def test_solve_scalar_with_param_rhs():
    # 2x = 6 + 4f -> x = 3 + 2f
    rhs = [ParamPoly.const(6) + ParamPoly.param("f") * 4]
    s = _sys(1, 1, {(0, 0): RadNum.rational(2)}, rhs=rhs)
    result = solve(s)
    assert result.solution == [ParamPoly.const(3) + ParamPoly.param("f") * 2]


def test_solve_underdetermined_and_inconsistent():
    s = _sys(2, 2, {(0, 0): ONE}, rhs=[ParamPoly.const(1), ParamPoly.const(0)])
    r = solve(s)
    assert r.status == "underdetermined"
    assert r.free_cols == [1]

    s = _sys(2, 1, {(0, 0): ONE},
             rhs=[ParamPoly.const(1), ParamPoly.const(2)])
    r = solve(s)
    assert r.status == "inconsistent"
    assert r.inconsistent_row == 1


def test_parameter_in_matrix_rejected():
    with pytest.raises(ParameterInMatrixError):
        _sys(1, 1, {(0, 0): ParamPoly.param("f")})


def test_out_of_range_entry_rejected():
    with pytest.raises(ValueError):
        _sys(2, 2, {(2, 0): ONE})


def _random_radical_system(rng, rows=20, cols=20, density=0.25):
    entries = {}
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                rad = rng.choice((1, 1, 2, 3))
                q = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                if q:
                    entries[(r, c)] = RadNum({rad: q})
    return _sys(rows, cols, entries)


def test_rank_matches_dense_oracle_100_systems():
    rng = random.Random(777)
    for _ in range(100):
        s = _random_radical_system(rng)
        assert rank(s) == dense_rank(to_dense(s))


def test_rank_permutation_invariance():
    rng = random.Random(99)
    for _ in range(10):
        s = _random_radical_system(rng, rows=12, cols=12)
        rperm = list(range(12))
        cperm = list(range(12))
        rng.shuffle(rperm)
        rng.shuffle(cperm)
        permuted = _sys(12, 12, {(rperm[r], cperm[c]): v
                                 for (r, c), v in s.entries.items()})
        assert rank(s) == rank(permuted)


def test_solve_evaluate_homomorphism():
    """Solving then evaluating equals evaluating then solving."""
    rng = random.Random(31337)
    points = [(2, -1, 3), (0, 5, 1), (-3, 2, -2)]
    checked = 0
    while checked < 20:
        n = 10
        entries = {}
        for r in range(n):
            entries[(r, r)] = RadNum.rational(rng.randint(1, 5))
            for c in range(n):
                if c != r and rng.random() < 0.2:
                    entries[(r, c)] = RadNum.rational(rng.randint(-3, 3))
        rhs = []
        for _ in range(n):
            b = ParamPoly.const(rng.randint(-5, 5)) \
                + ParamPoly.param("f") * rng.randint(-2, 2) \
                + ParamPoly.param("g1") * rng.randint(-2, 2)
            rhs.append(b)
        s = _sys(n, n, dict(entries), rhs=list(rhs))
        result = solve(s)
        if result.status != "unique":
            continue
        for f, g1, g2 in points:
            evaluated_rhs = [ParamPoly.const(b.evaluate(f=f, g1=g1, g2=g2))
                             for b in rhs]
            s2 = _sys(n, n, dict(entries), rhs=evaluated_rhs)
            r2 = solve(s2)
            assert r2.status == "unique"
            got = [x.constant_value() for x in r2.solution]
            want = [x.evaluate(f=f, g1=g1, g2=g2) for x in result.solution]
            assert got == want
        checked += 1


def test_det_trivial():
    assert det_bareiss([[ONE]]) == ONE
    assert det_bareiss([[RAD_ZERO, ONE], [ONE, RAD_ZERO]]) == RadNum.rational(-1)


def test_det_bareiss_vs_cofactor():
    rng = random.Random(2024)
    for _ in range(10):
        n = 5
        m = [[RadNum({rng.choice((1, 2)): Fraction(rng.randint(-3, 3))})
              for _ in range(n)] for _ in range(n)]
        assert det_bareiss(m) == det_cofactor(m)


def test_det_size_limit():
    big = [[ONE] * 65 for _ in range(65)]
    with pytest.raises(ValueError):
        det_bareiss(big)


def test_parse_matrix_format():
    text = "2 2\n0 0 1\n0 1 sqrt(2)\n1 1 -3/4\nb 0 1 + 2*f\nb 1 0\n"
    s = parse_matrix(text)
    assert (s.rows, s.cols) == (2, 2)
    assert s.entries[(0, 1)] == S2
    assert s.rhs[0] == ParamPoly.const(1) + ParamPoly.param("f") * 2
    r = solve(s)
    assert r.status == "unique"


def test_determinism():
    rng = random.Random(4)
    s = _random_radical_system(rng, rows=15, cols=15)
    first = solve(_sys(15, 15, dict(s.entries),
                       rhs=[ParamPoly.const(1)] * 15))
    second = solve(_sys(15, 15, dict(s.entries),
                        rhs=[ParamPoly.const(1)] * 15))
    assert first.status == second.status
    assert first.solution == second.solution
    assert first.free_cols == second.free_cols
