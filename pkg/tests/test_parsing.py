"""The shared textual grammar."""

from fractions import Fraction

import pytest

from bracketalg.algebra import acom, com, leaf
from bracketalg.exactnum import ParamPoly, RadNum
from bracketalg.parsing import ParseError, parse_scalar, parse_term, parse_tree


def rad(d):
    return ParamPoly.const(RadNum(d))


def test_rational_scalars():
    assert parse_scalar("-1729/5") == ParamPoly.const(Fraction(-1729, 5))
    assert parse_scalar("3") == ParamPoly.const(3)
    assert parse_scalar("(2+3)*4") == ParamPoly.const(20)


def test_sqrt_normalization():
    assert parse_scalar("sqrt(8)") == rad({2: Fraction(2)})
    # sqrt(7/6) stored as (1/6)*sqrt(42)
    assert parse_scalar("sqrt(7/6)") == rad({42: Fraction(1, 6)})
    assert parse_scalar("sqrt(-2)") == parse_scalar("i*sqrt(2)")


def test_imaginary_alias():
    assert parse_scalar("i") == rad({-1: Fraction(1)})
    assert parse_scalar("i*i") == ParamPoly.const(-1)


def test_parameters_and_powers():
    p = parse_scalar("2*f^2 + g1 - g2/3")
    f, g1, g2 = (ParamPoly.param(n) for n in ("f", "g1", "g2"))
    assert p == f * f * 2 + g1 - g2 * Fraction(1, 3)


def test_tree_parsing():
    t = parse_tree("com(com(T2,S1;2),S1;1)")
    assert t == com(com(leaf("T2"), leaf("S1"), 2), leaf("S1"), 1)
    assert parse_tree("acom(J1,J1;0)") == acom(leaf("J1"), leaf("J1"), 0)


def test_term_parsing():
    coeff, tree = parse_term("(-1729/5)*i*sqrt(2) * com(T2,S1;1)")
    assert tree == com(leaf("T2"), leaf("S1"), 1)
    assert coeff == rad({-2: Fraction(-1729, 5)})


def test_coefficient_order_irrelevant():
    a, _ = parse_term("(-1729/5)*sqrt(2)*i * com(T2,S1;1)")
    b, _ = parse_term("(-1729/5)*i*sqrt(2) * com(T2,S1;1)")
    assert a == b


def test_affine_coefficient():
    coeff, _ = parse_term("(1/2 + 3*f)*sqrt(5) * acom(T2,T2;0)")
    s5 = RadNum.sqrt_rational(5)
    assert coeff == ParamPoly.const(s5 * Fraction(1, 2)) \
        + ParamPoly.param("f") * ParamPoly.const(s5 * 3)


def test_syntax_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse_term("1 * com(T2,S1;1", line=7)
    assert exc.value.line == 7

    with pytest.raises(ParseError):
        parse_scalar("sqrt(2")
    with pytest.raises(ParseError):
        parse_tree("com(T2;1)")
    with pytest.raises(ParseError):
        parse_term("1 * com(T2,S1;1) junk")


def test_unknown_generator_rejected():
    with pytest.raises(ParseError):
        parse_tree("com(T2,Q7;1)")


def test_division_by_tree_or_param_rejected():
    with pytest.raises(ParseError):
        parse_scalar("1/f")
    with pytest.raises(ParseError):
        parse_term("1 / com(T2,S1;1)")


def test_scalar_rejects_tree_and_vice_versa():
    with pytest.raises(ParseError):
        parse_scalar("com(T2,S1;1)")
    with pytest.raises(ParseError):
        parse_tree("2 * com(T2,S1;1)")
    with pytest.raises(ParseError):
        parse_term("3 + 4")  # no tree


def test_round_trip_through_str():
    text = "com(com(com(T2,S1;2),S1;1),com(S2,S1;1);0)"
    assert str(parse_tree(text)) == text
