"""Parsing of rational-function coefficient expressions."""

import pytest

from ddelab.exprparse import ParseError, parse_expression
from ddelab.fieldelem import FieldElem
from ddelab.gaussian import gauss

Z = FieldElem.var("z")
ONE = FieldElem.const(1)


def test_integers_and_rationals():
    assert parse_expression("3", ("z",)) == FieldElem.const(3)
    assert parse_expression("2/3", ("z",)) == FieldElem.const(2) / FieldElem.const(3)
    assert parse_expression("-1/4", ("z",)) == FieldElem.const(-1) / FieldElem.const(4)


def test_imaginary_unit():
    assert parse_expression("i", ("z",)) == FieldElem.const(gauss(0, 1))
    assert parse_expression("i^2", ("z",)) == FieldElem.const(-1)
    assert parse_expression("(1+i)*(1-i)", ("z",)) == FieldElem.const(2)


def test_variables_and_precedence():
    assert parse_expression("z^2 + 2*z + 1", ("z",)) == (Z + 1) * (Z + 1)
    assert parse_expression("2*z^3", ("z",)) == FieldElem.const(2) * Z ** 3
    # ^ binds tighter than unary minus on the base
    assert parse_expression("-z^2", ("z",)) == FieldElem.const(-1) * Z * Z


def test_division_and_rational_functions():
    f = parse_expression("(z+1)/(z-1)", ("z",))
    assert f == (Z + 1) / (Z - 1)
    g = parse_expression("1/z^2", ("z",))
    assert g == ONE / (Z * Z)


def test_negative_exponent():
    assert parse_expression("z^-1", ("z",)) == ONE / Z
    assert parse_expression("2^-2", ("z",)) == FieldElem.const(1) / FieldElem.const(4)


def test_multiple_variables():
    f = parse_expression("lam + mu*z", ("z", "lam", "mu"))
    lam = FieldElem.var("lam")
    mu = FieldElem.var("mu")
    assert f == lam + mu * Z


def test_unknown_symbol_rejected():
    with pytest.raises(ParseError):
        parse_expression("q + 1", ("z",))


def test_error_positions():
    try:
        parse_expression("z + @", ("z",))
    except ParseError as e:
        assert e.line == 1
        assert e.col == 5
    else:
        pytest.fail("expected ParseError")


def test_division_by_literal_zero():
    with pytest.raises(ParseError):
        parse_expression("1/0", ("z",))
    with pytest.raises(ParseError):
        parse_expression("1/(2-2)", ("z",))


def test_zero_to_negative_power():
    with pytest.raises(ParseError):
        parse_expression("0^-1", ("z",))


def test_whitespace_and_nesting():
    f = parse_expression("  ( z + 1 ) ^ 2  ", ("z",))
    assert f == (Z + 1) * (Z + 1)


def test_unbalanced_parens():
    with pytest.raises(ParseError):
        parse_expression("(z+1", ("z",))
    with pytest.raises(ParseError):
        parse_expression("z+1)", ("z",))
