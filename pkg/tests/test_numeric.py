from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tightstorage.numeric import (LinearForm, ZeroDenominator, combine, format_decimal, format_rational,
                                  rational_reduce, to_rational)


def test_parse_forms():
    assert to_rational("3/4") == Fraction(3, 4)
    assert to_rational("0.9") == Fraction(9, 10)
    assert to_rational(0.9) == Fraction(9, 10)
    assert to_rational(-2) == -2
    assert to_rational(Fraction(6, 4)) == Fraction(3, 2)


def test_zero_denominator():
    with pytest.raises(ZeroDenominator):
        rational_reduce(1, 0)
    with pytest.raises(ZeroDenominator):
        to_rational("1/0")


def test_rejects_bad_values():
    with pytest.raises(TypeError):
        to_rational(True)
    with pytest.raises(ValueError):
        to_rational(float("nan"))


def test_format_rational_reduces_with_sign_on_numerator():
    assert format_rational(rational_reduce(6, -4)) == "-3/2"
    assert format_rational(5) == "5/1"


@pytest.mark.parametrize("q,text", [("1732/10", "173.2"), ("1/20", "0.1"), ("-1/20", "-0.1"),
                                    ("3/20", "0.2"), ("0", "0.0"), ("-1/100", "0.0"), ("5882", "5882.0")])
def test_format_decimal_half_away_from_zero(q, text):
    assert format_decimal(to_rational(q)) == text


@given(st.integers(-10**6, 10**6), st.integers(1, 10**4))
def test_roundtrip(n, d):
    q = rational_reduce(n, d)
    assert to_rational(format_rational(q)) == q
    assert q.denominator > 0


def test_linear_form_algebra():
    a = LinearForm({"x": 1, "y": 2}, 3)
    b = LinearForm({"x": -1, "z": to_rational("1/2")})
    s = a + b
    assert s.coef("x") == 0 and "x" not in s.variables()
    assert s.evaluate({"y": 1, "z": 4}) == 7
    assert combine(a, 2, b, 2).coef("z") == 1
    sub = a.substitute("y", LinearForm({"z": 1}, 1))
    assert sub.coef("z") == 2 and sub.constant == 5
