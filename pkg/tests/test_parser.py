"""Expression text grammar and form keys."""

import cmath
import math

import pytest

from contactlift import holoalg as ha
from contactlift.errors import ParseError, UnknownName
from contactlift.parser import parse_expression, parse_form_key


def ev(text, variables=("z", "w"), point=(0.0, 0.0)):
    return ha.evaluate(parse_expression(text, variables), point)


def test_rational_density():
    e = parse_expression("2/(1-z)^3", ("z", "w"))
    assert abs(ha.evaluate(e, (0.5, 0.0)) - 16.0) < 1e-13


def test_power_binds_tighter_than_unary_minus():
    assert abs(ev("-z^2", point=(3.0, 0.0)) + 9.0) < 1e-13


def test_imaginary_and_pi_literals():
    assert abs(ev("2*pi*i") - 2j * math.pi) < 1e-14
    assert abs(ev("i^2") + 1.0) < 1e-14


def test_scientific_notation():
    assert abs(ev("1e-3 + 2.5") - 2.501) < 1e-15


def test_function_calls_with_branch():
    got = ev("log(z; 1)", point=(2.0, 0.0))
    assert abs(got - (math.log(2) + 2j * math.pi)) < 1e-13
    got = ev("sqrt(z; 1)", point=(4.0, 0.0))
    assert abs(got + 2.0) < 1e-13
    got = ev("exp(z*w)", point=(1.0, 2.0))
    assert abs(got - math.exp(2)) < 1e-12


def test_whitespace_insensitive():
    a = parse_expression("z * w+ 2", ("z", "w"))
    b = parse_expression("z*w+2", ("z", "w"))
    assert a == b


def test_unknown_name():
    with pytest.raises(UnknownName):
        parse_expression("z + q", ("z", "w"))


def test_parse_error_has_location():
    with pytest.raises(ParseError) as err:
        parse_expression("z + * w", ("z", "w"))
    assert err.value.line == 1
    assert err.value.column == 5
    assert err.value.token == "*"


def test_bad_character_reported():
    with pytest.raises(ParseError) as err:
        parse_expression("z @ w", ("z", "w"))
    assert err.value.token == "@"


def test_non_integer_exponent_rejected():
    with pytest.raises(ParseError):
        parse_expression("z^1.5", ("z",))


def test_trailing_input_rejected():
    with pytest.raises(ParseError):
        parse_expression("z w", ("z", "w"))


def test_form_key_single():
    assert parse_form_key("d[z]", ("z", "w")) == (0,)


def test_form_key_pair():
    assert parse_form_key("d[z]^d[w]", ("z", "w")) == (0, 1)


def test_form_key_order_enforced():
    with pytest.raises(ParseError):
        parse_form_key("d[w]^d[z]", ("z", "w"))


def test_form_key_double_caret():
    with pytest.raises(ParseError):
        parse_form_key("d[z]^^d[w]", ("z", "w"))


def test_form_key_unknown_coordinate():
    with pytest.raises(UnknownName):
        parse_form_key("d[q]", ("z", "w"))
