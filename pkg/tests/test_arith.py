from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from src.arith import (
    Q,
    U,
    Z,
    PoleHit,
    RatFunc,
    RegimeMismatch,
    UnboundVariable,
    ZeroDenominator,
    deviation,
    normalize_scalar,
    scalar_from_json,
    scalar_to_json,
    scalars_equal,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=30)


def test_lowest_terms():
    assert (1 - Z**2) / (1 - Z) == 1 + Z
    assert RatFunc(0) == 0
    assert not RatFunc(0)


def test_division_by_zero():
    with pytest.raises(ZeroDenominator):
        Z / RatFunc(0)
    with pytest.raises(ZeroDenominator):
        RatFunc(0) ** -1


def test_evaluate():
    f = (1 - Q**-1) / (1 - Z * U)
    assert f.evaluate({"q": 3, "z": Fraction(1), "u": Fraction(1, 3)}) == 1
    with pytest.raises(UnboundVariable):
        f.evaluate({"q": 3})
    with pytest.raises(PoleHit):
        (1 / (1 - Z)).evaluate({"z": 1})


def test_evaluate_numeric_and_mixing():
    value = (1 / (1 - Z)).evaluate({"z": 0.5j})
    assert isinstance(value, complex)
    assert abs(value - 1 / (1 - 0.5j)) < 1e-12
    with pytest.raises(RegimeMismatch):
        Z + 1j


def test_subs_composes():
    f = 1 / (1 - Z)
    assert f.subs(z=1 / Z) == Z / (Z - 1)
    assert f.subs(z=Q) == 1 / (1 - Q)


def test_shell_expand_both_sides():
    f = 1 / (1 - Z)
    at_zero = f.shell_expand("z", "at-zero", 4)
    assert at_zero.leading == 0
    assert at_zero.coefficients == [1, 1, 1, 1]
    at_infinity = f.shell_expand("z", "at-infinity", 3)
    assert at_infinity.leading == -1
    assert [at_infinity.coefficient(e) for e in (-1, -2, -3)] == [-1, -1, -1]
    assert at_infinity.coefficient(0) == 0


def test_shell_expand_symbolic_coefficients():
    f = (1 - Q**-1) / (1 - Z / Q)
    expansion = f.shell_expand("z", "at-zero", 5)
    for j, c in enumerate(expansion.coefficients):
        assert c == (1 - Q**-1) * Q**-j


def test_factor_denominator_and_laurent():
    f = 1 / ((1 - Z) * (1 - Q * Z) ** 2)
    multiplicities = sorted(k for factor, k in f.factor_denominator() if "z" in factor.variables())
    assert multiplicities == [1, 2]
    laurent = (3 * Z**-2 + Z).as_laurent("z")
    assert laurent == {-2: 3, 1: 1}
    with pytest.raises(ValueError):
        f.as_laurent("z")


def test_json_encoding():
    f = Q / (1 - Z * U)
    assert scalar_from_json(scalar_to_json(f)) == f
    assert scalar_from_json(scalar_to_json(Fraction(-3, 7))) == Fraction(-3, 7)
    assert scalar_from_json(scalar_to_json(1 - 2j)) == 1 - 2j
    assert isinstance(scalar_from_json(scalar_to_json(RatFunc(5))), Fraction)


def test_normalize_and_compare():
    assert isinstance(normalize_scalar(RatFunc(3)), Fraction)
    assert normalize_scalar(1.5) == complex(1.5)
    assert scalars_equal(1 + 1e-12j, Fraction(1))
    assert not scalars_equal(Q, Q + 1)
    assert deviation(Fraction(1), Fraction(2)) == float("inf")
    assert deviation(1j, 1j) == 0.0


@given(fractions, fractions)
def test_field_operations_agree_with_fractions(a, b):
    assert RatFunc(a) + RatFunc(b) == a + b
    assert RatFunc(a) * b == a * b
    assert ((Z + a) * (Z - a)).evaluate({"z": b}) == b * b - a * a


@given(fractions.filter(lambda x: x not in (0, 1)))
def test_geometric_identity(x):
    f = (1 - Z**5) / (1 - Z)
    assert f.evaluate({"z": x}) == sum(x**j for j in range(5))
