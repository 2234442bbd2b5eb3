"""
This module defines the scalar regimes and the helpers that move values between them.

A scalar is either exact (``Fraction`` or ``RatFunc``) or numeric (``complex``). Exact
rationals are welcome in both regimes; rational functions and complex numbers never mix.
"""

import cmath
from fractions import Fraction
from typing import Mapping, Union

from .errors import NonFinite, RegimeMismatch, UnboundVariable
from .ratfunc import RatFunc

NumC = complex
Scalar = Union[RatFunc, Fraction, NumC]

SYMBOLIC = "symbolic"
NUMERIC = "numeric"
REGIMES = (SYMBOLIC, NUMERIC)


def regime_of(value: Scalar) -> str:
    """Return the regime a value belongs to; exact rationals count as symbolic."""
    if isinstance(value, (complex, float)):
        return NUMERIC
    return SYMBOLIC


def check_finite(value: NumC) -> NumC:
    value = complex(value)
    if not cmath.isfinite(value):
        raise NonFinite(f"non-finite numeric value: {value}")
    return value


def to_numeric(value: Scalar, bindings: Mapping[str, object] = None) -> NumC:
    """
    Convert a scalar to a complex number.

    Args:
        value: The scalar to convert.
        bindings: Values for the indeterminates of a rational function.

    Returns:
        The numeric value.
    """
    if isinstance(value, RatFunc):
        if not value.is_constant() and not bindings:
            raise UnboundVariable(f"{value} needs bindings to become numeric")
        value = value.evaluate(bindings or {})
    return check_finite(complex(value))


def to_exact(value: Scalar) -> Union[RatFunc, Fraction]:
    if isinstance(value, (complex, float)):
        raise RegimeMismatch(f"numeric value {value} has no exact form")
    return value


def is_zero(value: Scalar, tolerance: float = 0.0) -> bool:
    if isinstance(value, (complex, float)):
        return abs(value) <= tolerance
    return not value


def scalars_equal(a: Scalar, b: Scalar, tolerance: float = 1e-9) -> bool:
    """Exact equality for exact scalars, absolute tolerance for numeric ones."""
    numeric = isinstance(a, (complex, float)) or isinstance(b, (complex, float))
    if numeric:
        if isinstance(a, RatFunc) or isinstance(b, RatFunc):
            raise RegimeMismatch("cannot compare a rational function with a numeric value")
        return abs(complex(a) - complex(b)) <= tolerance
    return RatFunc(a) == RatFunc(b) if isinstance(a, RatFunc) or isinstance(b, RatFunc) else a == b


def deviation(a: Scalar, b: Scalar) -> float:
    """Absolute deviation of two scalars; zero or infinity for exact ones."""
    if isinstance(a, (complex, float)) or isinstance(b, (complex, float)):
        return abs(complex(a) - complex(b))
    return 0.0 if scalars_equal(a, b) else float("inf")


def format_scalar(value: Scalar) -> str:
    if isinstance(value, complex):
        return f"{value.real:.12g}{value.imag:+.12g}j"
    return str(value)


def scalar_to_json(value: Scalar):
    """Encode a scalar: rational functions as dicts, rationals as strings, complex as pairs."""
    if isinstance(value, RatFunc):
        return value.to_dict()
    if isinstance(value, (complex, float)):
        value = complex(value)
        return [value.real, value.imag]
    return str(Fraction(value))


def scalar_from_json(data) -> Scalar:
    if isinstance(data, dict):
        f = RatFunc.from_dict(data)
        return f.constant_value() if f.is_constant() else f
    if isinstance(data, list):
        return complex(data[0], data[1])
    return Fraction(data)


def normalize_scalar(value) -> Scalar:
    """Collapse constant rational functions to fractions and floats to complex numbers."""
    if isinstance(value, RatFunc):
        return value.constant_value() if value.is_constant() else value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return complex(value)
    return value
