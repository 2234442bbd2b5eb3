"""
This module provides exact multivariate rational functions over the rationals.

The indeterminates are fixed: ``q`` is the residue cardinality, ``z`` the value of a
character at the uniformizer, ``u`` stands for ``q^{-s}`` and ``w`` for a second exponent
or character variable. Arithmetic is delegated to the sympy rational function field, the
wrapper only adds canonical forms, evaluation and Laurent expansion.
"""

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

from sympy import QQ
from sympy.polys.fields import FracElement, field
from sympy.polys.orderings import grlex

from .errors import (
    NonFinite,
    PoleHit,
    RegimeMismatch,
    UnboundVariable,
    ZeroDenominator,
)

VARIABLES = ("q", "z", "u", "w")

_FIELD, _Q, _Z, _U, _W = field(",".join(VARIABLES), QQ, grlex)
_RING = _FIELD.ring
_GENS = dict(zip(VARIABLES, (_Q, _Z, _U, _W)))

Monom = Tuple[int, ...]
Exact = Union[int, Fraction]


def _to_qq(value: Exact):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _from_qq(coeff) -> Fraction:
    return Fraction(int(coeff.numerator), int(coeff.denominator))


def _poly_from_terms(terms: Mapping[Monom, Fraction]):
    return _RING.from_dict({m: _to_qq(c) for m, c in terms.items() if c})


class RatFunc:
    """
    An immutable rational function in the indeterminates ``q, z, u, w``.

    Values are kept in lowest terms; equality is decided by exact subtraction.
    Integers and fractions are coerced, complex numbers are rejected so that the
    symbolic and numeric regimes never mix silently.
    """

    __slots__ = ("_f", "_hash")

    def __init__(self, value: Union["RatFunc", Exact, FracElement] = 0) -> None:
        if isinstance(value, RatFunc):
            f = value._f
        elif isinstance(value, FracElement):
            f = value
        elif isinstance(value, (int, Fraction)):
            f = _FIELD.ground_new(_to_qq(value))
        else:
            raise RegimeMismatch(f"cannot build a rational function from {value!r}")
        self._f = f
        self._hash = None

    @classmethod
    def var(cls, name: str) -> "RatFunc":
        """Return the indeterminate called ``name``."""
        try:
            return cls(_GENS[name])
        except KeyError:
            raise UnboundVariable(f"unknown indeterminate: {name}") from None

    @classmethod
    def from_terms(
        cls, numerator: Mapping[Monom, Exact], denominator: Optional[Mapping[Monom, Exact]] = None
    ) -> "RatFunc":
        """Build a rational function from exponent-vector dictionaries."""
        num = _poly_from_terms({m: Fraction(c) for m, c in numerator.items()})
        den = _poly_from_terms({m: Fraction(c) for m, c in (denominator or {(0,) * len(VARIABLES): 1}).items()})
        if not den:
            raise ZeroDenominator("denominator is zero")
        return cls(_FIELD.new(num, den))

    @classmethod
    def from_laurent(cls, var: str, coefficients: Mapping[int, Union["RatFunc", Exact]]) -> "RatFunc":
        """Build ``sum c_k var^k`` from a sparse coefficient map."""
        x = cls.var(var)
        total = cls(0)
        for exponent, coeff in coefficients.items():
            total = total + RatFunc(coeff) * x**exponent
        return total

    # arithmetic

    def _coerce(self, other) -> Optional[FracElement]:
        if isinstance(other, RatFunc):
            return other._f
        if isinstance(other, (int, Fraction)):
            return _FIELD.ground_new(_to_qq(other))
        if isinstance(other, (float, complex)):
            raise RegimeMismatch("symbolic value combined with a numeric one")
        return None

    def __add__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return NotImplemented if o is None else RatFunc(self._f + o)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return NotImplemented if o is None else RatFunc(self._f - o)

    def __rsub__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return NotImplemented if o is None else RatFunc(o - self._f)

    def __mul__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return NotImplemented if o is None else RatFunc(self._f * o)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDenominator("division by the zero rational function")
        return RatFunc(self._f / o)

    def __rtruediv__(self, other) -> "RatFunc":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self._f:
            raise ZeroDenominator("division by the zero rational function")
        return RatFunc(o / self._f)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self._f)

    def __pos__(self) -> "RatFunc":
        return self

    def __pow__(self, exponent: int) -> "RatFunc":
        if exponent < 0 and not self._f:
            raise ZeroDenominator("negative power of zero")
        return RatFunc(self._f**exponent)

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except RegimeMismatch:
            return False
        if o is None:
            return NotImplemented
        return not (self._f - o)

    def __hash__(self) -> int:
        if self._hash is None:
            num, den = self.canonical_terms()
            self._hash = hash((tuple(sorted(num.items())), tuple(sorted(den.items()))))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._f)

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        return str(self._f.as_expr())

    # structure

    @property
    def numer(self):
        return self._f.numer

    @property
    def denom(self):
        return self._f.denom

    def canonical_terms(self) -> Tuple[Dict[Monom, Fraction], Dict[Monom, Fraction]]:
        """
        Return numerator and denominator term maps with a monic denominator.

        The leading coefficient is taken in graded lexicographic order, so the pair is a
        canonical representative of the function.
        """
        lc = _from_qq(self._f.denom.LC)
        num = {m: _from_qq(c) / lc for m, c in self._f.numer.terms()}
        den = {m: _from_qq(c) / lc for m, c in self._f.denom.terms()}
        return num, den

    def variables(self) -> Tuple[str, ...]:
        """Indeterminates that actually occur."""
        used = set()
        for poly in (self._f.numer, self._f.denom):
            for monom in poly.monoms():
                used.update(name for name, e in zip(VARIABLES, monom) if e)
        return tuple(name for name in VARIABLES if name in used)

    def is_constant(self) -> bool:
        return not self.variables()

    def constant_value(self) -> Fraction:
        """Return the value of a constant function."""
        if not self.is_constant():
            raise UnboundVariable(f"{self} is not constant")
        if not self._f.numer:
            return Fraction(0)
        return _from_qq(self._f.numer.LC) / _from_qq(self._f.denom.LC)

    def diff(self, var: str) -> "RatFunc":
        return RatFunc(self._f.diff(_GENS[var]))

    def split(self, var: str) -> Tuple[Dict[int, "RatFunc"], Dict[int, "RatFunc"]]:
        """Numerator and denominator as polynomials in ``var`` with coefficients free of it."""
        index = VARIABLES.index(var)

        def _split(poly) -> Dict[int, RatFunc]:
            buckets: Dict[int, Dict[Monom, Fraction]] = {}
            for monom, coeff in poly.terms():
                rest = tuple(0 if i == index else e for i, e in enumerate(monom))
                buckets.setdefault(monom[index], {})[rest] = _from_qq(coeff)
            return {k: RatFunc(_FIELD.new(_poly_from_terms(v))) for k, v in buckets.items()}

        return _split(self._f.numer), _split(self._f.denom)

    def factor_denominator(self) -> List[Tuple["RatFunc", int]]:
        """Irreducible factors of the denominator over the rationals, with multiplicities."""
        _, factors = self._f.denom.factor_list()
        return [(RatFunc(_FIELD.new(poly)), k) for poly, k in factors]

    def as_laurent(self, var: str) -> Dict[int, "RatFunc"]:
        """
        Coefficients of a Laurent polynomial in ``var``.

        Raises:
            ValueError: If the denominator is not a monomial in ``var`` times a factor free of it.
        """
        num, den = self.split(var)
        if len(den) != 1:
            raise ValueError(f"{self} is not a Laurent polynomial in {var}")
        (shift, d0), = den.items()
        return {k - shift: c / d0 for k, c in num.items() if c}

    # evaluation

    def evaluate(self, bindings: Mapping[str, object]):
        """
        Evaluate at the given bindings.

        Bindings may be integers, fractions, complex numbers or rational functions.
        Every indeterminate that occurs must be bound.

        Returns:
            A ``Fraction`` when all bindings are exact, a ``complex`` for numeric bindings and a
            ``RatFunc`` when bindings are rational functions.
        """
        missing = [name for name in self.variables() if name not in bindings]
        if missing:
            raise UnboundVariable(f"unbound indeterminates: {', '.join(missing)}")
        values = [bindings.get(name, 0) for name in VARIABLES]
        num = _evaluate_poly(self._f.numer, values)
        den = _evaluate_poly(self._f.denom, values)
        if (den == 0) if not isinstance(den, RatFunc) else not den:
            raise PoleHit(f"{self} has a pole at {dict(bindings)}")
        result = num / den
        if isinstance(result, (complex, float)):
            result = complex(result)
            if not cmath.isfinite(result):
                raise NonFinite(f"non-finite value of {self}")
        return result

    def subs(self, **bindings) -> "RatFunc":
        """Substitute some indeterminates, leaving the others symbolic."""
        full = {name: RatFunc.var(name) for name in VARIABLES}
        full.update({k: RatFunc(v) for k, v in bindings.items()})
        return RatFunc(self.evaluate(full))

    def shell_expand(self, var: str, direction: str, count: int) -> "ShellExpansion":
        """Leading Laurent coefficients in ``var`` around zero or infinity."""
        if direction == "at-infinity":
            x = RatFunc.var(var)
            inner = self.subs(**{var: 1 / x}).shell_expand(var, "at-zero", count)
            return ShellExpansion(var, direction, -inner.leading, inner.coefficients)
        if direction != "at-zero":
            raise ValueError(f"unknown direction: {direction}")
        if not self._f:
            return ShellExpansion(var, direction, 0, [RatFunc(0)] * count)
        num, den = self.split(var)
        a, b = min(den), min(num)
        dd = [den.get(a + j, RatFunc(0)) for j in range(count)]
        nn = [num.get(b + j, RatFunc(0)) for j in range(count)]
        coefficients: List[RatFunc] = []
        for k in range(count):
            acc = nn[k]
            for j in range(1, k + 1):
                if dd[j]:
                    acc = acc - dd[j] * coefficients[k - j]
            coefficients.append(acc / dd[0])
        return ShellExpansion(var, direction, b - a, coefficients)

    # serialization

    def to_dict(self) -> dict:
        num, den = self.canonical_terms()

        def _rows(terms):
            return [[str(c), list(m)] for m, c in sorted(terms.items())]

        return {"num": _rows(num), "den": _rows(den), "vars": list(VARIABLES)}

    @classmethod
    def from_dict(cls, data: dict) -> "RatFunc":
        names = data.get("vars", list(VARIABLES))

        def _terms(rows):
            terms = {}
            for coeff, exps in rows:
                monom = [0] * len(VARIABLES)
                for name, e in zip(names, exps):
                    monom[VARIABLES.index(name)] = e
                terms[tuple(monom)] = Fraction(coeff)
            return terms

        return cls.from_terms(_terms(data["num"]), _terms(data["den"]))


def _evaluate_poly(poly, values):
    total = 0
    for monom, coeff in poly.terms():
        term = _from_qq(coeff)
        for value, e in zip(values, monom):
            if e:
                term = term * value**e
        total = total + term
    return total


@dataclass(frozen=True)
class ShellExpansion:
    """
    Leading Laurent coefficients of a rational function in one indeterminate.

    ``coefficients[i]`` is attached to ``var^(leading + i)`` at zero and to
    ``var^(leading - i)`` at infinity.
    """

    var: str
    direction: str
    leading: int
    coefficients: List[RatFunc]

    def exponent(self, i: int) -> int:
        return self.leading + i if self.direction == "at-zero" else self.leading - i

    def terms(self) -> Iterator[Tuple[int, RatFunc]]:
        for i, c in enumerate(self.coefficients):
            yield self.exponent(i), c

    def coefficient(self, exponent: int) -> RatFunc:
        i = exponent - self.leading if self.direction == "at-zero" else self.leading - exponent
        if i < 0:
            return RatFunc(0)
        if i >= len(self.coefficients):
            raise IndexError(f"exponent {exponent} beyond the expansion")
        return self.coefficients[i]

    def resum(self) -> RatFunc:
        x = RatFunc.var(self.var)
        return sum((c * x**e for e, c in self.terms()), RatFunc(0))


Q = RatFunc.var("q")
Z = RatFunc.var("z")
U = RatFunc.var("u")
W = RatFunc.var("w")
ONE = RatFunc(1)
ZERO = RatFunc(0)


def rf_normalize(f: RatFunc) -> RatFunc:
    """Return the canonical representative (a rational function with monic denominator)."""
    num, den = f.canonical_terms()
    return RatFunc.from_terms(num, den)


def rf_evaluate(f: RatFunc, bindings: Mapping[str, object]):
    return f.evaluate(bindings)


def rf_shell_expand(f: RatFunc, var: str, direction: str, count: int) -> List[RatFunc]:
    return f.shell_expand(var, direction, count).coefficients
