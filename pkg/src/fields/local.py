"""
This module models the local field F = Q_p: valuations, balls, unit cosets, the standard
additive character psi of conductor o and the self-dual measures.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Union

from sympy import isprime

from ..arith import (
    NUMERIC,
    REGIMES,
    SYMBOLIC,
    InsufficientPrecision,
    Q,
    RatFunc,
    Scalar,
    SymbolicRegime,
    SymbolicRootOfUnity,
    ZeroInput,
)

Rat = Union[int, Fraction]


@dataclass(frozen=True)
class PAdicContext:
    """
    Working context: the prime, the maximal coset precision and the scalar regime.

    Attributes:
        p: The prime; the residue cardinality q equals p.
        k_max: Maximal level of cosets any operation may create.
        regime: ``symbolic`` keeps q as an indeterminate, ``numeric`` uses complex values.
    """

    p: int
    k_max: int = 6
    regime: str = SYMBOLIC

    def __post_init__(self) -> None:
        if not isprime(self.p):
            raise ValueError(f"not a prime: {self.p}")
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime: {self.regime}")
        if self.k_max < 1:
            raise ValueError("k_max must be positive")

    @property
    def symbolic(self) -> bool:
        return self.regime == SYMBOLIC

    @property
    def q(self) -> Union[RatFunc, Fraction]:
        """The residue cardinality: the indeterminate q or the number p."""
        return Q if self.symbolic else Fraction(self.p)

    def specialize(self, value: Scalar) -> Scalar:
        """Substitute q = p into a symbolic value."""
        if isinstance(value, RatFunc):
            out = value.subs(q=self.p)
            return out.constant_value() if out.is_constant() else out
        return value

    def with_regime(self, regime: str) -> "PAdicContext":
        return PAdicContext(self.p, self.k_max, regime)

    def check_level(self, level: int) -> None:
        if abs(level) > self.k_max:
            raise InsufficientPrecision(f"level {level} exceeds k_max={self.k_max}")


def valuation(x: Rat, p: int) -> int:
    """
    Return the p-adic valuation of a non-zero rational.

    Raises:
        ZeroInput: If x is zero.
    """
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(x: Rat, p: int) -> Fraction:
    """Return x / p^v(x)."""
    x = Fraction(x)
    return x / Fraction(p) ** valuation(x, p)


def residue(x: Rat, p: int, n: int) -> int:
    """Reduce a p-integral rational modulo p^n."""
    x = Fraction(x)
    modulus = p**n
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not p-integral")
    return x.numerator * pow(x.denominator, -1, modulus) % modulus if n > 0 else 0


def fractional_part(x: Rat, p: int) -> Fraction:
    """
    The p-adic fractional part: the unique a/p^m in [0, 1) with x - a/p^m p-integral.
    """
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    e = max(0, -valuation(x, p))
    if e == 0:
        return Fraction(0)
    a = x * p**e
    return Fraction(residue(a, p, e), p**e)


def root_of_unity(angle: Fraction, regime: str = NUMERIC) -> Scalar:
    """
    Return exp(2 pi i angle).

    The symbolic regime only admits the real values 1 and -1.
    """
    angle = Fraction(angle) % 1
    if regime == SYMBOLIC:
        if angle == 0:
            return Fraction(1)
        if angle == Fraction(1, 2):
            return Fraction(-1)
        raise SymbolicRootOfUnity(f"exp(2 pi i * {angle}) is not rational")
    if angle == 0:
        return complex(1.0)
    if angle == Fraction(1, 2):
        return complex(-1.0)
    return cmath.exp(2j * math.pi * float(angle))


def psi_angle(x: Rat, p: int, sign: int = 1) -> Fraction:
    return fractional_part(sign * Fraction(x), p)


def psi_eval(x: Rat, ctx: PAdicContext, sign: int = 1) -> Scalar:
    """Evaluate psi(sign * x) = exp(2 pi i {sign * x}_p)."""
    return root_of_unity(psi_angle(x, ctx.p, sign), ctx.regime)


@dataclass(frozen=True, order=True)
class Ball:
    """
    The ball ``center + p^level Z_p``, with the center reduced to its canonical representative.
    """

    p: int
    center: Fraction
    level: int

    @classmethod
    def make(cls, center: Rat, level: int, p: int) -> "Ball":
        return cls(p, canonical_center(center, level, p), level)

    def contains(self, x: Rat) -> bool:
        d = Fraction(x) - self.center
        return d == 0 or valuation(d, self.p) >= self.level

    def contains_ball(self, other: "Ball") -> bool:
        return other.level >= self.level and self.contains(other.center)

    def children(self) -> List["Ball"]:
        step = Fraction(self.p) ** self.level
        return [Ball.make(self.center + j * step, self.level + 1, self.p) for j in range(self.p)]

    def refine(self, level: int) -> List["Ball"]:
        """All sub-balls at a finer level."""
        if level < self.level:
            raise ValueError("refinement must not coarsen")
        step = Fraction(self.p) ** self.level
        count = self.p ** (level - self.level)
        return [Ball.make(self.center + j * step, level, self.p) for j in range(count)]

    def to_dict(self) -> dict:
        return {"c": str(self.center), "n": self.level}

    @classmethod
    def from_dict(cls, data: dict, p: int) -> "Ball":
        return cls.make(Fraction(data["c"]), int(data["n"]), p)


def canonical_center(x: Rat, n: int, p: int) -> Fraction:
    """Canonical representative of x modulo p^n."""
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    e = max(0, -valuation(x, p))
    if n + e <= 0:
        return Fraction(0)
    a = x * p**e
    return Fraction(residue(a, p, n + e), p**e)


@lru_cache(maxsize=None)
def unit_residues(p: int, n: int) -> tuple:
    """Representatives of (Z/p^n)^x in increasing order."""
    if n == 0:
        return (1,)
    return tuple(r for r in range(1, p**n) if r % p)


@dataclass(frozen=True, order=True)
class UnitCoset:
    """
    The coset ``p^valuation * unit_residue * (1 + p^level Z_p)`` of F^x.

    Level 0 denotes the full shell ``p^valuation Z_p^x``.
    """

    p: int
    valuation: int
    unit_residue: int
    level: int

    @classmethod
    def make(cls, valuation_: int, unit: Rat, level: int, p: int) -> "UnitCoset":
        if level < 0:
            raise ValueError("level must be non-negative")
        if level == 0:
            return cls(p, valuation_, 1, 0)
        r = residue(unit, p, level)
        if r % p == 0:
            raise ValueError(f"{unit} is not a unit")
        return cls(p, valuation_, r, level)

    @classmethod
    def containing(cls, x: Rat, level: int, p: int) -> "UnitCoset":
        v = valuation(x, p)
        return cls.make(v, unit_part(x, p), level, p)

    @classmethod
    def shell(cls, valuation_: int, p: int) -> "UnitCoset":
        return cls(p, valuation_, 1, 0)

    def representative(self) -> Fraction:
        return Fraction(self.p) ** self.valuation * self.unit_residue

    def contains(self, x: Rat) -> bool:
        x = Fraction(x)
        if x == 0 or valuation(x, self.p) != self.valuation:
            return False
        if self.level == 0:
            return True
        return residue(unit_part(x, self.p), self.p, self.level) == self.unit_residue

    def as_ball(self) -> Ball:
        if self.level == 0:
            raise ValueError("a full shell is not a ball")
        return Ball.make(self.representative(), self.valuation + self.level, self.p)

    def children(self) -> List["UnitCoset"]:
        if self.level == 0:
            return [UnitCoset(self.p, self.valuation, r, 1) for r in unit_residues(self.p, 1)]
        step = self.p**self.level
        return [
            UnitCoset(self.p, self.valuation, self.unit_residue + j * step, self.level + 1)
            for j in range(self.p)
        ]

    def refine(self, level: int) -> List["UnitCoset"]:
        if level < self.level:
            raise ValueError("refinement must not coarsen")
        if level == self.level:
            return [self]
        return [c for child in self.children() for c in child.refine(level)]

    def inverse(self) -> "UnitCoset":
        if self.level == 0:
            return UnitCoset(self.p, -self.valuation, 1, 0)
        inv = pow(self.unit_residue, -1, self.p**self.level)
        return UnitCoset(self.p, -self.valuation, inv, self.level)

    def translate(self, x: Rat) -> "UnitCoset":
        """The coset x * self, for a non-zero rational x."""
        x = Fraction(x)
        v = valuation(x, self.p)
        if self.level == 0:
            return UnitCoset(self.p, self.valuation + v, 1, 0)
        u = residue(unit_part(x, self.p), self.p, self.level)
        return UnitCoset(self.p, self.valuation + v, u * self.unit_residue % self.p**self.level, self.level)

    def to_dict(self) -> dict:
        return {"v": self.valuation, "u": self.unit_residue, "n": self.level}

    @classmethod
    def from_dict(cls, data: dict, p: int) -> "UnitCoset":
        return cls.make(int(data["v"]), int(data["u"]), int(data["n"]), p)


def ball_volume(ball: Ball, ctx: PAdicContext) -> Scalar:
    """dx-volume of a ball: q^(-level)."""
    return ctx.q ** (-ball.level)


def unitcoset_volume(coset: UnitCoset, ctx: PAdicContext) -> Scalar:
    """d^x x-volume of a unit coset: q^(-level), or 1 - q^(-1) for a full shell."""
    if coset.level == 0:
        return 1 - 1 / ctx.q
    return ctx.q ** (-coset.level)


def avg_volume(ctx: PAdicContext) -> complex:
    """The average volume (1 - q^-1) / log q of F^x."""
    if ctx.symbolic:
        raise SymbolicRegime("the average volume involves log q")
    return complex((1 - 1 / ctx.p) / math.log(ctx.p))


def iter_shell_cosets(valuation_: int, level: int, p: int) -> Iterator[UnitCoset]:
    for r in unit_residues(p, level):
        yield UnitCoset(p, valuation_, r, level)
