"""
This module implements multiplicative characters of Q_p^x and their Tate local factors.

A character is stored as an unramified parameter ``z = chi(p)`` together with tame data:
angles on a fixed set of generators of (Z/p^k)^x, valid for every k at once. Odd primes
use a primitive root modulo p^2; the prime 2 uses the pair (-1, 5).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy.ntheory import primitive_root

from ..arith import (
    SYMBOLIC,
    InsufficientPrecision,
    InvalidCharacter,
    PoleHit,
    RatFunc,
    Scalar,
    SymbolicRamified,
    SymbolicRegime,
    Z,
    ZeroDenominator,
    normalize_scalar,
)
from .local import (
    PAdicContext,
    UnitCoset,
    psi_angle,
    residue,
    root_of_unity,
    unit_part,
    valuation,
)

Angles = Tuple[Fraction, ...]


@lru_cache(maxsize=None)
def generators(p: int) -> Tuple[int, ...]:
    """Generators of (Z/p^k)^x for every k."""
    if p == 2:
        return (-1, 5)
    return (primitive_root(p * p),)


def generator_orders(p: int, n: int) -> Tuple[int, ...]:
    """Orders of the generators modulo p^n."""
    if n <= 0:
        return (1, 1) if p == 2 else (1,)
    if p == 2:
        return (2 if n >= 2 else 1, 2 ** (n - 2) if n >= 3 else 1)
    return (p ** (n - 1) * (p - 1),)


@lru_cache(maxsize=None)
def log_table(p: int, n: int) -> Dict[int, Tuple[int, ...]]:
    """Exponent vectors of every unit residue modulo p^n, by enumeration of powers."""
    modulus = p**n
    orders = generator_orders(p, n)
    table: Dict[int, Tuple[int, ...]] = {}
    gens = generators(p)
    for exps in product(*(range(o) for o in orders)):
        r = 1
        for g, e in zip(gens, exps):
            r = r * pow(g % modulus, e, modulus) % modulus
        table.setdefault(r % modulus if modulus > 1 else 0, exps)
    return table


@lru_cache(maxsize=None)
def conductor_of(angles: Angles, p: int, bound: int = 64) -> int:
    for n in range(bound + 1):
        if all((a * o).denominator == 1 for a, o in zip(angles, generator_orders(p, n))):
            return n
    raise InvalidCharacter(f"angles {angles} define no character of finite conductor")


@dataclass(frozen=True)
class MultChar:
    """
    A multiplicative character chi of Q_p^x.

    Attributes:
        p: The prime.
        angles: Tame data, chi(g_i) = exp(2 pi i angles[i]) for the fixed generators g_i.
        z: The unramified parameter chi(p); symbolic, exact or complex.
    """

    p: int
    angles: Angles
    z: Scalar = field(default=Z)

    def __post_init__(self) -> None:
        angles = tuple(Fraction(a) % 1 for a in self.angles)
        if len(angles) != len(generators(self.p)):
            raise InvalidCharacter(f"expected {len(generators(self.p))} angles, got {len(angles)}")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "z", normalize_scalar(self.z))
        if (isinstance(self.z, RatFunc) and not self.z) or (not isinstance(self.z, RatFunc) and self.z == 0):
            raise InvalidCharacter("the unramified parameter must be non-zero")

    @classmethod
    def unramified(cls, p: int, z: Scalar = Z) -> "MultChar":
        return cls(p, (Fraction(0),) * len(generators(p)), z)

    @classmethod
    def trivial(cls, p: int) -> "MultChar":
        return cls.unramified(p, Fraction(1))

    @classmethod
    def with_conductor(cls, p: int, angles: Sequence[Fraction], conductor: int, z: Scalar = Z) -> "MultChar":
        """Build a character and check that its tame data has exactly the given conductor."""
        chi = cls(p, tuple(angles), z)
        if chi.conductor != conductor:
            raise InvalidCharacter(f"tame data has conductor {chi.conductor}, not {conductor}")
        return chi

    @classmethod
    def quadratic(cls, p: int, z: Scalar = Z) -> "MultChar":
        """The character whose tame part is the Legendre symbol (odd p)."""
        if p == 2:
            return cls(p, (Fraction(1, 2), Fraction(0)), z)
        return cls(p, (Fraction(1, 2),), z)

    @property
    def conductor(self) -> int:
        return conductor_of(self.angles, self.p)

    @property
    def ramified(self) -> bool:
        return self.conductor > 0

    @property
    def tame_key(self) -> Angles:
        """Identifies the connected component of the character group."""
        return self.angles

    def with_param(self, z: Scalar) -> "MultChar":
        return MultChar(self.p, self.angles, z)

    def inverse(self) -> "MultChar":
        return MultChar(self.p, tuple(-a for a in self.angles), 1 / self.z)

    def __mul__(self, other: "MultChar") -> "MultChar":
        if other.p != self.p:
            raise ValueError("characters of different fields")
        return MultChar(self.p, tuple(a + b for a, b in zip(self.angles, other.angles)), self.z * other.z)

    def shift(self, u: Scalar) -> "MultChar":
        """chi |.|^s, where u = q^-s."""
        return MultChar(self.p, self.angles, self.z * u)

    def tame_angle(self, unit: Union[int, Fraction]) -> Fraction:
        """The angle of chi at a unit, read off modulo p^conductor."""
        n = self.conductor
        if n == 0:
            return Fraction(0)
        r = residue(unit, self.p, n)
        exps = log_table(self.p, n)[r]
        return sum((a * e for a, e in zip(self.angles, exps)), Fraction(0)) % 1

    def tame_value(self, unit: Union[int, Fraction], regime: str = SYMBOLIC) -> Scalar:
        return root_of_unity(self.tame_angle(unit), regime)

    def to_dict(self) -> dict:
        z = self.z.to_dict() if isinstance(self.z, RatFunc) else (
            [self.z.real, self.z.imag] if isinstance(self.z, complex) else str(self.z)
        )
        return {"n": self.conductor, "tame": [str(a) for a in self.angles], "z": z}

    @classmethod
    def from_dict(cls, data: dict, p: int) -> "MultChar":
        raw = data.get("z")
        if isinstance(raw, dict):
            z: Scalar = RatFunc.from_dict(raw)
        elif isinstance(raw, list):
            z = complex(raw[0], raw[1])
        elif raw is None:
            z = Z
        else:
            z = Fraction(raw)
        chi = cls(p, tuple(Fraction(a) for a in data["tame"]), z)
        if "n" in data and chi.conductor != int(data["n"]):
            raise InvalidCharacter(f"declared conductor {data['n']} differs from {chi.conductor}")
        return chi


def char_power(chi: MultChar, k: int) -> MultChar:
    """The composite of chi with the k-th power map."""
    return MultChar(chi.p, tuple(a * k for a in chi.angles), chi.z**k)


def all_characters(p: int, max_conductor: int, z: Scalar = Z) -> List[MultChar]:
    """Every tame type of conductor at most ``max_conductor``, sharing the parameter z."""
    orders = generator_orders(p, max_conductor)
    chars = []
    for exps in product(*(range(o) for o in orders)):
        angles = tuple(Fraction(e, o) for e, o in zip(exps, orders))
        chars.append(MultChar(p, angles, z))
    return chars


def char_eval(chi: MultChar, x: Union[int, Fraction, UnitCoset], ctx: PAdicContext) -> Scalar:
    """
    Evaluate chi at a non-zero rational or on a unit coset.

    Raises:
        InsufficientPrecision: If a coset is coarser than the conductor of chi.
    """
    if isinstance(x, UnitCoset):
        if x.level < chi.conductor:
            raise InsufficientPrecision(f"coset level {x.level} below conductor {chi.conductor}")
        v, unit = x.valuation, x.unit_residue
    else:
        v, unit = valuation(x, chi.p), unit_part(x, chi.p)
    return chi.z**v * chi.tame_value(unit, ctx.regime)


def l_factor(chi: MultChar, u: Scalar) -> Scalar:
    """L(chi, s) with u = q^-s: 1/(1 - z u) when unramified, 1 otherwise."""
    if chi.ramified:
        return Fraction(1)
    return 1 / (1 - chi.z * u)


@lru_cache(maxsize=4096)
def gauss_sum(chi: MultChar, ctx: PAdicContext, twist: Union[int, Fraction] = 1, psi_sign: int = 1) -> complex:
    """
    The finite Gauss sum over (Z/p^n)^x of chi(v) psi(sign * v * twist / p^n), n the conductor.
    """
    if ctx.symbolic:
        raise SymbolicRegime("Gauss sums are numeric")
    n = chi.conductor
    if n == 0:
        raise InvalidCharacter("Gauss sums need a ramified character")
    ctx.check_level(n)
    table = log_table(chi.p, n)
    modulus = chi.p**n
    residues = np.fromiter(table.keys(), dtype=np.int64)
    exps = np.array(list(table.values()), dtype=np.int64)
    denominators = [a.denominator for a in chi.angles]
    common = int(np.lcm.reduce(denominators + [modulus * Fraction(twist).denominator]))
    char_phase = sum(
        exps[:, i] * (a.numerator * (common // a.denominator)) for i, a in enumerate(chi.angles)
    )
    psi_phase = np.array(
        [int(psi_angle(Fraction(int(r) * psi_sign) * twist / modulus, chi.p) * common) for r in residues],
        dtype=np.int64,
    )
    phases = (char_phase + psi_phase) % common
    return complex(np.exp(2j * np.pi * phases / common).sum())


@dataclass(frozen=True)
class GammaFactor:
    """
    The Tate gamma factor with its decomposition value = eps * l_num / l_den.
    """

    value: Scalar
    l_num: Scalar
    l_den: Scalar
    eps: Scalar


def gamma_factor(
    chi: MultChar,
    u: Scalar,
    ctx: PAdicContext,
    psi_sign: int = 1,
    q: Optional[Scalar] = None,
) -> GammaFactor:
    """
    Return gamma(chi, s, psi^sign) with u = q^-s.

    Args:
        chi: The character.
        u: The value of q^-s.
        ctx: The working context.
        psi_sign: -1 selects the additive character x -> psi(-x).
        q: Overrides the residue cardinality; the torus formulas pass w^-2.

    Raises:
        SymbolicRamified: If chi is ramified in the symbolic regime.
    """
    q = ctx.q if q is None else q
    n = chi.conductor
    if n == 0:
        try:
            l_den = 1 / (1 - chi.z * u)
        except (ZeroDivisionError, ZeroDenominator):
            raise PoleHit(f"L(chi, s) has a pole at u={u}") from None
        l_num = 1 / (1 - 1 / (chi.z * q * u))
        eps = Fraction(1)
        return GammaFactor((1 - chi.z * u) * l_num, l_num, l_den, eps)
    if ctx.symbolic:
        raise SymbolicRamified(f"conductor {n} character in the symbolic regime")
    eps = (complex(chi.z) * complex(u)) ** n * gauss_sum(chi.inverse(), ctx, 1, psi_sign)
    return GammaFactor(eps, Fraction(1), Fraction(1), eps)
