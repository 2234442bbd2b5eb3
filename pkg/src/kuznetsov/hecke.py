"""
The unramified Hecke algebra through its Satake transform.

A Hecke element is stored as its Satake transform, a Laurent polynomial in z symmetric
under z -> 1/z (with coefficients in q). For SL2 the dual group is PGL2, whose irreducible
characters are chi_m = z^-m + ... + z^m; the double coset of depth M has transform
q^M (chi_M - q^-1 chi_(M-1)).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict

from ..arith import ONE, OutsideHeckeFamily, Q, RatFunc, Z, ZERO
from .groups import GroupTag

logger = logging.getLogger(__name__)


def dual_character(m: int) -> RatFunc:
    """z^-m + ... + z^m; zero for negative m."""
    return sum((Z**i for i in range(-m, m + 1)), RatFunc(0))


def sym_power_adjoint(n: int) -> RatFunc:
    """The character of Sym^n of the adjoint representation, whose weights are z, 1, 1/z."""
    total = RatFunc(0)
    for a in range(n + 1):
        for b in range(n + 1 - a):
            total = total + Z ** (a - (n - a - b))
    return total


def adjoint_l_series(u) -> RatFunc:
    """L(Ad, s)(z) = sum_n u^n Sym^n Ad(z) = 1/((1 - u z)(1 - u)(1 - u/z))."""
    return 1 / ((1 - u * Z) * (1 - u) * (1 - u / Z))


def satake_adapter(satake: RatFunc) -> RatFunc:
    """
    The one place where the Satake convention meets the Kuznetsov side: h-check(z) is read
    at z^-1. Every transform in the family is symmetric, so this is the identity on it.
    """
    return satake.subs(z=1 / Z)


@dataclass(frozen=True)
class HeckeElement:
    """
    An element of the unramified Hecke algebra of G.

    Attributes:
        group: The group.
        satake: The Satake transform h-check as a Laurent polynomial in z.
    """

    group: GroupTag
    satake: RatFunc = field(default=ONE)

    def __post_init__(self) -> None:
        object.__setattr__(self, "group", GroupTag(self.group))
        object.__setattr__(self, "satake", RatFunc(self.satake))
        try:
            self.satake.as_laurent("z")
        except ValueError:
            raise OutsideHeckeFamily(f"{self.satake} is not a Laurent polynomial in z") from None
        if self.satake.subs(z=1 / Z) != self.satake:
            raise OutsideHeckeFamily(f"{self.satake} is not symmetric under z -> 1/z")
        if self.group is GroupTag.PGL2 and not self.satake.is_constant():
            raise OutsideHeckeFamily("only the identity of the PGL2 Hecke algebra is modelled")

    @classmethod
    def identity(cls, group: GroupTag = GroupTag.SL2) -> "HeckeElement":
        return cls(group, ONE)

    @classmethod
    def zero(cls, group: GroupTag = GroupTag.SL2) -> "HeckeElement":
        return cls(group, ZERO)

    @classmethod
    def double_coset(cls, depth: int, group: GroupTag = GroupTag.SL2) -> "HeckeElement":
        """The indicator of K diag(p^-depth, p^depth) K, dg(K) = 1."""
        if depth < 0:
            raise ValueError("the depth must be non-negative")
        if GroupTag(group) is GroupTag.PGL2 and depth:
            raise OutsideHeckeFamily("only the identity of the PGL2 Hecke algebra is modelled")
        satake = Q**depth * (dual_character(depth) - dual_character(depth - 1) / Q)
        return cls(group, satake)

    @classmethod
    def sym_ad(cls, n: int) -> "HeckeElement":
        """h_{Sym^n Ad}, the element with Satake transform the character of Sym^n Ad."""
        if n < 0:
            raise ValueError("n must be non-negative")
        return cls(GroupTag.SL2, sym_power_adjoint(n))

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        self._check_group(other)
        return HeckeElement(self.group, self.satake + other.satake)

    def __mul__(self, other: "HeckeElement") -> "HeckeElement":
        return self.product(other)

    def scale(self, c) -> "HeckeElement":
        return HeckeElement(self.group, self.satake * c)

    def product(self, other: "HeckeElement") -> "HeckeElement":
        """Convolution, i.e. the product of the Satake transforms."""
        self._check_group(other)
        return HeckeElement(self.group, self.satake * other.satake)

    def _check_group(self, other: "HeckeElement") -> None:
        if self.group is not other.group:
            raise ValueError("Hecke elements of different groups")

    def is_zero(self) -> bool:
        return not self.satake

    def degree(self) -> int:
        """The largest power of z in the transform."""
        if self.is_zero():
            return 0
        return max(self.satake.as_laurent("z"))

    def coset_coefficients(self) -> Dict[int, RatFunc]:
        """
        Coordinates in the basis chi_m of dual characters; these are the Whittaker coefficients
        of h * e_0 in the K-coset basis.
        """
        if self.is_zero():
            return {}
        laurent = (self.satake * (1 - Z)).as_laurent("z")
        return {-e: c for e, c in laurent.items() if e <= 0 and c}

    def evaluate(self, **bindings):
        return self.satake.evaluate(bindings)

    def to_dict(self) -> dict:
        return {"group": self.group.value, "satake": self.satake.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "HeckeElement":
        return cls(GroupTag(data["group"]), RatFunc.from_dict(data["satake"]))


def satake(h: HeckeElement) -> RatFunc:
    return h.satake


def satake_at(h: HeckeElement, p: int) -> RatFunc:
    """The transform with q specialized to p."""
    return h.satake.subs(q=Fraction(p))
