"""
Coordinates on the Kuznetsov quotient N\\G//N and the K-coset Whittaker basis.

SL2 uses the coordinate zeta with section w diag(zeta, 1/zeta), PGL2 the coordinate xi with
section [[0, -1], [xi, 0]]. Haar measures are pinned once here: N(o) has mass 1, the torus
A(o) has mass 1 - q^-1 and dg(K) = 1.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from ..arith import Scalar, normalize_scalar
from ..fields import PAdicContext
from ..measures import PGL2, SL2


class GroupTag(str, Enum):
    """The two groups of the Kuznetsov side, compared equal to their measure normalization tags."""

    SL2 = SL2
    PGL2 = PGL2

    @classmethod
    def parse(cls, name: str) -> "GroupTag":
        try:
            return cls(name.upper())
        except ValueError:
            raise ValueError(f"unknown group: {name}") from None

    @property
    def coordinate(self) -> str:
        return "zeta" if self is GroupTag.SL2 else "xi"

    @property
    def rho_pairing(self) -> int:
        """<rho, alpha-check>."""
        return 1

    @property
    def delta_power(self) -> int:
        """delta on the coordinate line is |zeta|^2 for SL2 and |xi| for PGL2."""
        return 2 if self is GroupTag.SL2 else 1

    def pushforward_constant(self, ctx: PAdicContext) -> Scalar:
        """(1 - q^-2)^-1, the volume factor of the twisted pushforward."""
        return normalize_scalar(1 / (1 - ctx.q ** (-2)))


@dataclass(frozen=True)
class WhittakerCosetElement:
    """
    The K-invariant Whittaker function supported on N a K, psi-equivariant on the left.

    For SL2 the torus element is diag(p^depth, p^-depth), i.e. the antidominant coweight
    -depth alpha-check, and the value there is q^-depth. For PGL2 it is diag(p^depth, 1)
    with value 1.
    """

    group: GroupTag
    depth: int

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ValueError("the coweight must be antidominant")
        object.__setattr__(self, "group", GroupTag(self.group))

    @property
    def coweight(self) -> int:
        """The multiple of alpha-check (SL2) or of the fundamental coweight (PGL2)."""
        return -self.depth

    def value(self, ctx: PAdicContext) -> Scalar:
        """The value on the torus element: q^<rho, coweight> for SL2, 1 for PGL2."""
        if self.group is GroupTag.SL2:
            return normalize_scalar(ctx.q ** (-self.depth))
        return Fraction(1)
