"""
The germ at zero of the depth-zero pushforward, carried by Kloosterman sums.

SL2: on the shell v >= 1, with zeta = p^v t, the pushforward of the basic Whittaker
function has density coeff * q^-2v * Kl(-1/t, -1/t; p^v) against d^x zeta.
PGL2: on the shell 2k, with xi = p^2k t, the density is coeff * q^-2k * Kl(-1, -1/t; p^k);
odd shells carry nothing.

Shell masses are exact: summing over t first turns the Kloosterman sums into Ramanujan
sums, which leaves a count of the roots of u^2 + 1 (SL2) or a single term (PGL2).
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from ..arith import (
    OracleRequired,
    Scalar,
    SymbolicRegime,
    normalize_scalar,
    scalar_from_json,
    scalar_to_json,
)
from ..fields import PAdicContext, UnitCoset
from ..measures import ZeroGerm
from ..oracle import kloosterman_sum, quadratic_root_count
from ..tools.cache import default_cache
from .groups import GroupTag

logger = logging.getLogger(__name__)

# shells kept when a germ is realized on cosets
DEFAULT_DEPTH = 4


def _root_density(p: int, m: int, ctx: PAdicContext) -> Scalar:
    """Measure of {u in o : u^2 + 1 = 0 mod p^m}; the full 1 - 1/q of units for m = 0."""
    if m == 0:
        return 1 - 1 / ctx.q
    return Fraction(quadratic_root_count(1, 0, 1, p, m), p**m)


@dataclass(frozen=True)
class KloostermanGerm(ZeroGerm):
    """
    The depth-zero pushforward on the shells below the unit shell.

    Attributes:
        prime: The prime.
        group: SL2 or PGL2.
        coeff: The constant in front, (1 - q^-2)^-1 times the Whittaker coefficient.
        factor: Unramified twist, the density on shell v is multiplied by factor^v.
        depth: Shells realized on cosets: 1..depth for SL2, 2..2 depth for PGL2.
        oracle: Whether coset values may be enumerated.
    """

    prime: int
    group: GroupTag
    coeff: Scalar
    factor: Scalar = field(default=Fraction(1))
    depth: int = DEFAULT_DEPTH
    oracle: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "group", GroupTag(self.group))
        object.__setattr__(self, "coeff", normalize_scalar(self.coeff))
        object.__setattr__(self, "factor", normalize_scalar(self.factor))

    @property
    def p(self) -> int:
        return self.prime

    def shells(self) -> range:
        if self.group is GroupTag.SL2:
            return range(1, self.depth + 1)
        return range(2, 2 * self.depth + 1)

    def resolution(self, v: int) -> int:
        return v if self.group is GroupTag.SL2 else max(1, v // 2)

    def shell_mass(self, v: int, ctx: PAdicContext) -> Scalar:
        """Exact mass of a shell, at every v >= 1."""
        q = ctx.q
        if v < 1:
            return Fraction(0)
        if self.group is GroupTag.SL2:
            base = q ** (-v) * (_root_density(self.p, v, ctx) - _root_density(self.p, v - 1, ctx) / q)
        else:
            base = q ** (-3) if v == 2 else Fraction(0)
        return normalize_scalar(self.coeff * self.factor**v * base)

    def _kloosterman(self, v: int, t: int) -> float:
        if self.group is GroupTag.SL2:
            a = b = -Fraction(1, t)
            k = v
        else:
            a, b, k = Fraction(-1), -Fraction(1, t), v // 2
        cache = default_cache()
        key = cache.key_of("kloosterman-germ", p=self.p, group=self.group.value, v=v, t=t)
        return cache.get_or_compute(key, lambda: kloosterman_sum(a, b, self.p, k).real)

    def coset_density(self, coset: UnitCoset, ctx: PAdicContext) -> Scalar:
        v = coset.valuation
        if v < 1 or (self.group is GroupTag.PGL2 and v % 2):
            return Fraction(0)
        if coset.level < self.resolution(v):
            raise ValueError(f"coset level {coset.level} below the resolution {self.resolution(v)}")
        if ctx.symbolic:
            raise SymbolicRegime("Kloosterman values are numeric")
        if not self.oracle:
            raise OracleRequired("the germ at zero is only known through Kloosterman sums")
        value = self._kloosterman(v, coset.unit_residue % self.p ** self.resolution(v))
        scale = complex(ctx.specialize(self.coeff)) * complex(ctx.specialize(self.factor)) ** v
        return scale * float(self.p) ** (-v if self.group is GroupTag.PGL2 else -2 * v) * value

    def scale(self, c: Scalar) -> "KloostermanGerm":
        return replace(self, coeff=self.coeff * c)

    def twist_unramified(self, factor: Scalar) -> "KloostermanGerm":
        return replace(self, factor=self.factor * factor)

    def with_depth(self, depth: int) -> "KloostermanGerm":
        return replace(self, depth=depth)

    def to_dict(self) -> dict:
        return {
            "type": "kloosterman",
            "p": self.p,
            "group": self.group.value,
            "coeff": scalar_to_json(self.coeff),
            "factor": scalar_to_json(self.factor),
            "depth": self.depth,
        }


def load_germ(data: dict, oracle: Optional[bool] = True) -> KloostermanGerm:
    """Germ loader for ``ExtendedMeasure.from_dict``."""
    if data.get("type") != "kloosterman":
        raise ValueError(f"unknown germ type: {data.get('type')}")
    return KloostermanGerm(
        int(data["p"]),
        GroupTag(data["group"]),
        scalar_from_json(data["coeff"]),
        scalar_from_json(data["factor"]),
        int(data.get("depth", DEFAULT_DEPTH)),
        bool(oracle),
    )
