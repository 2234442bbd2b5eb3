"""
Basic vectors of unramified L-values and their Hecke translates.

A family vector is h * f_0, with f_0 either the standard basic element (the pushforward of
the K-coset function of depth zero) or the basic vector f_{L(r, s)}, the pushforward of
the generating Whittaker series of the L-value. It is kept symbolically, through h-check and
the exponent slots, and realized as an extended measure on demand.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, Optional, Union

from ..arith import OutsideHeckeFamily, RatFunc, Scalar, U, normalize_scalar
from ..fields import PAdicContext
from ..measures import ExtendedMeasure, SchwartzMeasureGm
from .germ import DEFAULT_DEPTH
from .groups import GroupTag
from .hecke import HeckeElement, satake_adapter
from .pushforward import (
    BASIC,
    STANDARD,
    WhittakerSeries,
    assemble_pushforward,
    std_pair_series,
    whittaker_series,
)

logger = logging.getLogger(__name__)

AD = "Ad"
STD_PAIR = "Std2"
R_TAGS = (AD, STD_PAIR)


@dataclass(frozen=True)
class BasicVector:
    """
    The measure h * f_0 on the Kuznetsov line.

    Attributes:
        group: SL2 (adjoint L-value) or PGL2 (product of two standard L-values).
        hecke: The Hecke element h.
        base: ``standard`` or ``basic``.
        r_tag: ``Ad`` or ``Std2``.
        u: The slot q^-s (SL2) or q^-(s1 + 1/2) (PGL2).
        w: The second PGL2 slot q^-(s2 + 1/2); defaults to u.
    """

    group: GroupTag
    hecke: HeckeElement
    base: str = BASIC
    r_tag: str = AD
    u: Scalar = field(default=U)
    w: Optional[Scalar] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "group", GroupTag(self.group))
        if self.r_tag not in R_TAGS:
            raise ValueError(f"unknown L-value: {self.r_tag}")
        if (self.group is GroupTag.SL2) != (self.r_tag == AD):
            raise ValueError("the adjoint L-value lives on SL2, the Std x Std L-value on PGL2")
        if self.base not in (STANDARD, BASIC):
            raise ValueError(f"unknown base vector: {self.base}")
        if self.hecke.group is not self.group:
            raise ValueError("the Hecke element belongs to another group")

    def series(self) -> WhittakerSeries:
        if self.group is GroupTag.SL2:
            return whittaker_series(self.hecke, self.base, self.u)
        if self.base == STANDARD:
            return WhittakerSeries(GroupTag.PGL2, {0: self.hecke.satake.constant_value()}, (), 0)
        series = std_pair_series(self.u, self.w)
        c = self.hecke.satake.constant_value()
        if c != 1:
            series = WhittakerSeries(
                series.group,
                {j: normalize_scalar(c * v) for j, v in series.finite.items()},
                tuple(replace(t, coeff=normalize_scalar(c * t.coeff)) for t in series.tails),
                series.radius,
            )
        return series

    def measure(self, ctx: PAdicContext, oracle: bool = True, germ_depth: int = DEFAULT_DEPTH) -> ExtendedMeasure:
        if self.hecke.is_zero():
            return ExtendedMeasure.of(SchwartzMeasureGm.zero(ctx.p))
        return assemble_pushforward(self.series(), ctx, oracle, germ_depth)

    def realize(self, window: Iterable[int], ctx: PAdicContext) -> SchwartzMeasureGm:
        """The restriction to a finite window of shells."""
        return self.measure(ctx).realize(window, ctx)

    def shell_densities(self, window: Iterable[int], ctx: PAdicContext) -> Dict[int, Scalar]:
        """Densities against d^x zeta on the unit-invariant shells of a window."""
        f = self.measure(ctx)
        vol = 1 - 1 / ctx.q
        return {v: normalize_scalar(f.shell_mass(v, ctx) / vol) for v in window}

    def specialize(self, **bindings) -> "BasicVector":
        """Substitute the exponent slots, e.g. u = 1/q."""

        def sub(value):
            return normalize_scalar(RatFunc(value).subs(**bindings)) if value is not None else None

        return replace(self, u=sub(self.u), w=sub(self.w))

    def is_zero(self) -> bool:
        return self.hecke.is_zero()


def basic_vector(
    r_tag: str = AD,
    group: Union[GroupTag, str] = GroupTag.SL2,
    u: Scalar = U,
    w: Optional[Scalar] = None,
) -> BasicVector:
    """f_{L(r, s)}: the adjoint one for SL2, the Std x Std one for PGL2."""
    group = GroupTag(group)
    return BasicVector(group, HeckeElement.identity(group), BASIC, r_tag, u, w)


def standard_vector(group: Union[GroupTag, str] = GroupTag.SL2) -> BasicVector:
    """The standard basic element, the pushforward of the depth-zero K-coset function."""
    group = GroupTag(group)
    return BasicVector(group, HeckeElement.identity(group), STANDARD, AD if group is GroupTag.SL2 else STD_PAIR)


def hecke_act(h: HeckeElement, f: Union[BasicVector, ExtendedMeasure]) -> Union[BasicVector, ExtendedMeasure]:
    """
    The action of the Hecke algebra, realized on Satake transforms: h * (h' * f_0) is
    (h h') * f_0, with h-check passed through the adapter.

    Raises:
        OutsideHeckeFamily: If f is not a family vector.
    """
    if isinstance(f, ExtendedMeasure):
        if f.is_zero():
            return f
        raise OutsideHeckeFamily("the Hecke action is realized on family vectors only")
    if not isinstance(f, BasicVector):
        raise OutsideHeckeFamily(f"not a family vector: {type(f).__name__}")
    adapted = HeckeElement(h.group, satake_adapter(h.satake))
    return replace(f, hecke=adapted.product(f.hecke))
