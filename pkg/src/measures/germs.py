"""
This module defines measures on F^x with prescribed behaviour at infinity and near zero.

A ``TailGerm`` is the density ``c * v(x)^m * eta^{-1}(x) d^x x`` on all shells beyond a
radius, where eta is the effective character (any power of the absolute value is absorbed
into its unramified parameter). A ``ZeroGerm`` is a finite-mass measure on finitely many
shells near zero that is only known through its shell masses and, numerically, its
values on cosets. An ``ExtendedMeasure`` is a Schwartz part plus finitely many of both.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from ..arith import (
    RatFunc,
    Scalar,
    format_scalar,
    is_zero,
    normalize_scalar,
    scalar_from_json,
    scalar_to_json,
)
from ..fields import (
    MultChar,
    PAdicContext,
    UnitCoset,
    iter_shell_cosets,
    root_of_unity,
)
from .schwartz import SchwartzMeasureGm

logger = logging.getLogger(__name__)

AT_INFINITY = "infinity"
AT_ZERO = "zero"
ENDS = (AT_INFINITY, AT_ZERO)

SL2 = "SL2"
PGL2 = "PGL2"
NORMALIZATIONS = (SL2, PGL2)


@dataclass(frozen=True)
class TailGerm:
    """
    The density ``coeff * v(x)^log_power * eta^{-1}(x) d^x x``.

    Attributes:
        eta: The effective character.
        log_power: The power of the valuation, m >= 0.
        coeff: The constant in front.
        start: The radius N: shells v <= -N at infinity, v >= N at zero.
        end: ``infinity`` or ``zero``.
        normalization: ``SL2`` or ``PGL2``; records which coordinate the tail came from.
    """

    eta: MultChar
    log_power: int
    coeff: Scalar
    start: int = 0
    end: str = AT_INFINITY
    normalization: str = SL2

    def __post_init__(self) -> None:
        if self.log_power < 0:
            raise ValueError("log_power must be non-negative")
        if self.end not in ENDS:
            raise ValueError(f"unknown end: {self.end}")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"unknown normalization: {self.normalization}")
        object.__setattr__(self, "coeff", normalize_scalar(self.coeff))

    @property
    def p(self) -> int:
        return self.eta.p

    @property
    def key(self) -> tuple:
        return (self.eta.angles, self.eta.z, self.log_power, self.end)

    def covers(self, v: int) -> bool:
        return v <= -self.start if self.end == AT_INFINITY else v >= self.start

    def shell_terms(self, v: int, ctx: PAdicContext) -> List[Tuple[UnitCoset, Scalar]]:
        """The germ restricted to the shell of valuation v, as weighted cosets."""
        if not self.covers(v):
            return []
        base = self.coeff * Fraction(v) ** self.log_power * self.eta.z ** (-v)
        if is_zero(base):
            return []
        n = self.eta.conductor
        if n == 0:
            return [(UnitCoset.shell(v, self.p), base)]
        return [
            (coset, base * root_of_unity(-self.eta.tame_angle(coset.unit_residue), ctx.regime))
            for coset in iter_shell_cosets(v, n, self.p)
        ]

    def shell_mass(self, v: int, ctx: PAdicContext) -> Scalar:
        """Mass of a shell; only unramified germs carry mass."""
        if not self.covers(v) or self.eta.ramified:
            return Fraction(0)
        return normalize_scalar(self.coeff * Fraction(v) ** self.log_power * self.eta.z ** (-v) * (1 - 1 / ctx.q))

    def scale(self, c: Scalar) -> "TailGerm":
        return replace(self, coeff=self.coeff * c)

    def with_start(self, start: int) -> "TailGerm":
        return replace(self, start=start)

    def to_dict(self) -> dict:
        return {
            "eta": self.eta.to_dict(),
            "m": self.log_power,
            "coeff": scalar_to_json(self.coeff),
            "N": self.start,
            "end": self.end,
            "normalization": self.normalization,
        }

    @classmethod
    def from_dict(cls, data: dict, p: int) -> "TailGerm":
        return cls(
            MultChar.from_dict(data["eta"], p),
            int(data["m"]),
            scalar_from_json(data["coeff"]),
            int(data.get("N", 0)),
            data.get("end", AT_INFINITY),
            data.get("normalization", SL2),
        )


class ZeroGerm(ABC):
    """
    A measure near zero supported on finitely many shells, described by its shell masses.
    """

    @property
    @abstractmethod
    def p(self) -> int:
        pass

    @abstractmethod
    def shells(self) -> range:
        """The shells that may carry mass."""
        pass

    @abstractmethod
    def shell_mass(self, v: int, ctx: PAdicContext) -> Scalar:
        pass

    @abstractmethod
    def resolution(self, v: int) -> int:
        """Level of the cosets on which the density is constant on shell v."""
        pass

    @abstractmethod
    def coset_density(self, coset: UnitCoset, ctx: PAdicContext) -> Scalar:
        """Density on a coset of level at least ``resolution``; may require the numeric regime."""
        pass

    @abstractmethod
    def scale(self, c: Scalar) -> "ZeroGerm":
        pass

    @abstractmethod
    def twist_unramified(self, factor: Scalar) -> "ZeroGerm":
        """Multiply the density on shell v by factor^v."""
        pass

    @abstractmethod
    def to_dict(self) -> dict:
        pass

    def realize(self, ctx: PAdicContext) -> SchwartzMeasureGm:
        terms = []
        for v in self.shells():
            for coset in iter_shell_cosets(v, self.resolution(v), self.p):
                terms.append((coset, self.coset_density(coset, ctx)))
        return SchwartzMeasureGm.from_terms(self.p, terms)


@dataclass(frozen=True)
class ExtendedMeasure:
    """
    A Schwartz measure on F^x together with tail germs and germs near zero.

    Attributes:
        compact: The Schwartz part.
        tails: Tail germs with pairwise distinct (eta, log_power, end).
        germs: Germs near zero.
    """

    compact: SchwartzMeasureGm
    tails: Tuple[TailGerm, ...] = ()
    germs: Tuple[ZeroGerm, ...] = field(default=())

    @property
    def p(self) -> int:
        return self.compact.p

    @classmethod
    def of(cls, measure: SchwartzMeasureGm) -> "ExtendedMeasure":
        return cls(measure)

    @classmethod
    def build(
        cls,
        compact: SchwartzMeasureGm,
        tails: Iterable[TailGerm] = (),
        germs: Iterable[ZeroGerm] = (),
        ctx: Optional[PAdicContext] = None,
    ) -> "ExtendedMeasure":
        """
        Canonicalize: tails sharing (eta, log_power, end) are merged, the shells between their
        radii are folded into the compact part.
        """
        grouped: Dict[tuple, List[TailGerm]] = {}
        for tail in tails:
            if tail.p != compact.p:
                raise ValueError("tail over another prime")
            grouped.setdefault(tail.key, []).append(tail)
        folded = []
        merged: List[TailGerm] = []
        for key in sorted(grouped, key=repr):
            group = grouped[key]
            radius = max(t.start for t in group)
            coeff: Scalar = Fraction(0)
            for tail in group:
                for step in range(tail.start, radius):
                    v = -step if tail.end == AT_INFINITY else step
                    if ctx is None and tail.eta.ramified:
                        raise ValueError("folding a ramified tail needs a context")
                    folded.extend(tail.shell_terms(v, ctx or PAdicContext(tail.p)))
                coeff = coeff + tail.coeff
            if not is_zero(coeff, 1e-14):
                merged.append(replace(group[0], coeff=normalize_scalar(coeff), start=radius))
        if folded:
            logger.debug(f"folded {len(folded)} tail cosets into the compact part")
            compact = compact + SchwartzMeasureGm.from_terms(compact.p, folded)
        return cls(compact, tuple(merged), tuple(germs))

    def is_schwartz(self) -> bool:
        return not self.tails and not self.germs

    def is_zero(self) -> bool:
        return self.compact.is_zero() and not self.tails and not self.germs

    def __add__(self, other: "ExtendedMeasure") -> "ExtendedMeasure":
        return ExtendedMeasure.build(
            self.compact + other.compact, self.tails + other.tails, self.germs + other.germs
        )

    def scale(self, c: Scalar) -> "ExtendedMeasure":
        return ExtendedMeasure(
            self.compact.scale(c), tuple(t.scale(c) for t in self.tails), tuple(g.scale(c) for g in self.germs)
        )

    def shell_mass(self, v: int, ctx: PAdicContext) -> Scalar:
        total: Scalar = self.compact.shell_masses(ctx).get(v, Fraction(0))
        for tail in self.tails:
            total = total + tail.shell_mass(v, ctx)
        for germ in self.germs:
            if v in germ.shells():
                total = total + germ.shell_mass(v, ctx)
        return normalize_scalar(total)

    def shell_masses(self, window: Iterable[int], ctx: PAdicContext) -> Dict[int, Scalar]:
        return {v: self.shell_mass(v, ctx) for v in window}

    def realize(self, window: Iterable[int], ctx: PAdicContext) -> SchwartzMeasureGm:
        """The measure restricted to the shells of a window, as a Schwartz measure."""
        window = list(window)
        terms = list(self.compact.restrict(window).terms)
        for tail in self.tails:
            for v in window:
                terms.extend(tail.shell_terms(v, ctx))
        for germ in self.germs:
            if any(v in germ.shells() for v in window):
                terms.extend(germ.realize(ctx).restrict(window).terms)
        return SchwartzMeasureGm.from_terms(self.p, terms)

    def to_dict(self) -> dict:
        return {
            "compact": self.compact.to_dict(),
            "tails": [t.to_dict() for t in self.tails],
            "germs": [g.to_dict() for g in self.germs],
        }

    @classmethod
    def from_dict(cls, data: dict, germ_loader=None) -> "ExtendedMeasure":
        compact = SchwartzMeasureGm.from_dict(data["compact"])
        tails = [TailGerm.from_dict(t, compact.p) for t in data.get("tails", [])]
        raw_germs = data.get("germs", [])
        if raw_germs and germ_loader is None:
            raise ValueError("germs near zero need a loader")
        germs = [germ_loader(g) for g in raw_germs]
        return cls.build(compact, tails, germs)

    def to_csv_rows(self) -> List[List[str]]:
        rows = [["coset", *r] for r in self.compact.to_csv_rows()]
        for tail in self.tails:
            rows.append(
                ["tail", tail.end, str(tail.start), str(tail.log_power), format_scalar(tail.coeff), str(tail.eta.z)]
            )
        for germ in self.germs:
            rows.append(["germ", type(germ).__name__, ",".join(str(v) for v in germ.shells())])
        return rows


def as_extended(f) -> ExtendedMeasure:
    if isinstance(f, ExtendedMeasure):
        return f
    if isinstance(f, SchwartzMeasureGm):
        return ExtendedMeasure(f)
    raise TypeError(f"not a measure on F^x: {type(f).__name__}")


def tail_from_density(
    chi: MultChar, log_power: int, coeff: Scalar, start: int, normalization: str, ctx: PAdicContext
) -> TailGerm:
    """
    The germ ``coeff * v^m * chi^{-1}(x) |x|^k d^x x`` with k = 1 (SL2) or k = 1/2 (PGL2).

    The PGL2 half power is only rational through the slot convention, so the PGL2 form
    expects ``chi`` to carry it already and only the SL2 form shifts by |.|.
    """
    if normalization == SL2:
        eta = chi.with_param(chi.z * ctx.q)
    else:
        eta = chi
    return TailGerm(eta, log_power, coeff, start, AT_INFINITY, normalization)
