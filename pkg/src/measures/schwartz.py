"""
This module defines Schwartz measures on F^x and on F.

Both are finite sums of cell indicators with scalar coefficients, kept in canonical form:
pairwise disjoint maximal cells, non-zero coefficients, sorted by cell.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from ..arith import (
    RatFunc,
    Scalar,
    format_scalar,
    normalize_scalar,
    scalar_from_json,
    scalar_to_json,
    scalars_equal,
)
from ..fields import (
    Ball,
    PAdicContext,
    UnitCoset,
    ball_volume,
    unitcoset_volume,
    valuation,
)
from .cells import (
    ball_family_size,
    ball_parent,
    canonicalize,
    coset_family_size,
    coset_parent,
)

Rat = Union[int, Fraction]


def _specialize(value: Scalar, ctx: PAdicContext) -> Scalar:
    return normalize_scalar(ctx.specialize(value)) if isinstance(value, RatFunc) else value


@dataclass(frozen=True)
class SchwartzMeasureGm:
    """
    The measure sum c_i 1_{U_i} d^x x on F^x.

    Attributes:
        p: The prime.
        terms: Canonical (coset, coefficient) pairs.
    """

    p: int
    terms: Tuple[Tuple[UnitCoset, Scalar], ...] = ()

    @classmethod
    def from_terms(cls, p: int, terms: Iterable[Tuple[UnitCoset, Scalar]]) -> "SchwartzMeasureGm":
        canonical = canonicalize(terms, coset_parent, coset_family_size)
        return cls(p, tuple(sorted(canonical.items(), key=lambda item: item[0])))

    @classmethod
    def indicator(cls, coset: UnitCoset, coeff: Scalar = Fraction(1)) -> "SchwartzMeasureGm":
        return cls.from_terms(coset.p, [(coset, coeff)])

    @classmethod
    def shell(cls, p: int, v: int, coeff: Scalar = Fraction(1)) -> "SchwartzMeasureGm":
        return cls.indicator(UnitCoset.shell(v, p), coeff)

    @classmethod
    def from_shell_masses(cls, p: int, masses: Mapping[int, Scalar], ctx: PAdicContext) -> "SchwartzMeasureGm":
        """The unit-invariant measure with the given mass on each shell."""
        vol = 1 - 1 / ctx.q
        return cls.from_terms(p, [(UnitCoset.shell(v, p), m / vol) for v, m in masses.items()])

    @classmethod
    def zero(cls, p: int) -> "SchwartzMeasureGm":
        return cls(p)

    def __iter__(self) -> Iterator[Tuple[UnitCoset, Scalar]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> Dict[UnitCoset, Scalar]:
        return dict(self.terms)

    def __add__(self, other: "SchwartzMeasureGm") -> "SchwartzMeasureGm":
        return SchwartzMeasureGm.from_terms(self.p, list(self.terms) + list(other.terms))

    def __neg__(self) -> "SchwartzMeasureGm":
        return self.scale(Fraction(-1))

    def __sub__(self, other: "SchwartzMeasureGm") -> "SchwartzMeasureGm":
        return self + (-other)

    def scale(self, c: Scalar) -> "SchwartzMeasureGm":
        return SchwartzMeasureGm.from_terms(self.p, [(u, c * v) for u, v in self.terms])

    def map_coefficients(self, fn) -> "SchwartzMeasureGm":
        return SchwartzMeasureGm.from_terms(self.p, [(u, fn(u, v)) for u, v in self.terms])

    def specialize(self, ctx: PAdicContext) -> "SchwartzMeasureGm":
        return self.map_coefficients(lambda _, v: _specialize(v, ctx))

    def shells(self) -> List[int]:
        return sorted({u.valuation for u, _ in self.terms})

    def max_level(self) -> int:
        return max((u.level for u, _ in self.terms), default=0)

    def density_at(self, x: Rat) -> Scalar:
        for coset, coeff in self.terms:
            if coset.contains(x):
                return coeff
        return Fraction(0)

    def mass(self, ctx: PAdicContext) -> Scalar:
        return normalize_scalar(sum((c * unitcoset_volume(u, ctx) for u, c in self.terms), Fraction(0)))

    def shell_masses(self, ctx: PAdicContext) -> Dict[int, Scalar]:
        out: Dict[int, Scalar] = {}
        for coset, coeff in self.terms:
            out[coset.valuation] = out.get(coset.valuation, Fraction(0)) + coeff * unitcoset_volume(coset, ctx)
        return {v: normalize_scalar(m) for v, m in sorted(out.items())}

    def coset_mass(self, coset: UnitCoset, ctx: PAdicContext) -> Scalar:
        """Mass of an arbitrary unit coset."""
        total: Scalar = Fraction(0)
        for cell, coeff in self.terms:
            if cell.valuation != coset.valuation:
                continue
            if cell.level <= coset.level:
                if cell.level == 0 or coset.unit_residue % cell.p**cell.level == cell.unit_residue:
                    total = total + coeff * unitcoset_volume(coset, ctx)
            elif coset.level == 0 or cell.unit_residue % cell.p**coset.level == coset.unit_residue:
                total = total + coeff * unitcoset_volume(cell, ctx)
        return normalize_scalar(total)

    def restrict(self, shells: Iterable[int]) -> "SchwartzMeasureGm":
        keep = set(shells)
        return SchwartzMeasureGm(self.p, tuple((u, c) for u, c in self.terms if u.valuation in keep))

    def refined(self, level: int) -> List[Tuple[UnitCoset, Scalar]]:
        """Non-canonical listing with every coset refined to at least ``level``."""
        return [(child, c) for u, c in self.terms for child in u.refine(max(level, u.level))]

    def translate(self, a: Rat) -> "SchwartzMeasureGm":
        """The image under x -> a x."""
        return SchwartzMeasureGm.from_terms(self.p, [(u.translate(a), c) for u, c in self.terms])

    def equals(self, other: "SchwartzMeasureGm", tolerance: float = 1e-9) -> bool:
        """Equality of canonical forms, within tolerance for numeric coefficients."""
        diff = self - other
        return all(scalars_equal(c, Fraction(0), tolerance) for _, c in diff.terms)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "terms": [{"coset": u.to_dict(), "coeff": scalar_to_json(c)} for u, c in self.terms],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SchwartzMeasureGm":
        p = int(data["p"])
        return cls.from_terms(
            p, [(UnitCoset.from_dict(t["coset"], p), scalar_from_json(t["coeff"])) for t in data["terms"]]
        )

    def to_csv_rows(self) -> List[List[str]]:
        return [[str(u.valuation), str(u.unit_residue), str(u.level), format_scalar(c)] for u, c in self.terms]


@dataclass(frozen=True)
class SchwartzMeasureGa:
    """
    The measure sum c_i 1_{B_i} dx on F, stored as a density against dx.
    """

    p: int
    terms: Tuple[Tuple[Ball, Scalar], ...] = ()

    @classmethod
    def from_terms(cls, p: int, terms: Iterable[Tuple[Ball, Scalar]]) -> "SchwartzMeasureGa":
        canonical = canonicalize(terms, ball_parent, ball_family_size)
        return cls(p, tuple(sorted(canonical.items(), key=lambda item: item[0])))

    @classmethod
    def indicator(cls, ball: Ball, coeff: Scalar = Fraction(1)) -> "SchwartzMeasureGa":
        return cls.from_terms(ball.p, [(ball, coeff)])

    @classmethod
    def ball(cls, p: int, center: Rat, level: int, coeff: Scalar = Fraction(1)) -> "SchwartzMeasureGa":
        return cls.indicator(Ball.make(center, level, p), coeff)

    @classmethod
    def zero(cls, p: int) -> "SchwartzMeasureGa":
        return cls(p)

    def __iter__(self) -> Iterator[Tuple[Ball, Scalar]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SchwartzMeasureGa") -> "SchwartzMeasureGa":
        return SchwartzMeasureGa.from_terms(self.p, list(self.terms) + list(other.terms))

    def __neg__(self) -> "SchwartzMeasureGa":
        return self.scale(Fraction(-1))

    def __sub__(self, other: "SchwartzMeasureGa") -> "SchwartzMeasureGa":
        return self + (-other)

    def scale(self, c: Scalar) -> "SchwartzMeasureGa":
        return SchwartzMeasureGa.from_terms(self.p, [(b, c * v) for b, v in self.terms])

    def specialize(self, ctx: PAdicContext) -> "SchwartzMeasureGa":
        return SchwartzMeasureGa.from_terms(self.p, [(b, _specialize(v, ctx)) for b, v in self.terms])

    def value_at(self, x: Rat) -> Scalar:
        for ball, coeff in self.terms:
            if ball.contains(x):
                return coeff
        return Fraction(0)

    def mass(self, ctx: PAdicContext) -> Scalar:
        return normalize_scalar(sum((c * ball_volume(b, ctx) for b, c in self.terms), Fraction(0)))

    def l2_norm_squared(self, ctx: PAdicContext) -> float:
        """sum |c|^2 vol, numerically."""
        return float(sum(abs(complex(c)) ** 2 * float(ctx.p ** (-b.level)) for b, c in self.specialize(ctx).terms))

    def min_level(self) -> int:
        return min((b.level for b, _ in self.terms), default=0)

    def max_level(self) -> int:
        return max((b.level for b, _ in self.terms), default=0)

    def min_valuation(self) -> Optional[int]:
        """The least valuation met by the support, None if 0 is the only center at every level."""
        vals = []
        for ball, _ in self.terms:
            vals.append(ball.level if ball.center == 0 else min(valuation(ball.center, self.p), ball.level))
        return min(vals, default=None)

    def equals(self, other: "SchwartzMeasureGa", tolerance: float = 1e-9) -> bool:
        diff = self - other
        return all(scalars_equal(c, Fraction(0), tolerance) for _, c in diff.terms)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "terms": [{"ball": b.to_dict(), "coeff": scalar_to_json(c)} for b, c in self.terms],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SchwartzMeasureGa":
        p = int(data["p"])
        return cls.from_terms(p, [(Ball.from_dict(t["ball"], p), scalar_from_json(t["coeff"])) for t in data["terms"]])

    def to_csv_rows(self) -> List[List[str]]:
        return [[str(b.center), str(b.level), format_scalar(c)] for b, c in self.terms]
