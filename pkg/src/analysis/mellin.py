"""
This module implements the Mellin transform of measures on F^x and its inverse.

The transform is f(chi) = int f chi^{-1}. Characters are grouped by their tame type; on
each component the transform is a function of the unramified parameter z. In the symbolic
regime a component is a rational function of z together with the side (expansion at z = 0
or at z = infinity) of each of its poles. In the numeric regime a component is a finite
Laurent polynomial plus finitely many geometric series, so that every coefficient stays
available exactly.
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..arith import (
    NUMERIC,
    SYMBOLIC,
    Z,
    RatFunc,
    Scalar,
    UnrecognizedPoleStructure,
    is_zero,
    normalize_scalar,
    scalar_from_json,
    scalar_to_json,
)
from ..fields import (
    MultChar,
    PAdicContext,
    UnitCoset,
    all_characters,
    iter_shell_cosets,
    root_of_unity,
)
from ..measures import (
    AT_INFINITY,
    AT_ZERO,
    ExtendedMeasure,
    SchwartzMeasureGm,
    TailGerm,
    as_extended,
)

logger = logging.getLogger(__name__)

Angles = Tuple[Fraction, ...]

SIDE_ZERO = "at-zero"
SIDE_INFINITY = "at-infinity"


def trivial_tame(p: int) -> Angles:
    return MultChar.trivial(p).angles


def is_real_tame(angles: Angles) -> bool:
    return all(a in (0, Fraction(1, 2)) for a in angles)


def tame_types(p: int, max_conductor: int) -> List[Angles]:
    return [chi.angles for chi in all_characters(p, max_conductor, Fraction(1))]


@lru_cache(maxsize=None)
def geometric_closed_form(log_power: int, start: int) -> RatFunc:
    """sum_{j >= start} j^m z^j as a rational function of z."""
    f = Z**start / (1 - Z)
    for _ in range(log_power):
        f = Z * f.diff("z")
    return f


@dataclass(frozen=True)
class GeometricSeries:
    """
    The series sum_{j >= start} coeff * j^m * ratio^j * z^(offset + sign * step * j).

    ``side`` is ``at-zero`` for positive powers of z (sign +1) and ``at-infinity`` for
    negative ones.
    """

    coeff: Scalar
    ratio: Scalar
    log_power: int = 0
    start: int = 0
    side: str = SIDE_ZERO
    offset: int = 0
    step: int = 1

    @property
    def sign(self) -> int:
        return 1 if self.side == SIDE_ZERO else -1

    def coefficient(self, exponent: int) -> Scalar:
        shift = (exponent - self.offset) * self.sign
        if shift < 0 or shift % self.step:
            return Fraction(0)
        j = shift // self.step
        if j < self.start:
            return Fraction(0)
        return self.coeff * Fraction(j) ** self.log_power * self.ratio**j

    def closed_form(self) -> RatFunc:
        inner = geometric_closed_form(self.log_power, self.start)
        x = self.ratio * Z ** (self.sign * self.step)
        return self.coeff * Z**self.offset * inner.subs(z=x)

    def evaluate(self, z: complex) -> complex:
        x = complex(self.ratio) * complex(z) ** (self.sign * self.step)
        inner = geometric_closed_form(self.log_power, self.start).evaluate({"z": x})
        return complex(self.coeff) * complex(z) ** self.offset * inner

    def pole(self) -> Scalar:
        """Location of the pole in z (step one only)."""
        if self.step != 1:
            raise UnrecognizedPoleStructure("series in z^k with k > 1 has no single pole")
        return normalize_scalar(1 / self.ratio) if self.side == SIDE_ZERO else self.ratio

    def shifted(self, exponent: int, factor: Scalar) -> "GeometricSeries":
        return replace(self, coeff=self.coeff * factor, offset=self.offset + exponent)

    def to_dict(self) -> dict:
        return {
            "coeff": scalar_to_json(self.coeff),
            "ratio": scalar_to_json(self.ratio),
            "m": self.log_power,
            "start": self.start,
            "side": self.side,
            "offset": self.offset,
            "step": self.step,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GeometricSeries":
        return cls(
            scalar_from_json(data["coeff"]),
            scalar_from_json(data["ratio"]),
            int(data["m"]),
            int(data["start"]),
            data["side"],
            int(data.get("offset", 0)),
            int(data.get("step", 1)),
        )


@dataclass(frozen=True)
class Pole:
    location: Scalar
    order: int
    side: str


@dataclass(frozen=True)
class MellinComponent:
    """
    The Mellin transform on one tame component.

    Attributes:
        tame: The tame type of the component.
        value: Symbolic closed form in z.
        sides: Symbolic pole bookkeeping: (location, side) for every pole that may occur.
        laurent: Numeric Laurent coefficients, as (exponent, coefficient) pairs.
        series: Numeric geometric pieces.
    """

    tame: Angles
    value: Optional[RatFunc] = None
    sides: Tuple[Tuple[Scalar, str], ...] = ()
    laurent: Tuple[Tuple[int, Scalar], ...] = ()
    series: Tuple[GeometricSeries, ...] = ()

    @property
    def symbolic(self) -> bool:
        return self.value is not None

    def is_zero(self) -> bool:
        if self.symbolic:
            return not self.value
        return not self.series and all(is_zero(c, 1e-14) for _, c in self.laurent)

    def side_of(self, location: Scalar) -> str:
        for loc, side in self.sides:
            if loc == location:
                return side
        raise UnrecognizedPoleStructure(f"pole at z={location} has no recorded side")

    def poles(self) -> List[Pole]:
        """Poles of the closed form away from z = 0, with orders and sides."""
        if not self.symbolic:
            return [Pole(s.pole(), s.log_power + 1, s.side) for s in self.series]
        out = []
        for factor, mult in self.value.factor_denominator():
            location = _linear_root(factor)
            if location is None:
                continue
            out.append(Pole(location, mult, self.side_of(location)))
        return out

    def coefficient(self, exponent: int) -> Scalar:
        """The coefficient of z^exponent in the expansion dictated by the pole sides."""
        if self.symbolic:
            raise ValueError("use inverse_mellin for symbolic components")
        total = dict(self.laurent).get(exponent, Fraction(0))
        for s in self.series:
            total = total + s.coefficient(exponent)
        return normalize_scalar(total)

    def evaluate(self, z: Scalar, bindings: Optional[dict] = None) -> Scalar:
        if self.symbolic:
            return self.value.evaluate({**(bindings or {}), "z": z})
        total = sum((complex(c) * complex(z) ** e for e, c in self.laurent), 0j)
        return total + sum((s.evaluate(z) for s in self.series), 0j)

    def to_dict(self) -> dict:
        data: dict = {"tame": [str(a) for a in self.tame]}
        if self.symbolic:
            data["ratfunc"] = self.value.to_dict()
            data["poles"] = [
                {"z": scalar_to_json(p.location), "order": p.order, "side": p.side} for p in self.poles()
            ]
            data["sides"] = [[scalar_to_json(loc), side] for loc, side in self.sides]
        else:
            data["laurent"] = [[e, scalar_to_json(c)] for e, c in self.laurent]
            data["series"] = [s.to_dict() for s in self.series]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "MellinComponent":
        tame = tuple(Fraction(a) for a in data["tame"])
        if "ratfunc" in data:
            return cls(
                tame,
                value=RatFunc.from_dict(data["ratfunc"]),
                sides=tuple((scalar_from_json(loc), side) for loc, side in data.get("sides", [])),
            )
        return cls(
            tame,
            laurent=tuple((int(e), scalar_from_json(c)) for e, c in data.get("laurent", [])),
            series=tuple(GeometricSeries.from_dict(s) for s in data.get("series", [])),
        )


def _linear_root(factor: RatFunc) -> Optional[Scalar]:
    """Root in z of a factor of degree one in z; None when z does not occur or the factor is z."""
    num, _ = factor.split("z")
    degree = max(num)
    if degree == 0:
        return None
    if degree > 1:
        raise UnrecognizedPoleStructure(f"denominator factor {factor} has degree {degree} in z")
    if 0 not in num:
        return None
    return normalize_scalar(-num[0] / num[1])


@dataclass(frozen=True)
class MellinData:
    """
    The Mellin transform of a measure, one component per tame type with non-zero transform.

    Attributes:
        p: The prime.
        regime: ``symbolic`` or ``numeric``.
        components: Components sorted by tame type.
        complete: False when the symbolic regime had to leave out non-real components.
    """

    p: int
    regime: str
    components: Tuple[MellinComponent, ...] = ()
    complete: bool = True

    def component(self, tame: Angles) -> MellinComponent:
        tame = tuple(Fraction(a) % 1 for a in tame)
        for comp in self.components:
            if comp.tame == tame:
                return comp
        if self.regime == SYMBOLIC:
            return MellinComponent(tame, value=RatFunc(0))
        return MellinComponent(tame)

    def trivial(self) -> MellinComponent:
        return self.component(trivial_tame(self.p))

    def tames(self) -> List[Angles]:
        return [c.tame for c in self.components]

    def is_laurent(self) -> bool:
        """True when every component is a Laurent polynomial in z."""
        for comp in self.components:
            if comp.symbolic:
                try:
                    comp.value.as_laurent("z")
                except ValueError:
                    return False
            elif comp.series:
                return False
        return True

    def map_components(self, fn: Callable[[MellinComponent], MellinComponent]) -> "MellinData":
        comps = [fn(c) for c in self.components]
        return replace(self, components=tuple(c for c in comps if not c.is_zero()))

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "regime": self.regime,
            "complete": self.complete,
            "components": [c.to_dict() for c in self.components],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MellinData":
        return cls(
            int(data["p"]),
            data["regime"],
            tuple(MellinComponent.from_dict(c) for c in data["components"]),
            bool(data.get("complete", True)),
        )


# forward transform


def _compact_laurent(measure: SchwartzMeasureGm, tame: Angles, ctx: PAdicContext) -> Dict[int, Scalar]:
    chi = MultChar(measure.p, tame, Fraction(1))
    n = chi.conductor
    out: Dict[int, Scalar] = {}
    for coset, coeff in measure.terms:
        if coset.level < n:
            continue
        if coset.level == 0:
            piece = coeff * (1 - 1 / ctx.q)
        else:
            piece = coeff * ctx.q ** (-coset.level)
            if n:
                piece = piece * root_of_unity(-chi.tame_angle(coset.unit_residue), ctx.regime)
        e = -coset.valuation
        out[e] = out.get(e, Fraction(0)) + piece
    return {e: normalize_scalar(c) for e, c in out.items() if not is_zero(c, 1e-14)}


def tail_series(tail: TailGerm, ctx: PAdicContext) -> GeometricSeries:
    """The Mellin series of a tail germ on the component of eta^{-1}."""
    vol = 1 - 1 / ctx.q
    if tail.end == AT_INFINITY:
        return GeometricSeries(
            tail.coeff * vol * (-1) ** tail.log_power, tail.eta.z, tail.log_power, tail.start, SIDE_ZERO
        )
    return GeometricSeries(tail.coeff * vol, normalize_scalar(1 / tail.eta.z), tail.log_power, tail.start, SIDE_INFINITY)


def _tail_tame(tail: TailGerm) -> Angles:
    return tail.eta.inverse().angles


def mellin(f, ctx: PAdicContext) -> MellinData:
    """
    Mellin transform of a Schwartz or extended measure.

    Schwartz parts give Laurent polynomials in z, tails give geometric series with a pole of
    order log_power + 1, germs near zero give finitely many negative powers of z.
    """
    f = as_extended(f)
    p = f.p
    compact = f.compact
    complete = True
    germ_masses: Dict[int, Scalar] = {}
    if f.germs:
        if ctx.symbolic:
            complete = False
            for germ in f.germs:
                for v in germ.shells():
                    germ_masses[-v] = germ_masses.get(-v, Fraction(0)) + germ.shell_mass(v, ctx)
        else:
            for germ in f.germs:
                compact = compact + germ.realize(ctx)

    candidates = set(tame_types(p, compact.max_level()))
    if ctx.symbolic:
        real = {t for t in candidates if is_real_tame(t)}
        if len(real) < len(candidates) and compact.max_level() > 0:
            complete = False
        candidates = real
    tails_by_tame: Dict[Angles, List[TailGerm]] = {}
    for tail in f.tails:
        tails_by_tame.setdefault(_tail_tame(tail), []).append(tail)
    candidates |= set(tails_by_tame)
    trivial = trivial_tame(p)
    if germ_masses:
        candidates.add(trivial)

    components = []
    for tame in sorted(candidates):
        laurent = _compact_laurent(compact, tame, ctx)
        if tame == trivial:
            for e, m in germ_masses.items():
                laurent[e] = normalize_scalar(laurent.get(e, Fraction(0)) + m)
        series = tuple(tail_series(t, ctx) for t in tails_by_tame.get(tame, []))
        if ctx.symbolic:
            value = RatFunc.from_laurent("z", laurent)
            for s in series:
                value = value + s.closed_form()
            sides = tuple((s.pole(), s.side) for s in series)
            comp = MellinComponent(tame, value=value, sides=sides)
        else:
            comp = MellinComponent(tame, laurent=tuple(sorted(laurent.items())), series=series)
        if not comp.is_zero():
            components.append(comp)
    return MellinData(p, ctx.regime, tuple(components), complete)


# inverse transform


def _poly_coefficients(roots: Sequence[int], scale: Fraction) -> List[Fraction]:
    """Coefficients (low to high) of scale * prod (j + r)."""
    coeffs = [Fraction(1)]
    for r in roots:
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += c * r
            nxt[i + 1] += c
        coeffs = nxt
    return [c * scale for c in coeffs]


def _principal_part(value: RatFunc, location: Scalar, order: int) -> List[Scalar]:
    """b_1..b_k with value = sum b_l / (1 - z/location)^l + (regular at location)."""
    regular = value * (1 - Z / location) ** order
    moved = regular.subs(z=location * (1 - Z))
    expansion = moved.shell_expand("z", SIDE_ZERO, order)
    if expansion.leading < 0:
        raise UnrecognizedPoleStructure(f"pole at z={location} is deeper than recorded")
    g = [expansion.coefficient(i) for i in range(order)]
    return [normalize_scalar(g[order - l]) for l in range(1, order + 1)]


def _germs_from_pole(
    tame: Angles, p: int, location: Scalar, b: List[Scalar], side: str, ctx: PAdicContext
) -> List[TailGerm]:
    vol = 1 - 1 / ctx.q
    order = len(b)
    poly: List[Scalar] = [Fraction(0)] * order
    for l, bl in enumerate(b, start=1):
        if side == SIDE_ZERO:
            basis = _poly_coefficients(range(1, l), Fraction(1, factorial(l - 1)))
        else:
            basis = _poly_coefficients(range(-1, -l, -1), Fraction((-1) ** l, factorial(l - 1)))
        for m, c in enumerate(basis):
            poly[m] = poly[m] + bl * c
    eta_tame = tuple(-a for a in tame)
    germs = []
    for m, pi in enumerate(poly):
        if is_zero(pi, 1e-14):
            continue
        if side == SIDE_ZERO:
            eta = MultChar(p, eta_tame, normalize_scalar(1 / location))
            germs.append(TailGerm(eta, m, normalize_scalar(pi * (-1) ** m / vol), 0, AT_INFINITY))
        else:
            eta = MultChar(p, eta_tame, normalize_scalar(1 / location))
            germs.append(TailGerm(eta, m, normalize_scalar(pi / vol), 1, AT_ZERO))
    return germs


def _series_germs(tame: Angles, p: int, series: GeometricSeries, ctx: PAdicContext) -> List[TailGerm]:
    """Tail germs reproducing a numeric geometric series (any step)."""
    vol = 1 - 1 / ctx.q
    s, m, o = series.step, series.log_power, series.offset
    eta_tame = tuple(-a for a in tame)
    root = complex(series.ratio) ** (1 / s) if s > 1 else series.ratio
    germs = []
    for k in range(s):
        rho = root * root_of_unity(Fraction(k, s), NUMERIC) if s > 1 else root
        base = series.coeff / Fraction(s) ** (m + 1)
        for power in range(m + 1):
            if series.side == SIDE_ZERO:
                c = base * rho ** (-o) * comb(m, power) * Fraction(-o) ** (m - power) * (-1) ** power / vol
                eta = MultChar(p, eta_tame, rho)
                germs.append(TailGerm(eta, power, c, o + s * series.start, AT_INFINITY))
            else:
                c = base * rho**o * comb(m, power) * Fraction(o) ** (m - power) / vol
                eta = MultChar(p, eta_tame, normalize_scalar(1 / rho))
                germs.append(TailGerm(eta, power, c, s * series.start - o, AT_ZERO))
    return [g for g in germs if not is_zero(g.coeff, 1e-14)]


def _laurent_measure(tame: Angles, p: int, laurent: Dict[int, Scalar], ctx: PAdicContext) -> List[Tuple[UnitCoset, Scalar]]:
    vol = 1 - 1 / ctx.q
    chi = MultChar(p, tame, Fraction(1))
    n = chi.conductor
    terms = []
    for e, d in laurent.items():
        v = -e
        if n == 0:
            terms.append((UnitCoset.shell(v, p), d / vol))
            continue
        ctx.check_level(n)
        for coset in iter_shell_cosets(v, n, p):
            terms.append((coset, d / vol * root_of_unity(chi.tame_angle(coset.unit_residue), ctx.regime)))
    return terms


def inverse_mellin(data: MellinData, ctx: PAdicContext) -> ExtendedMeasure:
    """
    Recover the extended measure whose Mellin transform is ``data``.

    Laurent parts become the compact measure, every pole becomes tail germs with log powers
    below its order, placed at infinity or near zero according to its side.

    Raises:
        UnrecognizedPoleStructure: For poles of degree > 1 in z or poles without a side.
    """
    p = data.p
    terms: List[Tuple[UnitCoset, Scalar]] = []
    tails: List[TailGerm] = []
    for comp in data.components:
        if comp.symbolic:
            rest = comp.value
            for factor, order in comp.value.factor_denominator():
                location = _linear_root(factor)
                if location is None:
                    continue
                side = comp.side_of(location)
                b = _principal_part(comp.value, location, order)
                for l, bl in enumerate(b, start=1):
                    rest = rest - bl / (1 - Z / location) ** l
                tails.extend(_germs_from_pole(comp.tame, p, location, b, side, ctx))
            try:
                laurent = rest.as_laurent("z")
            except ValueError:
                raise UnrecognizedPoleStructure(f"{rest} is not a Laurent polynomial after removing poles") from None
            laurent = {e: normalize_scalar(c) for e, c in laurent.items()}
        else:
            laurent = dict(comp.laurent)
            for s in comp.series:
                tails.extend(_series_germs(comp.tame, p, s, ctx))
        terms.extend(_laurent_measure(comp.tame, p, laurent, ctx))
    logger.debug(f"inverse Mellin: {len(terms)} cosets, {len(tails)} tail germs")
    return ExtendedMeasure.build(SchwartzMeasureGm.from_terms(p, terms), tails, (), ctx)
