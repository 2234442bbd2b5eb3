"""
Measures on the trace line of SL2 and the pushforward of Hecke elements to it.

A trace measure keeps its masses on the balls of one level inside a bounded window, and,
for odd p, a germ at each singular trace t = +-2 that records the measure along the split
classes a + 1/a with a close to +-1. Ball masses come from a callable, so the same builder
serves the enumeration oracle and the transfer closed forms.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

from ..arith import (
    PrecisionExhausted,
    Scalar,
    format_scalar,
    normalize_scalar,
    scalar_from_json,
    scalar_to_json,
    scalars_equal,
)
from ..fields import Ball
from ..kuznetsov import GroupTag, HeckeElement, satake_at
from ..measures import SchwartzMeasureGa
from ..oracle import hecke_trace_mass
from ..tools.cache import OracleCache

logger = logging.getLogger(__name__)

Rat = Union[int, Fraction]
BallMass = Callable[[Fraction, int], Scalar]

# a-shells computed exactly at each singular trace; the last one confirms the fitted law
GERM_DEPTH = 3


@dataclass(frozen=True)
class TraceGerm:
    """
    The measure near a singular trace, read along the split classes.

    The a-shell e collects a = +-(1 + x) with v(x) = e; its weight is the integral of the
    trace density over that shell against da. Past the exact shells the weights follow
    c1 q^-e + c2 q^-2e.

    Attributes:
        p: The prime.
        center: 2 or -2.
        shells: Weights of the a-shells 1..len(shells).
        law: The pair (c1, c2).
    """

    p: int
    center: Fraction
    shells: Tuple[Scalar, ...]
    law: Tuple[Scalar, Scalar]

    @property
    def depth(self) -> int:
        return len(self.shells)

    def weight(self, e: int) -> Scalar:
        """The weight of a-shell e, exact or from the law."""
        if e < 1:
            raise ValueError("a-shells start at e = 1")
        if e <= self.depth:
            return self.shells[e - 1]
        q = Fraction(self.p)
        c1, c2 = self.law
        return normalize_scalar(c1 * q ** (-e) + c2 * q ** (-2 * e))

    def tail_sum(self) -> Scalar:
        """sum_{e > depth} of the law."""
        q = Fraction(self.p)
        c1, c2 = self.law
        E = self.depth
        return normalize_scalar(c1 * q ** (-E) / (q - 1) + c2 * q ** (-2 * E) / (q * q - 1))

    def total(self) -> Scalar:
        return normalize_scalar(sum(self.shells, Fraction(0)) + self.tail_sum())

    def scale(self, c: Scalar) -> "TraceGerm":
        return TraceGerm(
            self.p,
            self.center,
            tuple(normalize_scalar(c * x) for x in self.shells),
            (normalize_scalar(c * self.law[0]), normalize_scalar(c * self.law[1])),
        )

    def equals(self, other: "TraceGerm", tolerance: float = 1e-9) -> bool:
        if self.center != other.center or self.depth != other.depth:
            return False
        pairs = list(zip(self.shells, other.shells)) + list(zip(self.law, other.law))
        return all(scalars_equal(a, b, tolerance) for a, b in pairs)

    def to_dict(self) -> dict:
        return {
            "center": str(self.center),
            "shells": [scalar_to_json(x) for x in self.shells],
            "law": [scalar_to_json(c) for c in self.law],
        }

    @classmethod
    def from_dict(cls, data: dict, p: int) -> "TraceGerm":
        return cls(
            p,
            Fraction(data["center"]),
            tuple(scalar_from_json(x) for x in data["shells"]),
            tuple(scalar_from_json(c) for c in data["law"]),
        )


@dataclass(frozen=True)
class TraceMeasure:
    """
    A measure on the trace line, known on the balls of one level inside p^-radius o.

    Attributes:
        p: The prime.
        level: The level of the balls the masses are taken on.
        radius: Nothing lies outside p^-radius o.
        compact: Densities against dt, constant on the balls of the given level.
        germs: Germs at t = +-2; empty for p = 2.
    """

    p: int
    level: int
    radius: int
    compact: SchwartzMeasureGa
    germs: Tuple[TraceGerm, ...] = field(default=())

    def is_zero(self) -> bool:
        return self.compact.is_zero() and all(
            all(not x for x in g.shells) and not any(g.law) for g in self.germs
        )

    def ball_mass(self, center: Rat, level: int) -> Scalar:
        """
        The mass of center + p^level o.

        Raises:
            ValueError: If the ball is finer than the stored level.
        """
        if level > self.level:
            raise ValueError(f"balls of level {level} are finer than the stored level {self.level}")
        target = Ball.make(center, level, self.p)
        q = Fraction(self.p)
        total: Scalar = Fraction(0)
        for ball, density in self.compact:
            if target.contains_ball(ball):
                total = total + density * q ** (-ball.level)
            elif ball.contains_ball(target):
                total = total + density * q ** (-level)
        return normalize_scalar(total)

    def shell_mass(self, m: int) -> Scalar:
        """The mass of |t| = q^m."""
        return normalize_scalar(self.ball_mass(0, -m) - self.ball_mass(0, 1 - m))

    def mass(self) -> Scalar:
        return self.ball_mass(0, -self.radius)

    def germ(self, center: Rat) -> Optional[TraceGerm]:
        for g in self.germs:
            if g.center == center:
                return g
        return None

    def scale(self, c: Scalar) -> "TraceMeasure":
        return TraceMeasure(
            self.p, self.level, self.radius, self.compact.scale(c), tuple(g.scale(c) for g in self.germs)
        )

    def equals(self, other: "TraceMeasure", tolerance: float = 1e-9) -> bool:
        if (self.p, self.level) != (other.p, other.level):
            return False
        if not self.compact.equals(other.compact, tolerance):
            return False
        if len(self.germs) != len(other.germs):
            return False
        return all(a.equals(b, tolerance) for a, b in zip(self.germs, other.germs))

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "level": self.level,
            "radius": self.radius,
            "compact": self.compact.to_dict(),
            "germs": [g.to_dict() for g in self.germs],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TraceMeasure":
        p = int(data["p"])
        return cls(
            p,
            int(data["level"]),
            int(data["radius"]),
            SchwartzMeasureGa.from_dict(data["compact"]),
            tuple(TraceGerm.from_dict(g, p) for g in data.get("germs", [])),
        )

    def to_csv_rows(self) -> List[List[str]]:
        q = Fraction(self.p)
        return [
            [str(ball.center), str(ball.level), format_scalar(normalize_scalar(d * q ** (-ball.level)))]
            for ball, d in self.compact
        ]


def unit_squares(p: int) -> List[int]:
    return sorted({w * w % p for w in range(1, p)})


def _germ_shell(ball_mass: BallMass, center: int, e: int, p: int) -> Scalar:
    # a = +-(1 + p^e w) lands in t = +-2 +- p^2e w^2 (mod p^(2e+1)), two values of w per ball
    q = Fraction(p)
    sign = 1 if center > 0 else -1
    total: Scalar = Fraction(0)
    for s in unit_squares(p):
        total = total + ball_mass(Fraction(center + sign * p ** (2 * e) * s), 2 * e + 1)
    return normalize_scalar(2 * q**e * total)


def fit_germ(p: int, center: int, shells: List[Scalar], tolerance: float = 1e-9) -> TraceGerm:
    """
    Fit c1 q^-e + c2 q^-2e to the two shells before the last and confirm it on the last.

    Raises:
        PrecisionExhausted: If the law misses the last shell.
    """
    if len(shells) < 3:
        raise ValueError("the germ law needs three a-shells")
    q = Fraction(p)
    E = len(shells)
    a = E - 2
    x_a, x_b = shells[a - 1], shells[a]
    A = q ** (-a)
    c2 = normalize_scalar((x_a - q * x_b) / (A * A * (1 - 1 / q)))
    c1 = normalize_scalar((x_a - c2 * A * A) / A)
    predicted = c1 * q ** (-E) + c2 * q ** (-2 * E)
    if not scalars_equal(normalize_scalar(predicted), shells[-1], tolerance):
        raise PrecisionExhausted(f"the germ at t = {center} did not settle within {E} a-shells")
    logger.debug(f"germ at t = {center}: c1 = {format_scalar(c1)}, c2 = {format_scalar(c2)}")
    return TraceGerm(p, Fraction(center), tuple(shells), (c1, c2))


def build_trace_measure(
    p: int,
    ball_mass: BallMass,
    level: int,
    radius: int,
    germ_depth: int = GERM_DEPTH,
    check_support: bool = True,
) -> TraceMeasure:
    """
    Collect a trace measure from its ball masses.

    Args:
        p: The prime.
        ball_mass: Mass of center + p^level o, for any center and level.
        level: The level of the stored balls.
        radius: The window p^-radius o.
        germ_depth: The number of exact a-shells at t = +-2; zero skips the germs.
        check_support: Require the shell just outside the window to carry nothing.

    Raises:
        PrecisionExhausted: If a germ does not settle or mass is found outside the window.
    """
    if level < 1:
        raise ValueError("trace measures are kept on balls of level at least 1")
    if check_support:
        outside = normalize_scalar(ball_mass(Fraction(0), -radius - 1) - ball_mass(Fraction(0), -radius))
        if not scalars_equal(outside, Fraction(0)):
            raise PrecisionExhausted(f"mass {format_scalar(outside)} beyond |t| = q^{radius}")
    q = Fraction(p)
    window = Ball.make(0, -radius, p)
    terms = [(ball, normalize_scalar(ball_mass(ball.center, level) * q**level)) for ball in window.refine(level)]
    compact = SchwartzMeasureGa.from_terms(p, terms)
    germs: Tuple[TraceGerm, ...] = ()
    if p != 2 and germ_depth:
        germs = tuple(
            fit_germ(p, center, [_germ_shell(ball_mass, center, e, p) for e in range(1, germ_depth + 1)])
            for center in (2, -2)
        )
    logger.debug(f"trace measure at p={p}: {len(compact)} balls of level {level}, radius {radius}")
    return TraceMeasure(p, level, radius, compact, germs)


def double_coset_decomposition(h: HeckeElement, p: int) -> Dict[int, Fraction]:
    """
    Coordinates of h in the basis of double cosets K diag(p^-m, p^m) K, with q = p.

    Raises:
        ValueError: If h is not an SL2 element or its coordinates do not specialize.
    """
    if h.group is not GroupTag.SL2:
        raise ValueError("the trace pushforward is modelled for SL2")
    rest = satake_at(h, p)
    out: Dict[int, Fraction] = {}
    while rest:
        laurent = rest.as_laurent("z")
        top = max(laurent)
        lead = laurent[top]
        if not lead.is_constant():
            raise ValueError(f"{h.satake} has coefficients that do not specialize at q = {p}")
        coeff = lead.constant_value() / p**top
        out[top] = coeff
        rest = rest - satake_at(HeckeElement.double_coset(top), p) * coeff
    return out


def trace_pushforward(
    h: Union[HeckeElement, int],
    p: int,
    level: int,
    radius: Optional[int] = None,
    germ_depth: int = GERM_DEPTH,
    cache: Optional[OracleCache] = None,
) -> TraceMeasure:
    """
    The pushforward of h dg to the trace line, by fiber counting.

    Args:
        h: A Hecke element of SL2, or the depth of a double coset (0 for 1_K).
        p: The prime.
        level: The level of the stored balls.
        radius: The window; defaults to the largest depth in h.
        germ_depth: Exact a-shells at t = +-2.
        cache: The oracle cache.

    Raises:
        PrecisionExhausted: If a fiber count or a germ does not settle.
    """
    if isinstance(h, int):
        h = HeckeElement.double_coset(h)
    parts = double_coset_decomposition(h, p)
    if radius is None:
        radius = max(parts, default=0)

    def ball_mass(center: Fraction, n: int) -> Fraction:
        return sum(
            (c * hecke_trace_mass(center, n, depth, p, cache) for depth, c in parts.items()),
            Fraction(0),
        )

    logger.debug(f"trace pushforward over {len(parts)} double cosets at p={p}")
    return build_trace_measure(p, ball_mass, level, radius, germ_depth)
