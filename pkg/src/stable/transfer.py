"""
Transfer operators out of the Kuznetsov formula.

SL2 to the stable trace formula: T f is the multiplicative convolution of f with
|x| psi(x) d^x x. With y = 1/zeta its density against dt is the Fourier transform of
Phi(y) = phi(1/y), so the mass of a ball is

    mass(c + p^L o) = q^-L * integral over |y| <= q^L of Phi(y) psi(c y) dy,

which is summed here exactly: shells and cosets of the Schwartz part one by one, tails at
infinity as geometric series, and the Kloosterman germ through root counts of
x^2 - c x + 1.

PGL2 to the torus: the convolution with the same kernel is applied twice, on Mellin
transforms only.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Union

from ..analysis import (
    ConvolutionKernel,
    MellinData,
    apply_kernel,
    geometric_closed_form,
    kernel_multiplier_symbolic,
    mellin,
    trivial_tame,
)
from ..arith import (
    NonSummableTail,
    PoleHit,
    RatFunc,
    Scalar,
    ZeroDenominator,
    deviation,
    format_scalar,
    normalize_scalar,
    scalars_equal,
)
from ..fields import Ball, PAdicContext, psi_eval, residue, valuation
from ..kuznetsov import BasicVector, GroupTag, HeckeElement, KloostermanGerm, basic_vector, hecke_act
from ..measures import AT_INFINITY, ExtendedMeasure, as_extended
from ..oracle import hecke_trace_mass, quadratic_root_count
from ..tools.cache import OracleCache
from .trace import GERM_DEPTH, TraceMeasure, build_trace_measure, double_coset_decomposition

logger = logging.getLogger(__name__)

Rat = Union[int, Fraction]


def _measure(f: Union[BasicVector, ExtendedMeasure], ctx: PAdicContext) -> ExtendedMeasure:
    if isinstance(f, BasicVector):
        return f.measure(ctx)
    return as_extended(f)


def _shell_phase(j: int, c: Fraction, p: int, q: Scalar) -> Scalar:
    """The integral of psi(c y) over |y| = q^-j against du, divided by q^-j."""
    if c == 0:
        return 1 - 1 / q
    v = valuation(c, p) + j
    if v >= 0:
        return 1 - 1 / q
    if v == -1:
        return -1 / q
    return Fraction(0)


def _geometric_sum(log_power: int, start: int, ratio: Scalar) -> Scalar:
    try:
        return geometric_closed_form(log_power, start).evaluate({"z": ratio})
    except (PoleHit, ZeroDenominator, ZeroDivisionError):
        raise NonSummableTail(f"the transferred tail has ratio {ratio}") from None


def _compact_part(f: ExtendedMeasure, c: Fraction, level: int, ctx: PAdicContext) -> Scalar:
    p, q = f.p, ctx.q
    total: Scalar = Fraction(0)
    for coset, coeff in f.compact.terms:
        v = coset.valuation
        if -v < -level:
            continue
        if coset.level == 0:
            total = total + coeff * q**v * _shell_phase(-v, c, p, q)
            continue
        # the inverse coset is the ball p^-v r^-1 + p^(n - v) o
        width = coset.level - v
        if c != 0 and valuation(c, p) + width < 0:
            continue
        center = coset.inverse().representative()
        total = total + coeff * q ** (-width) * psi_eval(c * center, ctx)
    return total


def _tail_part(f: ExtendedMeasure, c: Fraction, level: int, ctx: PAdicContext) -> Scalar:
    p, q = f.p, ctx.q
    total: Scalar = Fraction(0)
    for tail in f.tails:
        if tail.eta.ramified:
            raise ValueError("ramified tails are not transferred")
        rho, m, a = tail.eta.z, tail.log_power, tail.coeff
        if tail.end != AT_INFINITY:
            for j in range(-level, -tail.start + 1):
                total = total + a * Fraction(-j) ** m * rho**j * q ** (-j) * _shell_phase(j, c, p, q)
            continue
        first = max(tail.start, -level)
        steady = first if c == 0 else max(first, -valuation(c, p))
        for j in range(first, steady):
            total = total + a * Fraction(-j) ** m * rho**j * q ** (-j) * _shell_phase(j, c, p, q)
        series = _geometric_sum(m, steady, normalize_scalar(rho / q))
        total = total + a * (-1) ** m * (1 - 1 / q) * series
    return total


def _root_density(c: Fraction, p: int, k: int, q: Scalar) -> Scalar:
    # units x with x + 1/x = c mod p^k; every unit for k = 0
    if k == 0:
        return 1 - 1 / q
    return Fraction(quadratic_root_count(1, -residue(c, p, k), 1, p, k), p**k)


def _germ_part(f: ExtendedMeasure, c: Fraction, level: int, ctx: PAdicContext) -> Scalar:
    p, q = f.p, ctx.q
    total: Scalar = Fraction(0)
    for germ in f.germs:
        if not isinstance(germ, KloostermanGerm) or germ.group is not GroupTag.SL2:
            raise ValueError("only the SL2 Kloosterman germ is transferred")
        if c != 0 and valuation(c, p) < 0:
            continue
        for k in range(1, level + 1):
            exact = _root_density(c, p, k, q)
            coarse = _root_density(c, p, k - 1, q)
            bracket = (1 - 1 / q) * exact - (coarse - exact) / q
            total = total + germ.coeff * germ.factor**k * bracket
    return total


def transfer_ball_mass(
    f: Union[BasicVector, ExtendedMeasure], center: Rat, level: int, ctx: PAdicContext
) -> Scalar:
    """
    The mass of center + p^level o under T f.

    Raises:
        NonSummableTail: If a tail has ratio one after the transfer.
    """
    f = _measure(f, ctx)
    c = Ball.make(center, level, f.p).center
    total = _compact_part(f, c, level, ctx) + _tail_part(f, c, level, ctx) + _germ_part(f, c, level, ctx)
    return normalize_scalar(ctx.q ** (-level) * total)


def transfer_kuznetsov_to_stable(
    f: Union[BasicVector, ExtendedMeasure],
    ctx: PAdicContext,
    level: int = 1,
    radius: int = 0,
    germ_depth: int = GERM_DEPTH,
) -> TraceMeasure:
    """
    T f as a trace measure.

    Args:
        f: A family vector or an extended measure of the SL2 Kuznetsov line.
        ctx: A numeric context; ball masses are exact rationals or rational functions.
        level: The level of the stored balls.
        radius: The window p^-radius o.
        germ_depth: Exact a-shells at t = +-2.

    Raises:
        NonSummableTail: If a tail diverges after the transfer.
        PrecisionExhausted: If mass lies outside the window or a germ does not settle.
    """
    if ctx.symbolic:
        ctx = ctx.with_regime("numeric")
    measure = _measure(f, ctx)

    def ball_mass(c: Fraction, n: int) -> Scalar:
        return transfer_ball_mass(measure, c, n, ctx)

    return build_trace_measure(ctx.p, ball_mass, level, radius, germ_depth)


def torus_multiplier(ctx: PAdicContext) -> RatFunc:
    """The composite multiplier gamma(chi, 0, psi)^2 on unramified components."""
    kernel = ConvolutionKernel.standard(ctx.p, 1, 1, ctx)
    value, _ = kernel_multiplier_symbolic(kernel, trivial_tame(ctx.p), ctx)
    return value * value


def transfer_kuznetsov_to_torus_spectral(
    f: Union[BasicVector, ExtendedMeasure, MellinData], ctx: PAdicContext
) -> MellinData:
    """
    The Mellin transform of the twice-convolved PGL2 measure.

    Raises:
        NonSummableTail: If a pole of f meets a pole of the kernel from the other side.
    """
    data = f if isinstance(f, MellinData) else mellin(_measure(f, ctx), ctx)
    kernel = ConvolutionKernel.standard(ctx.p, 1, 1, ctx)
    out = apply_kernel(apply_kernel(data, kernel, ctx), kernel, ctx)
    logger.debug(f"torus transfer on {len(out.components)} components")
    return out


@dataclass(frozen=True)
class LemmaRow:
    """One ball of a fundamental lemma comparison."""

    center: Fraction
    level: int
    lhs: Scalar
    rhs: Scalar

    @property
    def equal(self) -> bool:
        return scalars_equal(self.lhs, self.rhs)

    @property
    def deviation(self) -> float:
        return deviation(self.lhs, self.rhs)

    def to_row(self) -> List[str]:
        return [
            f"{self.center}+p^{self.level}o",
            format_scalar(self.lhs),
            format_scalar(self.rhs),
            str(self.equal),
        ]


def fundamental_lemma_check(
    h: Union[HeckeElement, int],
    p: int,
    max_level: int = 2,
    radius: Optional[int] = None,
    cache: Optional[OracleCache] = None,
) -> List[LemmaRow]:
    """
    Compare T(h f_{L(Ad, 1)}) with zeta(2) times the trace pushforward of h, ball by ball.

    The right side comes from fiber counting alone. Balls run over all levels up to
    max_level inside p^-radius o.
    """
    if isinstance(h, int):
        h = HeckeElement.double_coset(h)
    ctx = PAdicContext(p, max(6, max_level + 2), "numeric")
    parts = double_coset_decomposition(h, p)
    if radius is None:
        radius = max(parts, default=0) + 1
    q = Fraction(p)
    f = hecke_act(h, basic_vector(u=1 / q)).measure(ctx)
    zeta2 = 1 / (1 - q**-2)
    rows = []
    for level in range(-radius, max_level + 1):
        for ball in Ball.make(0, -radius, p).refine(level):
            lhs = transfer_ball_mass(f, ball.center, level, ctx)
            rhs = zeta2 * sum(
                (c * hecke_trace_mass(ball.center, level, depth, p, cache) for depth, c in parts.items()),
                Fraction(0),
            )
            rows.append(LemmaRow(ball.center, level, lhs, normalize_scalar(rhs)))
    failed = sum(1 for r in rows if not r.equal)
    logger.debug(f"fundamental lemma at p={p}: {len(rows)} balls, {failed} mismatches")
    return rows
