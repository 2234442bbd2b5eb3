"""
Elementary operations on measures: twisting by a character, inverting the variable,
pushing forward along power maps and the additive Fourier transform with its radial average.
"""

import logging
from dataclasses import replace
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import List, Tuple, Union

from ..arith import ONE, Scalar
from ..fields import (
    Ball,
    MultChar,
    PAdicContext,
    UnitCoset,
    psi_eval,
    valuation,
)
from .germs import AT_INFINITY, AT_ZERO, ExtendedMeasure
from .schwartz import SchwartzMeasureGa, SchwartzMeasureGm

logger = logging.getLogger(__name__)

GmLike = Union[SchwartzMeasureGm, ExtendedMeasure]


def _twist_terms(measure: SchwartzMeasureGm, chi: MultChar, u: Scalar, ctx: PAdicContext) -> SchwartzMeasureGm:
    n = chi.conductor
    ctx.check_level(n)
    terms = []
    for coset, coeff in measure.refined(n):
        factor = (chi.z * u) ** coset.valuation
        if n:
            factor = factor * chi.tame_value(coset.unit_residue, ctx.regime)
        terms.append((coset, coeff * factor))
    return SchwartzMeasureGm.from_terms(measure.p, terms)


def twist(f: GmLike, chi: MultChar, ctx: PAdicContext, u: Scalar = ONE) -> GmLike:
    """
    Multiply the density of f by chi(x)|x|^s, where u = q^-s.

    Tails with effective character eta become tails with eta * chi^{-1} * |.|^{-s}.

    Raises:
        InsufficientPrecision: If the conductor of chi exceeds the working precision.
    """
    if isinstance(f, SchwartzMeasureGm):
        return _twist_terms(f, chi, u, ctx)
    compact = _twist_terms(f.compact, chi, u, ctx)
    tails = []
    for tail in f.tails:
        eta = tail.eta * chi.inverse()
        tails.append(replace(tail, eta=eta.with_param(eta.z / u)))
    germs = []
    for germ in f.germs:
        if chi.ramified:
            compact = compact + _twist_terms(germ.realize(ctx), chi, u, ctx)
        else:
            germs.append(germ.twist_unramified(chi.z * u))
    return ExtendedMeasure.build(compact, tails, germs, ctx)


def invert_variable(f: GmLike, ctx: PAdicContext = None) -> GmLike:
    """
    Pushforward along x -> 1/x. Coefficients are unchanged since d^x x is inversion invariant.

    For extended measures, tails at infinity become tails at zero (eta -> eta^{-1}, and the
    valuation factor changes sign); germs near zero are realized on cosets first.
    """
    if isinstance(f, SchwartzMeasureGm):
        return SchwartzMeasureGm.from_terms(f.p, [(c.inverse(), v) for c, v in f.terms])
    compact = invert_variable(f.compact)
    if f.germs:
        if ctx is None:
            raise ValueError("inverting germs near zero needs a context")
        for germ in f.germs:
            compact = compact + invert_variable(germ.realize(ctx))
    tails = [
        replace(
            t,
            eta=t.eta.inverse(),
            coeff=t.coeff * (-1) ** t.log_power,
            end=AT_ZERO if t.end == AT_INFINITY else AT_INFINITY,
        )
        for t in f.tails
    ]
    return ExtendedMeasure.build(compact, tails, (), ctx)


def _power_is_bijective(p: int, k: int) -> bool:
    if p == 2:
        return k % 2 == 1
    return k % p != 0 and gcd(k, p - 1) == 1


def _base_level(p: int, k: int) -> int:
    """Least level from which x(1+p^n) -> x^k(1+p^(n+e)) is an exact coset map."""
    if p == 2 and k % 2 == 0:
        return 2
    return 1


def pushforward_power(f: GmLike, k: int, ctx: PAdicContext) -> SchwartzMeasureGm:
    """
    The image measure of f under x -> x^k. Total mass is preserved.

    Raises:
        InsufficientPrecision: If the image cosets exceed the working precision.
    """
    if k == 0:
        raise ValueError("k must be non-zero")
    if isinstance(f, ExtendedMeasure):
        if not f.is_schwartz():
            raise ValueError("power pushforward of tails is not a tail germ")
        f = f.compact
    if k < 0:
        return pushforward_power(invert_variable(f), -k, ctx)
    p = f.p
    e = valuation(k, p)
    bijective = _power_is_bijective(p, k)
    base = _base_level(p, k)
    terms: List[Tuple[UnitCoset, Scalar]] = []
    for coset, coeff in f.terms:
        if coset.level == 0 and bijective and e == 0:
            terms.append((UnitCoset.shell(k * coset.valuation, p), coeff))
            continue
        for piece in coset.refine(max(coset.level, base)):
            level = piece.level + e
            ctx.check_level(level)
            residue = pow(piece.unit_residue, k, p**level)
            terms.append((UnitCoset(p, k * piece.valuation, residue, level), coeff * ctx.q**e))
    return SchwartzMeasureGm.from_terms(p, terms)


def _ball_transform(ball: Ball, coeff: Scalar, ctx: PAdicContext, psi_sign: int) -> List[Tuple[Ball, Scalar]]:
    p, n = ball.p, ball.level
    a = ball.center
    level = -n if a == 0 else max(-n, -valuation(a, p))
    ctx.check_level(level)
    scale = coeff * ctx.q ** (-n)
    step = Fraction(p) ** (-n)
    out = []
    for j in range(p ** (level + n)):
        xi = j * step
        out.append((Ball.make(xi, level, p), scale * psi_eval(a * xi, ctx, psi_sign)))
    return out


@lru_cache(maxsize=256)
def additive_fourier(f: SchwartzMeasureGa, ctx: PAdicContext, psi_sign: int = 1) -> SchwartzMeasureGa:
    """
    The Fourier transform xi -> int f(x) psi(sign * x xi) dx, as a density against dx.

    Uses FT(1_{a + p^n o})(xi) = psi(a xi) q^-n 1_{p^-n o}(xi) termwise. Transforms are
    memoized: one measure is checked against every character of a family.

    Raises:
        InsufficientPrecision: If psi(a xi) is not constant on cells of level within k_max.
        SymbolicRootOfUnity: If a non-real value of psi occurs in the symbolic regime.
    """
    terms = []
    for ball, coeff in f.terms:
        terms.extend(_ball_transform(ball, coeff, ctx, psi_sign))
    return SchwartzMeasureGa.from_terms(f.p, terms)


def _ball_radial_transform(ball: Ball, coeff: Scalar, ctx: PAdicContext) -> List[Tuple[Ball, Scalar]]:
    p, n = ball.p, ball.level
    scale = coeff * ctx.q ** (-n)
    if ball.center == 0:
        ctx.check_level(-n)
        return [(Ball.make(0, -n, p), scale)]
    v = valuation(ball.center, p)
    ctx.check_level(-v - 1)
    # the mean of psi(a xi) over a shell of a is 1, -1/(p-1) or 0
    return [
        (Ball.make(0, -v, p), scale * Fraction(p, p - 1)),
        (Ball.make(0, -v - 1, p), -scale / (p - 1)),
    ]


def radial_fourier(f: SchwartzMeasureGa, ctx: PAdicContext) -> SchwartzMeasureGa:
    """
    The Fourier transform of f averaged over the unit group.

    Each off-center ball a + p^n o is replaced by the mean of its transform over its shell,
    which is real and needs no root of unity. For unramified characters the zeta integral
    of this average equals the zeta integral of the full transform.

    Raises:
        InsufficientPrecision: If a transformed ball leaves the level range of k_max.
    """
    terms = []
    for ball, coeff in f.terms:
        terms.extend(_ball_radial_transform(ball, coeff, ctx))
    return SchwartzMeasureGa.from_terms(f.p, terms)


def translate(f: GmLike, a: Union[int, Fraction]) -> GmLike:
    """Multiplicative translation x -> a x."""
    if isinstance(f, SchwartzMeasureGm):
        return f.translate(a)
    if f.germs or (f.tails and (valuation(a, f.p) or any(t.eta.ramified for t in f.tails))):
        raise ValueError("only unit translations of unramified tails are supported")
    return ExtendedMeasure(f.compact.translate(a), f.tails, f.germs)
