"""
Twisted pushforwards of Whittaker functions to the Kuznetsov line.

With eps_i the measure |zeta| d^x zeta on the shell |zeta| = q^i (|xi| d^x xi for PGL2) and
C = (1 - q^-2)^-1:

    SL2   P(m)  = C (eps_m - q^-1 eps_(m-1)),  m >= 1
    PGL2  P'(j) = C (eps_j - eps_(j-2)),       j >= 1

and the depth-zero functions push forward to C on the unit shell plus a Kloosterman germ.
A Whittaker function given by finitely many coefficients and geometric tails A j^k r^j
assembles into an extended measure whose tails at infinity have eta(p) = q r.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Tuple

from ..arith import (
    OracleRequired,
    Q,
    RatFunc,
    Scalar,
    U,
    Z,
    is_zero,
    normalize_scalar,
)
from ..fields import MultChar, PAdicContext, UnitCoset
from ..measures import AT_INFINITY, ExtendedMeasure, SchwartzMeasureGm, TailGerm
from ..oracle import orbital_density
from .germ import DEFAULT_DEPTH, KloostermanGerm
from .groups import GroupTag, WhittakerCosetElement
from .hecke import HeckeElement

logger = logging.getLogger(__name__)

STANDARD = "standard"
BASIC = "basic"


def _specialize(value: Scalar, ctx: PAdicContext) -> Scalar:
    # q stays an indeterminate throughout the symbolic regime
    if ctx.symbolic or not isinstance(value, RatFunc):
        return value
    return normalize_scalar(ctx.specialize(value))


def _eps(i: int, coeff: Scalar, ctx: PAdicContext) -> List[Tuple[int, Scalar]]:
    """coeff * eps_i as (shell, density) pairs."""
    return [(-i, normalize_scalar(coeff * ctx.q**i))]


def _coset_terms(group: GroupTag, depth: int, ctx: PAdicContext) -> List[Tuple[int, Scalar]]:
    c = group.pushforward_constant(ctx)
    if group is GroupTag.SL2:
        return _eps(depth, c, ctx) + _eps(depth - 1, -c / ctx.q, ctx)
    return _eps(depth, c, ctx) + _eps(depth - 2, -c, ctx)


def _shell_measure(p: int, pairs, ctx: PAdicContext) -> SchwartzMeasureGm:
    return SchwartzMeasureGm.from_terms(p, [(UnitCoset.shell(v, p), d) for v, d in pairs if not is_zero(d)])


def pushforward_coset(
    e: WhittakerCosetElement,
    ctx: PAdicContext,
    coeff: Scalar = Fraction(1),
    oracle: bool = True,
    germ_depth: int = DEFAULT_DEPTH,
) -> ExtendedMeasure:
    """
    The twisted pushforward of coeff times a K-coset Whittaker function.

    Positive depths are shell measures. Depth zero is C on the unit shell plus the
    Kloosterman germ, whose coset values come from enumeration.

    Raises:
        OracleRequired: For depth zero when the oracle is disabled.
    """
    group = e.group
    p = ctx.p
    if e.depth >= 1:
        pairs = [(v, coeff * d) for v, d in _coset_terms(group, e.depth, ctx)]
        return ExtendedMeasure.of(_shell_measure(p, pairs, ctx))
    if not oracle:
        raise OracleRequired("the depth-zero pushforward has no closed form near zero")
    c = normalize_scalar(group.pushforward_constant(ctx) * coeff)
    germ = KloostermanGerm(p, group, c, Fraction(1), germ_depth, oracle)
    return ExtendedMeasure(_shell_measure(p, [(0, c)], ctx), (), (germ,))


def pushforward_coset_oracle(e: WhittakerCosetElement, p: int, shells) -> Dict[int, complex]:
    """Densities of the pushforward at zeta = p^v (xi = p^v), v in ``shells``, by enumeration."""
    return {v: orbital_density(e.depth, Fraction(p) ** v, p, e.group.value) for v in shells}


@dataclass(frozen=True)
class TailTerm:
    """The Whittaker coefficients coeff * j^log_power * ratio^j for every j beyond a radius."""

    coeff: Scalar
    ratio: Scalar
    log_power: int = 0

    def at(self, j: int) -> Scalar:
        return normalize_scalar(self.coeff * Fraction(j) ** self.log_power * self.ratio**j)


@dataclass(frozen=True)
class WhittakerSeries:
    """
    Whittaker coefficients in the K-coset basis: finitely many values and, beyond
    ``radius``, a sum of geometric tails.
    """

    group: GroupTag
    finite: Dict[int, Scalar] = field(default_factory=dict)
    tails: Tuple[TailTerm, ...] = ()
    radius: int = 0

    def coefficient(self, j: int) -> Scalar:
        if j <= self.radius or not self.tails:
            return self.finite.get(j, Fraction(0))
        return normalize_scalar(sum((t.at(j) for t in self.tails), Fraction(0)))

    def coefficients(self, count: int) -> List[Scalar]:
        return [self.coefficient(j) for j in range(count)]

    def specialize(self, **bindings) -> "WhittakerSeries":
        def sub(value):
            if isinstance(value, RatFunc):
                return normalize_scalar(value.subs(**bindings))
            return value

        return WhittakerSeries(
            self.group,
            {j: sub(c) for j, c in self.finite.items()},
            tuple(TailTerm(sub(t.coeff), sub(t.ratio), t.log_power) for t in self.tails),
            self.radius,
        )


def adjoint_l_coefficient(j: int, u: Scalar) -> Scalar:
    """L_j = u^|j| / ((1 - u)(1 - u^2)), the z^j coefficient of L(Ad, s)."""
    return normalize_scalar(u ** abs(j) / ((1 - u) * (1 - u * u)))


def whittaker_series(h: HeckeElement, base: str = STANDARD, u: Scalar = U) -> WhittakerSeries:
    """
    Whittaker coefficients of h * (base vector) for SL2: the z^-m coefficients of
    (1 - z) h-check(z) S(z), with S = 1 for the standard vector and S = L(Ad, s)(z) for the
    basic one. Past the degree d of h-check the coefficients are u^m h-check(u) / (1 - u^2).
    """
    if h.group is not GroupTag.SL2:
        raise ValueError("the Hecke family is modelled for SL2 only")
    if base == STANDARD:
        finite = {m: normalize_scalar(c) for m, c in h.coset_coefficients().items()}
        return WhittakerSeries(h.group, finite, (), max(finite, default=0))
    if base != BASIC:
        raise ValueError(f"unknown base vector: {base}")
    if h.is_zero():
        return WhittakerSeries(h.group)
    if is_zero(u):
        return whittaker_series(h, STANDARD)
    b = (h.satake * (1 - Z)).as_laurent("z")
    d = h.degree()
    radius = max(d - 1, 0)
    finite = {}
    for m in range(radius + 1):
        total = sum((c * adjoint_l_coefficient(-m - i, u) for i, c in b.items()), Fraction(0))
        finite[m] = normalize_scalar(total)
    amplitude = normalize_scalar(h.satake.subs(z=RatFunc(u)) / (1 - u * u))
    return WhittakerSeries(h.group, finite, (TailTerm(amplitude, u, 0),), radius)


def std_pair_series(u: Scalar = U, w: Optional[Scalar] = None) -> WhittakerSeries:
    """
    Whittaker coefficients of the PGL2 basic vector of L(Std, s1) L(Std, s2): in the basis
    b_j they are h_j(u, w) / (1 - q u w), h_j the complete symmetric polynomial.
    """
    w = u if w is None else w
    denominator = 1 - Q * u * w
    finite = {0: normalize_scalar(1 / denominator)}
    if RatFunc(u) == RatFunc(w):
        a = normalize_scalar(1 / (1 - Q * u * u))
        tails = (TailTerm(a, u, 1), TailTerm(a, u, 0))
    else:
        tails = (
            TailTerm(normalize_scalar(u / ((u - w) * denominator)), u, 0),
            TailTerm(normalize_scalar(-w / ((u - w) * denominator)), w, 0),
        )
    return WhittakerSeries(GroupTag.PGL2, finite, tails, 0)


def _tail_germs(group: GroupTag, term: TailTerm, radius: int, ctx: PAdicContext) -> List[TailGerm]:
    """Tail germs of sum_{j > radius} coeff j^k r^j P(j)."""
    c = group.pushforward_constant(ctx)
    a, r, k = term.coeff, term.ratio, term.log_power
    shift, weight = (1, r / ctx.q) if group is GroupTag.SL2 else (2, r * r)
    eta = MultChar.unramified(ctx.p, normalize_scalar(ctx.q * r))
    germs = []
    for l in range(k + 1):
        lead = Fraction(1) if l == k else Fraction(0)
        value = c * a * (-1) ** l * (lead - weight * comb(k, l) * Fraction(shift) ** (k - l))
        if not is_zero(value):
            germs.append(TailGerm(eta, l, value, radius + 1, AT_INFINITY, group.value))
    return germs


def _tail_boundary(group: GroupTag, term: TailTerm, radius: int, ctx: PAdicContext) -> List[Tuple[int, Scalar]]:
    """The compact leftovers of a tail sum below its radius, as (shell, density) pairs."""
    c = group.pushforward_constant(ctx)
    M = radius
    if group is GroupTag.SL2:
        return _eps(M, -c * term.at(M + 1) / ctx.q, ctx)
    return _eps(M, -c * term.at(M + 2), ctx) + _eps(M - 1, -c * term.at(M + 1), ctx)


def assemble_pushforward(
    series: WhittakerSeries,
    ctx: PAdicContext,
    oracle: bool = True,
    germ_depth: int = DEFAULT_DEPTH,
) -> ExtendedMeasure:
    """
    The pushforward of a Whittaker function given by its coefficients: the finite part
    coset by coset, each geometric tail as tail germs at infinity plus compact leftovers.
    """
    group = series.group
    p = ctx.p
    pairs: List[Tuple[int, Scalar]] = []
    germs = []
    for j, w in sorted(series.finite.items()):
        w = _specialize(w, ctx)
        if is_zero(w):
            continue
        if j == 0:
            part = pushforward_coset(WhittakerCosetElement(group, 0), ctx, w, oracle, germ_depth)
            pairs.extend((coset.valuation, d) for coset, d in part.compact.terms)
            germs.extend(part.germs)
        else:
            pairs.extend((v, w * d) for v, d in _coset_terms(group, j, ctx))
    tails: List[TailGerm] = []
    if series.tails and series.radius < 0:
        raise ValueError("tails must start beyond the depth-zero coefficient")
    for term in series.tails:
        term = TailTerm(_specialize(term.coeff, ctx), _specialize(term.ratio, ctx), term.log_power)
        if is_zero(term.coeff) or is_zero(term.ratio):
            continue
        tails.extend(_tail_germs(group, term, series.radius, ctx))
        pairs.extend(_tail_boundary(group, term, series.radius, ctx))
    compact = _shell_measure(p, pairs, ctx)
    logger.debug(f"assembled {group.value} pushforward: {len(compact)} shells, {len(tails)} tails, {len(germs)} germs")
    return ExtendedMeasure.build(compact, tails, germs, ctx)
