"""
Tate zeta integrals Z(phi, chi, s) = int phi(x) chi(x) |x|^s d^x x, the local functional
equation and the residue at s = 0.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from ..arith import (
    SYMBOLIC,
    U,
    RatFunc,
    Scalar,
    SymbolicRamified,
    SymbolicRegime,
    deviation,
    normalize_scalar,
    scalars_equal,
)
from ..fields import (
    Ball,
    MultChar,
    PAdicContext,
    avg_volume,
    gamma_factor,
    unit_part,
    valuation,
)
from ..measures import SchwartzMeasureGa, additive_fourier, radial_fourier

logger = logging.getLogger(__name__)


def _ball_zeta(ball: Ball, chi: MultChar, u: Scalar, ctx: PAdicContext) -> Scalar:
    zu = chi.z * u
    n = ball.level
    if ball.center == 0 or valuation(ball.center, ball.p) >= n:
        # p^n o is the union of the shells m >= n
        if chi.ramified:
            return Fraction(0)
        return (1 - 1 / ctx.q) * zu**n / (1 - zu)
    p = ball.p
    v = valuation(ball.center, p)
    level = n - v
    if level < chi.conductor:
        return Fraction(0)
    # one of (p - 1) p^(level - 1) cosets sharing the shell volume, q^-level at q = p
    value = zu**v * (1 - 1 / ctx.q) / ((p - 1) * p ** (level - 1))
    if chi.ramified:
        value = value * chi.tame_value(unit_part(ball.center, p), ctx.regime)
    return value


def tate_zeta(phi: SchwartzMeasureGa, chi: MultChar, ctx: PAdicContext, u: Scalar = U) -> Scalar:
    """
    The zeta integral with u = q^-s.

    A ball p^n o contributes (1 - q^-1)(z u)^n / (1 - z u) for unramified chi and nothing
    otherwise; a ball away from zero is a unit coset and contributes a single monomial.

    Raises:
        SymbolicRamified: If chi is ramified in the symbolic regime.
    """
    if ctx.symbolic and chi.ramified:
        raise SymbolicRamified("zeta integrals of ramified characters are numeric")
    total: Scalar = Fraction(0)
    for ball, coeff in phi.terms:
        total = total + coeff * _ball_zeta(ball, chi, u, ctx)
    return normalize_scalar(total)


@dataclass(frozen=True)
class FunctionalEquationReport:
    lhs: Scalar
    rhs: Scalar
    exact: bool
    deviation: float
    passed: bool
    q_specialized: bool = False


def _off_center(phi: SchwartzMeasureGa) -> bool:
    return any(ball.center != 0 for ball, _ in phi.terms)


def verify_functional_equation(
    phi: SchwartzMeasureGa,
    chi: MultChar,
    ctx: PAdicContext,
    u: Scalar = U,
    tolerance: float = 1e-9,
    psi_sign: int = 1,
) -> FunctionalEquationReport:
    """
    Compare gamma(chi, s, psi) Z(phi, chi, s) with Z(phi^, chi^{-1}, 1 - s).

    The right-hand side is computed from the additive Fourier transform of phi, so both
    sides are independent evaluations. In the symbolic regime the transform is averaged
    over the unit group, which leaves the zeta integral of an unramified character unchanged.
    Splitting an off-center ball into cosets counts residues mod p, so when phi or its
    transform has one the two sides are compared at q = p.
    """
    gamma = gamma_factor(chi, u, ctx, psi_sign).value
    lhs = normalize_scalar(gamma * tate_zeta(phi, chi, ctx, u))
    dual = radial_fourier(phi, ctx) if ctx.symbolic else additive_fourier(phi, ctx, psi_sign)
    # 1 - s corresponds to 1/(q u)
    rhs = tate_zeta(dual, chi.inverse(), ctx, 1 / (ctx.q * u))
    specialized = ctx.symbolic and (_off_center(phi) or _off_center(dual))
    if specialized:
        lhs, rhs = ctx.specialize(lhs), ctx.specialize(rhs)
    exact = not isinstance(lhs, complex) and not isinstance(rhs, complex)
    if exact:
        passed = scalars_equal(lhs, rhs)
        dev = 0.0 if passed else float("inf")
    else:
        dev = deviation(lhs, rhs)
        passed = dev <= tolerance
    logger.debug(f"functional equation: exact={exact} q_specialized={specialized} deviation={dev}")
    return FunctionalEquationReport(lhs, rhs, exact, dev, passed, specialized)


def _exact_parts(phi: SchwartzMeasureGa):
    real, imag = [], []
    for ball, coeff in phi.terms:
        if isinstance(coeff, complex):
            real.append((ball, Fraction(coeff.real)))
            imag.append((ball, Fraction(coeff.imag)))
        elif isinstance(coeff, RatFunc):
            raise SymbolicRegime("the residue needs numeric coefficients, not functions of q")
        else:
            real.append((ball, coeff))
    return SchwartzMeasureGa.from_terms(phi.p, real), SchwartzMeasureGa.from_terms(phi.p, imag)


def zeta_residue(phi: SchwartzMeasureGa, ctx: PAdicContext) -> complex:
    """
    Res_{s=0} Z(phi, 1, s), from the rational function in u.

    Near s = 0, u - 1 = -s log q, so the residue in s is minus the residue in u over log q.

    Raises:
        SymbolicRegime: In the symbolic regime.
    """
    if ctx.symbolic:
        raise SymbolicRegime("residues are numbers: use the numeric regime")
    exact_ctx = ctx.with_regime(SYMBOLIC)
    trivial = MultChar.trivial(ctx.p)
    out = 0j
    for part, weight in zip(_exact_parts(phi), (1, 1j)):
        if part.is_zero():
            continue
        zeta = RatFunc(tate_zeta(part, trivial, exact_ctx))
        residue_u = ((U - 1) * zeta).subs(q=ctx.p).evaluate({"u": Fraction(1)})
        out += weight * complex(residue_u)
    return -out / math.log(ctx.p)


@dataclass(frozen=True)
class ResidueReport:
    residue: complex
    expected: complex
    deviation: float
    passed: bool


def check_zeta_residue(phi: SchwartzMeasureGa, ctx: PAdicContext, tolerance: float = 1e-9) -> ResidueReport:
    """Compare the residue with phi(0) times the average volume of F^x."""
    residue = zeta_residue(phi, ctx)
    expected = complex(phi.value_at(0)) * avg_volume(ctx)
    dev = abs(residue - expected)
    return ResidueReport(residue, expected, dev, dev <= tolerance)
