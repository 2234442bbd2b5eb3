"""
Scattering scalars, Plancherel densities and boundary transfer multipliers of the rank-one
spherical varieties, as products of Tate gamma factors.

Every product is written on a base cocharacter: the coroot for the Whittaker and group
cases, half the coroot for the torus quotient of PGL2. A term (k, s, e) stands for
gamma(chi^k, s, psi^e) with chi the character composed with the base cocharacter, so the
coroot itself is k = 2 in the torus case. Half-integral s only occurs there; it is carried
by w = q^-1/2 with q = w^-2 in the symbolic regime.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from ..arith import (
    Q,
    W,
    Z,
    PoleHit,
    RatFunc,
    Scalar,
    normalize_scalar,
    scalars_equal,
)
from ..fields import MultChar, PAdicContext, char_eval, char_power, gamma_factor

logger = logging.getLogger(__name__)


class SphericalCase(str, Enum):
    WHITTAKER = "whittaker"
    TORUS = "torus"
    GROUP = "group"

    @classmethod
    def parse(cls, name: str) -> "SphericalCase":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown spherical case: {name}") from None

    @property
    def half_root(self) -> bool:
        """Whether the base cocharacter is half the coroot."""
        return self is SphericalCase.TORUS

    @property
    def weyl_order(self) -> int:
        return 2


@dataclass(frozen=True)
class GammaTerm:
    """gamma(chi^power, s, psi^psi_sign) with s = 1/2 when ``half`` and s = 0 otherwise."""

    power: int
    half: bool
    psi_sign: int


def _terms(*rows: Tuple[int, bool, int]) -> Tuple[GammaTerm, ...]:
    return tuple(GammaTerm(*row) for row in rows)


SCATTERING_TERMS: Dict[SphericalCase, Tuple[GammaTerm, ...]] = {
    SphericalCase.WHITTAKER: _terms((-1, False, 1)),
    SphericalCase.TORUS: _terms((1, True, -1), (1, True, 1), (-2, False, 1)),
    SphericalCase.GROUP: _terms((1, False, -1), (-1, False, 1)),
}

PLANCHEREL_TERMS: Dict[SphericalCase, Tuple[GammaTerm, ...]] = {
    SphericalCase.WHITTAKER: _terms((1, False, 1)),
    SphericalCase.TORUS: _terms((-1, True, -1), (-1, True, 1), (2, False, 1)),
    SphericalCase.GROUP: _terms((-1, False, -1), (1, False, 1)),
}

# the Kuznetsov side of each transfer, on the base cocharacter of the other side
BOUNDARY_CASES: Dict[str, Tuple[Tuple[GammaTerm, ...], SphericalCase]] = {
    "rudnick": (_terms((1, False, 1)), SphericalCase.GROUP),
    "torus": (_terms((2, False, 1)), SphericalCase.TORUS),
}


def _slots(half_root: bool, ctx: PAdicContext) -> Tuple[Scalar, Optional[Scalar]]:
    """The value of q^-1/2 and the residue cardinality override."""
    if not half_root:
        return Fraction(1), None
    if ctx.symbolic:
        return W, W ** (-2)
    return 1 / math.sqrt(ctx.p), None


def _gamma(eta: MultChar, u: Scalar, ctx: PAdicContext, psi_sign: int, q: Optional[Scalar]) -> Scalar:
    try:
        return gamma_factor(eta, u, ctx, psi_sign, q).value
    except PoleHit:
        # the zero of 1 - z u cancels the pole of L(eta, s)
        logger.debug(f"gamma factor of {eta.to_dict()} vanishes at u={u}")
        return Fraction(0)


def gamma_product(
    terms: Iterable[GammaTerm],
    chi: MultChar,
    ctx: PAdicContext,
    psi_sign: int = 1,
    half_root: bool = False,
) -> Scalar:
    """
    The product of the gamma factors named by ``terms``.

    Args:
        terms: The factors.
        chi: The character composed with the base cocharacter.
        ctx: The working context.
        psi_sign: Replaces psi by psi^psi_sign in every factor.
        half_root: Whether the base cocharacter is half the coroot.

    Raises:
        SymbolicRamified: If chi is ramified in the symbolic regime.
    """
    half_u, q = _slots(half_root, ctx)
    total: Scalar = Fraction(1)
    for term in terms:
        eta = char_power(chi, term.power)
        u = half_u if term.half else Fraction(1)
        total = total * _gamma(eta, u, ctx, term.psi_sign * psi_sign, q)
    return normalize_scalar(total)


def scattering_scalar(case: SphericalCase, chi: MultChar, ctx: PAdicContext, psi_sign: int = 1) -> Scalar:
    """The scalar multiple of the standard intertwiner in the scattering operator at chi."""
    case = SphericalCase(case)
    return gamma_product(SCATTERING_TERMS[case], chi, ctx, psi_sign, case.half_root)


def plancherel_density(case: SphericalCase, chi: MultChar, ctx: PAdicContext, psi_sign: int = 1) -> Scalar:
    """The density mu_X(chi) of the Plancherel measure on the most continuous spectrum."""
    case = SphericalCase(case)
    return gamma_product(PLANCHEREL_TERMS[case], chi, ctx, psi_sign, case.half_root)


def boundary_multiplier(transfer: str, chi: MultChar, ctx: PAdicContext) -> Scalar:
    """
    The Mellin multiplier of the transfer operator between boundary degenerations.

    rudnick: gamma(chi, 0, psi) on the coroot.
    torus: gamma(chi, 0, psi^-1) gamma(chi, 0, psi) chi(-1) on the half coroot; the sign
    accounts for the negated coordinate on the torus side and turns the product into
    gamma(chi, 0, psi)^2.

    Raises:
        SymbolicRamified: If chi is ramified in the symbolic regime.
    """
    if transfer == "rudnick":
        return _gamma(chi, Fraction(1), ctx, 1, None)
    if transfer == "torus":
        twisted = _gamma(chi, Fraction(1), ctx, -1, None) * _gamma(chi, Fraction(1), ctx, 1, None)
        return normalize_scalar(twisted * char_eval(chi, -1, ctx))
    raise ValueError(f"unknown transfer: {transfer}")


def plancherel_ratio(transfer: str, chi: MultChar, ctx: PAdicContext) -> Scalar:
    """mu_X / mu_Y for the two sides of a transfer, Kuznetsov side on top."""
    if transfer not in BOUNDARY_CASES:
        raise ValueError(f"unknown transfer: {transfer}")
    top, case = BOUNDARY_CASES[transfer]
    bottom = plancherel_density(case, chi, ctx)
    return normalize_scalar(gamma_product(top, chi, ctx, half_root=case.half_root) / bottom)


@dataclass(frozen=True)
class BoundaryCheck:
    """
    The boundary multiplier of a transfer against the Plancherel ratio it is predicted by.

    The ratio is read in the normalization M_chi f = f^(chi delta^1/2) of the boundary Mellin
    transform, that is at chi |.|^-1 on the base cocharacter: z -> q z for the coroot and
    z -> z / w for the half coroot.
    """

    transfer: str
    multiplier: RatFunc
    shifted_ratio: RatFunc

    @property
    def passed(self) -> bool:
        return self.multiplier == self.shifted_ratio

    def to_row(self) -> List[str]:
        return [self.transfer, str(self.multiplier), str(self.shifted_ratio), str(self.passed)]


def verify_boundary(transfer: str, ctx: PAdicContext) -> BoundaryCheck:
    """Compare boundary_multiplier with the shifted Plancherel ratio, symbolically in z."""
    if not ctx.symbolic:
        ctx = ctx.with_regime("symbolic")
    chi = MultChar.unramified(ctx.p, Z)
    multiplier = RatFunc(boundary_multiplier(transfer, chi, ctx))
    ratio = RatFunc(plancherel_ratio(transfer, chi, ctx))
    if transfer == "rudnick":
        shifted = ratio.subs(z=Q * Z)
    else:
        multiplier = multiplier.subs(q=W ** (-2))
        shifted = ratio.subs(z=Z / W)
    check = BoundaryCheck(transfer, multiplier, shifted)
    logger.debug(f"boundary check for {transfer}: {check.passed}")
    return check


def gamma_duality(chi: MultChar, u: Scalar, ctx: PAdicContext, psi_sign: int = 1) -> Scalar:
    """gamma(chi, s, psi) gamma(chi^-1, 1 - s, psi^-1), which is 1."""
    first = _gamma(chi, u, ctx, psi_sign, None)
    second = _gamma(chi.inverse(), 1 / (ctx.q * u), ctx, -psi_sign, None)
    return normalize_scalar(first * second)


def scattering_table(
    cases: Iterable[SphericalCase], samples: Iterable[Scalar], ctx: PAdicContext
) -> List[Dict[str, object]]:
    """
    Scattering scalars and Plancherel densities at unramified parameters.

    Each row also records the identity S_w(chi) = mu_X(chi^-1).
    """
    rows = []
    for case in cases:
        case = SphericalCase(case)
        for z in samples:
            chi = MultChar.unramified(ctx.p, z)
            scalar = scattering_scalar(case, chi, ctx)
            density = plancherel_density(case, chi, ctx)
            mirrored = plancherel_density(case, chi.inverse(), ctx)
            rows.append(
                {
                    "case": case.value,
                    "z": z,
                    "scattering": scalar,
                    "plancherel": density,
                    "consistent": scalars_equal(scalar, mirrored),
                }
            )
    logger.debug(f"scattering table with {len(rows)} rows")
    return rows
