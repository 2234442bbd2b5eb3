"""
The unramified Bessel relative character and the zonal spherical function of SL2.

J_chi is fixed on the standard basic element by its regularized Fourier transform,
1 - Phi(p^-1) with Phi the spherical function, and extended to the Hecke family by
equivariance: J_chi(h * f) = h-check(chi) J_chi(f). The basic vector adds the factor
L(chi, Ad, s).
"""

import logging
from fractions import Fraction
from typing import Union

from ..arith import (
    DegenerateParameter,
    InvalidCharacter,
    OutsideHeckeFamily,
    Q,
    RatFunc,
    Scalar,
    Z,
    normalize_scalar,
)
from ..fields import MultChar, PAdicContext
from ..measures import ExtendedMeasure
from .basic import BasicVector
from .groups import GroupTag
from .hecke import adjoint_l_series, satake_adapter
from .pushforward import BASIC

logger = logging.getLogger(__name__)


def _at_character(expr: RatFunc, chi: MultChar, ctx: PAdicContext) -> Scalar:
    """Specialize q as the context asks and read the function at z = chi(p)."""
    if not ctx.symbolic:
        expr = expr.subs(q=Fraction(ctx.p))
    if isinstance(chi.z, (RatFunc, Fraction)):
        return normalize_scalar(expr.subs(z=chi.z))
    return expr.evaluate({"z": chi.z, "q": ctx.p})


def _check_character(chi: MultChar, ctx: PAdicContext) -> None:
    if chi.ramified:
        raise InvalidCharacter("the Bessel character is modelled for unramified characters only")
    if isinstance(chi.z, RatFunc):
        return
    square = complex(chi.z) ** 2
    if any(abs(square - point) < 1e-12 for point in (ctx.p, 1 / ctx.p)):
        raise DegenerateParameter(f"z = {chi.z} is a reducibility point of the principal series")


def macdonald_spherical(v: int, q=None) -> RatFunc:
    """
    Phi(p^v) = q^-m / (1 + q^-1) [z^m c(z) + z^-m c(1/z)] with m = max(0, -v) and
    c(z) = (1 - q^-1 z^-1) / (1 - z^-1), as a Laurent polynomial in z.
    """
    q = Q if q is None else q
    m = max(0, -v)

    def c(x):
        return (1 - 1 / (q * x)) / (1 - 1 / x)

    return RatFunc(q ** (-m) / (1 + 1 / q) * (Z**m * c(Z) + Z ** (-m) * c(1 / Z)))


def spherical_coefficient(chi: MultChar, v: int, ctx: PAdicContext) -> Scalar:
    """
    The matrix coefficient <pi(n_y) phi_K, phi_K> of the unramified principal series at
    |y| = q^-v, as a function of z = chi(p).

    Raises:
        DegenerateParameter: If z^2 = q^(+-1).
    """
    _check_character(chi, ctx)
    return _at_character(macdonald_spherical(v), chi, ctx)


def bessel_standard() -> RatFunc:
    """J_chi of the standard basic element: (1 - z/q)(1 - 1/(q z)) / (1 + 1/q)."""
    return (1 - Z / Q) * (1 - 1 / (Q * Z)) / (1 + 1 / Q)


def bessel_character(chi: MultChar, f: Union[BasicVector, ExtendedMeasure], ctx: PAdicContext) -> Scalar:
    """
    J_chi(f) for f in the Hecke family over a basic vector of SL2.

    Raises:
        OutsideHeckeFamily: If f is not a family vector of SL2.
    """
    if isinstance(f, ExtendedMeasure):
        if f.is_zero():
            return Fraction(0)
        raise OutsideHeckeFamily("J_chi is defined spectrally on the Hecke family only")
    if not isinstance(f, BasicVector) or f.group is not GroupTag.SL2:
        raise OutsideHeckeFamily("J_chi is modelled on the SL2 Hecke family")
    _check_character(chi, ctx)
    if f.is_zero():
        return Fraction(0)
    value = satake_adapter(f.hecke.satake) * bessel_standard()
    if f.base == BASIC:
        value = value * adjoint_l_series(RatFunc(f.u))
    logger.debug(f"Bessel character of a {f.base} family vector")
    return _at_character(value, chi, ctx)
