"""
The stable character of an unramified principal series as a functional on trace measures.

The kernel lives on the split classes t = a + 1/a: it is (chi(a) + chi(a)^-1) / |a - 1/a|,
and elliptic classes contribute nothing. Against the Weyl measure this turns into

    sum over |t| = q^m, m >= 1, of (z^m + z^-m) q^-m mu(shell)
    + the integral over units a of the density at a + 1/a,

the second part read off ball masses away from a = +-1 and off the germs near it.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..arith import DegenerateParameter, InvalidCharacter, Scalar, normalize_scalar
from ..fields import MultChar, unit_residues, valuation
from .trace import TraceMeasure

logger = logging.getLogger(__name__)

Rat = Union[int, Fraction]


@dataclass(frozen=True)
class StablePairingKernel:
    """
    The split-class kernel of the stable character attached to chi.

    Attributes:
        chi: An unramified character.
    """

    chi: MultChar

    def __post_init__(self) -> None:
        if self.chi.ramified:
            raise InvalidCharacter("the stable pairing is modelled for unramified characters")

    @property
    def p(self) -> int:
        return self.chi.p

    def inverse(self) -> "StablePairingKernel":
        return StablePairingKernel(self.chi.inverse())

    def at(self, a: Rat) -> Scalar:
        """kappa at t = a + 1/a."""
        a = Fraction(a)
        if a == 0 or a * a == 1:
            raise ValueError("the kernel is defined on regular split classes")
        z = self.chi.z
        v = valuation(a, self.p)
        d = a - 1 / a
        size = Fraction(self.p) ** (-valuation(d, self.p))
        return normalize_scalar((z**v + z ** (-v)) / size)

    def shell_weight(self, m: int) -> Scalar:
        """The weight of |t| = q^m, m >= 1."""
        z = self.chi.z
        return normalize_scalar((z**m + z ** (-m)) * Fraction(self.p) ** (-m))

    def pair(self, mu: TraceMeasure) -> Scalar:
        return stable_pairing(mu, self.chi)


def _unit_part(mu: TraceMeasure) -> Scalar:
    # the density is constant on level-n balls away from +-2, so each a-ball maps onto one t-ball
    p, n = mu.p, mu.level
    modulus = p**n
    total: Scalar = Fraction(0)
    for a in unit_residues(p, n):
        if a % p in (1, p - 1):
            continue
        t = (a + pow(a, -1, modulus)) % modulus
        total = total + mu.ball_mass(t, n)
    return total


def stable_pairing(mu: TraceMeasure, chi: MultChar) -> Scalar:
    """
    The pairing of a trace measure with the stable character of chi.

    Raises:
        DegenerateParameter: For p = 2, where t = +-2 collide.
        InvalidCharacter: If chi is ramified.
    """
    kernel = StablePairingKernel(chi)
    if mu.p != chi.p:
        raise ValueError("measure and character over different primes")
    if mu.p == 2:
        raise DegenerateParameter("the split-class parametrization degenerates at p = 2")
    if mu.is_zero():
        return Fraction(0)
    if len(mu.germs) != 2:
        raise ValueError("the pairing needs the germs at t = +-2")
    total: Scalar = Fraction(0)
    for m in range(1, mu.radius + 1):
        mass = mu.shell_mass(m)
        if mass:
            total = total + kernel.shell_weight(m) * mass
    total = total + _unit_part(mu)
    for germ in mu.germs:
        total = total + germ.total()
    logger.debug(f"stable pairing over {len(mu.compact)} balls and {len(mu.germs)} germs")
    return normalize_scalar(total)
