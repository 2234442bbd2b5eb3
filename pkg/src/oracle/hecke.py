"""
Enumeration of the double cosets K diag(p^-M, p^M) K / K of SL2(Q_p).

Every left coset has a unique representative [[p^-j, x], [0, p^j]] with x in
p^-M o / p^-j o; it belongs to the double coset of depth M when the least valuation
of its entries is -M.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from ..arith import RatFunc, Z
from ..fields import psi_angle, valuation

logger = logging.getLogger(__name__)


def hecke_coset_reps(depth: int, p: int) -> List[Tuple[int, Fraction]]:
    """The representatives (j, x) of K diag(p^-depth, p^depth) K / K."""
    if depth < 0:
        raise ValueError("the depth must be non-negative")
    reps = []
    for j in range(-depth, depth + 1):
        for k in range(p ** (depth - j)):
            x = Fraction(k, p**depth)
            least = -abs(j) if x == 0 else min(-abs(j), valuation(x, p))
            if least == -depth:
                reps.append((j, x))
    return reps


def coset_counts(depth: int, p: int) -> Dict[int, int]:
    """Number of representatives with each diagonal exponent j."""
    counts: Dict[int, int] = {}
    for j, _ in hecke_coset_reps(depth, p):
        counts[j] = counts.get(j, 0) + 1
    return counts


def satake_by_enumeration(depth: int, p: int) -> RatFunc:
    """
    sum over the coset representatives of delta^(1/2) chi of their torus part, with
    chi(diag(p^-j, p^j)) = z^-j and q = p.
    """
    total = RatFunc(0)
    for j, count in coset_counts(depth, p).items():
        total = total + count * Fraction(p) ** j * Z ** (-j)
    return total


def whittaker_action(depth: int, m: int, n: int, p: int) -> complex:
    """
    The value at diag(p^n, p^-n) of the Hecke translate of the Whittaker basis function
    of depth m (value p^-m on N diag(p^m, p^-m) K, psi-equivariant on the left).

    Only representatives with j = n - m land in the support; each contributes
    psi(p^(2n - j) x).
    """
    angles = [
        float(psi_angle(Fraction(p) ** (2 * n - j) * x, p))
        for j, x in hecke_coset_reps(depth, p)
        if j == n - m
    ]
    if not angles:
        return 0j
    total = complex(np.exp(2j * np.pi * np.array(angles)).sum())
    return total * float(p) ** (-m)
