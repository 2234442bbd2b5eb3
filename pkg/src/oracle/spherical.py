"""
The zonal spherical function of SL2 as an average over K.

For k with bottom row (c, d) the Iwasawa torus part A of k diag(p^m, p^-m) satisfies
-v(A) = min(v(c) + m, v(d) - m), and bottom rows of Haar-random k are uniform among
primitive vectors. The spherical vector n diag(A, 1/A) k -> (z/q)^v(A) then averages to
an exact rational function of z.
"""

import logging
from fractions import Fraction

import numpy as np

from ..arith import RatFunc, Z
from .groups import primitive_rows, valuations

logger = logging.getLogger(__name__)


def spherical_by_enumeration(v: int, p: int) -> RatFunc:
    """
    Phi(diag(p^m, p^-m)) with m = max(0, -v), summed over primitive rows mod p^(2m+1).
    """
    m = max(0, -v)
    cap = 2 * m + 1
    rows = primitive_rows(p, cap)
    vc = valuations(rows[:, 0], p, cap)
    vd = valuations(rows[:, 1], p, cap)
    exponents = np.minimum(vc + m, vd - m)
    values, counts = np.unique(exponents, return_counts=True)
    total = len(rows)
    ratio = Fraction(p) / Z
    out = RatFunc(0)
    for e, c in zip(values.tolist(), counts.tolist()):
        out = out + Fraction(c, total) * ratio**e
    logger.debug(f"spherical function at depth {m}, p={p}: {len(values)} torus classes")
    return out
