"""
Whittaker orbital integrals O(zeta) = int_N W(zeta~ n) psi^{-1}(n) dn of the K-coset
Whittaker functions, as finite exponential sums.

For SL2 the section is zeta~ = w diag(zeta, 1/zeta) and the basis function of depth m has
value q^-m on N diag(p^m, p^-m) K; for PGL2 the section is xi~ = [[0, -1], [xi, 0]] and the
basis function of depth j is 1 on N diag(p^j, 1) K. Splitting the integral by |y| leaves

    SL2:  O_m(zeta) = q^-m ([v(zeta) = -m] + int_{|y| = q^k} psi(-y - 1/(zeta^2 y)) dy), k = v(zeta) + m
    PGL2: O_j(xi)   = [v(xi) = -j] + int_{|y| = q^k} psi(-y - 1/(xi y)) dy,           2k = v(xi) + j

with the integral present for k >= 1 only.
"""

import logging
from fractions import Fraction
from typing import Union

import numpy as np

from ..arith import PrecisionExhausted
from ..fields import psi_angle, valuation
from .groups import inverse_table

logger = logging.getLogger(__name__)

Rat = Union[int, Fraction]

SL2 = "SL2"
PGL2 = "PGL2"


def phase_integral(k: int, c: Rat, p: int, level: int) -> complex:
    """
    int_{|y| = q^k} psi(-y - c/y) dy on the mesh y = p^-k (u + p^level o), u a unit.
    """
    m = p**level
    units = np.arange(m, dtype=np.int64)
    units = units[units % p != 0]
    inv = inverse_table(p, level)[units]
    scale = Fraction(c) * Fraction(p) ** k
    step = Fraction(1, p**k)
    angles = np.array(
        [float(psi_angle(-int(u) * step - scale * int(ui), p)) for u, ui in zip(units, inv)]
    )
    return complex(np.exp(2j * np.pi * angles).sum()) * float(p**k) / m


def _mesh_level(k: int, c: Rat, p: int) -> int:
    # psi(-y) needs u mod p^k and psi(-c/y) needs u^{-1} mod p^{-v(c) - k}
    return max(1, k, -valuation(c, p) - k)


def stable_phase_integral(k: int, c: Rat, p: int, tolerance: float = 1e-9) -> complex:
    """
    The phase integral at its mesh level, confirmed on the next finer mesh.

    Raises:
        PrecisionExhausted: If the two meshes disagree.
    """
    level = _mesh_level(k, c, p)
    coarse = phase_integral(k, c, p, level)
    fine = phase_integral(k, c, p, level + 1)
    if abs(coarse - fine) > tolerance:
        raise PrecisionExhausted(f"phase integral changed under refinement: {coarse} vs {fine}")
    return coarse


def kloosterman_orbital(depth: int, x: Rat, p: int, group: str = SL2) -> complex:
    """
    The orbital integral of the depth-``depth`` basis function at the point x of the
    Kuznetsov line (zeta for SL2, xi for PGL2).
    """
    if depth < 0:
        raise ValueError("the depth must be non-negative")
    v = valuation(x, p)
    x = Fraction(x)
    if group == SL2:
        value = complex(v == -depth)
        k = v + depth
        if k >= 1:
            value += stable_phase_integral(k, 1 / (x * x), p)
        return value * float(p) ** (-depth)
    if group != PGL2:
        raise ValueError(f"unknown group: {group}")
    value = complex(v == -depth)
    if (v + depth) % 2 == 0 and (v + depth) // 2 >= 1:
        value += stable_phase_integral((v + depth) // 2, 1 / x, p)
    return value


def orbital_density(depth: int, x: Rat, p: int, group: str = SL2) -> complex:
    """
    The twisted pushforward as a density against d^x x: (1 - p^-2)^-1 delta(x) O(x), with
    delta = |zeta|^2 for SL2 and |xi| for PGL2.
    """
    v = valuation(x, p)
    delta = float(p) ** (-2 * v if group == SL2 else -v)
    return kloosterman_orbital(depth, x, p, group) * delta / (1 - float(p) ** -2)


def kloosterman_sub_sum(p: int, level: int = 1) -> complex:
    """
    The classical sum S(1, 1; p^level), which is the depth-zero SL2 orbital integral at
    zeta = p^level: there the phase is psi(-(u + 1/u) / p^level) over the units.
    """
    return kloosterman_orbital(0, Fraction(p) ** level, p)
