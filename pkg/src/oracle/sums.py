"""
Exponential sums and congruence counts modulo p^k, by direct enumeration.

Phases are kept as integer angles modulo p^k and only turned into complex numbers in
the final summation.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np

from ..fields import MultChar, PAdicContext, char_eval, residue
from .groups import inverse_table

logger = logging.getLogger(__name__)

Rat = Union[int, Fraction]


def _phase_sum(angles: np.ndarray, modulus: int) -> complex:
    return complex(np.exp(2j * np.pi * (angles % modulus) / modulus).sum())


def psi_sum(k: int, p: int, scale: Rat = 1) -> complex:
    """sum_{x mod p^k} psi(scale * x / p^k) for p-integral scale."""
    m = p**k
    x = np.arange(m, dtype=np.int64)
    return _phase_sum(residue(scale, p, k) * x, m)


def kloosterman_sum(a: Rat, b: Rat, p: int, k: int) -> complex:
    """
    Kl(a, b; p^k) = sum over units x mod p^k of psi((a x + b x^{-1}) / p^k).

    a and b must be p-integral.
    """
    m = p**k
    x = np.arange(m, dtype=np.int64)
    units = x[x % p != 0]
    inv = inverse_table(p, k)[units]
    angles = residue(a, p, k) * units + residue(b, p, k) * inv
    return _phase_sum(angles, m)


def gauss_sum_enumerated(chi: MultChar, k: int, ctx: PAdicContext, twist: Rat = 1) -> complex:
    """sum over units x mod p^k of chi(x) psi(twist * x / p^k), numerically."""
    numeric = ctx.with_regime("numeric")
    m = ctx.p**k
    total = 0j
    t = residue(twist, ctx.p, k)
    for x in range(m):
        if x % ctx.p == 0:
            continue
        total += complex(char_eval(chi.with_param(Fraction(1)), x, numeric)) * np.exp(2j * np.pi * (t * x % m) / m)
    return total


@lru_cache(maxsize=None)
def _root_count(a: int, b: int, c: int, p: int, k: int) -> int:
    def value(x: int, modulus: int) -> int:
        return (a * x * x + b * x + c) % modulus

    roots = [x for x in range(p) if value(x, p) == 0]
    for j in range(1, k):
        step, modulus = p**j, p ** (j + 1)
        roots = [r + t * step for r in roots for t in range(p) if value(r + t * step, modulus) == 0]
    return len(roots)


def quadratic_root_count(a: Rat, b: Rat, c: Rat, p: int, k: int) -> int:
    """
    #{x mod p^k : a x^2 + b x + c = 0 mod p^k}, by lifting the roots one digit at a time.

    Every root mod p^(j+1) reduces to a root mod p^j, so trying the p lifts of each root
    is exhaustive, singular roots included.
    """
    if k <= 0:
        return 1
    return _root_count(residue(a, p, k), residue(b, p, k), residue(c, p, k), p, k)


def unit_measure_of_roots(a: Rat, b: Rat, c: Rat, p: int, k: int) -> Fraction:
    """Haar measure of {x in o : a x^2 + b x + c = 0 mod p^k}."""
    return Fraction(quadratic_root_count(a, b, c, p, k), p**k)

