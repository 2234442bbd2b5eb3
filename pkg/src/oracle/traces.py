"""
Trace fibers of SL2(Z/p^k) and of the double cosets K diag(p^-m, p^m) K.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from ..arith import PrecisionExhausted
from ..fields import residue, valuation
from ..tools.cache import OracleCache, default_cache
from .groups import FiniteGroupTable, valuations

logger = logging.getLogger(__name__)

Rat = Union[int, Fraction]


@lru_cache(maxsize=None)
def bc_count_table(p: int, n: int) -> np.ndarray:
    """
    T[m] = #{(b, c) mod p^n : bc = m}.

    For v(m) = e < n there are p^(n-1)(p-1) pairs for each valuation 0..e of b; for m = 0
    the last valuation class b = 0 adds p^n more.
    """
    units = p ** (n - 1) * (p - 1)
    e = valuations(np.arange(p**n, dtype=np.int64), p, n)
    table = (e + 1) * units
    table[0] = n * units + p**n
    return table


@lru_cache(maxsize=None)
def primitive_bc_count_table(p: int, n: int) -> np.ndarray:
    """#{(b, c) mod p^n : bc = m, b or c a unit}."""
    units = p ** (n - 1) * (p - 1)
    e = valuations(np.arange(p**n, dtype=np.int64), p, n)
    return np.where(e == 0, units, 2 * units)


@lru_cache(maxsize=None)
def _group_histogram(p: int, k: int, level: int) -> tuple:
    return tuple(int(x) for x in FiniteGroupTable(p, k).trace_histogram(level))


def trace_fiber_count(center: Rat, level: int, p: int, k: int) -> Fraction:
    """
    #{g in SL2(Z/p^k) : tr g in center + p^level o} / |SL2(Z/p^k)|.
    """
    if level > k:
        raise ValueError("the cell level must not exceed k")
    if level <= 0:
        return Fraction(1)
    center = Fraction(center)
    if center.denominator % p == 0:
        return Fraction(0)
    hist = _group_histogram(p, k, level)
    return Fraction(hist[residue(center, p, level)], FiniteGroupTable(p, k).order)


def _leray_count(center: Fraction, level: int, depth: int, p: int, n: int) -> Fraction:
    """
    #{X mod p^n primitive : det X = p^(2 depth), tr X in p^depth (center + p^level o)} / p^(3n).
    """
    modulus = p**n
    det = p ** (2 * depth) % modulus
    window = depth + level
    d = np.arange(modulus, dtype=np.int64)
    if window <= 0:
        a = np.arange(modulus, dtype=np.int64)
        a, d = np.repeat(a, modulus), np.tile(d, modulus)
    else:
        target = residue(center * p**depth, p, window)
        lifts = np.arange(p ** (n - window), dtype=np.int64) * p**window
        base = (target - d) % p**window
        a = (base[:, None] + lifts[None, :]).ravel()
        d = np.repeat(d, len(lifts))
    m = (a * d - det) % modulus
    both_nonunits = (a % p == 0) & (d % p == 0)
    counts = np.where(
        both_nonunits, primitive_bc_count_table(p, n)[m], bc_count_table(p, n)[m]
    )
    return Fraction(int(counts.sum()), p ** (3 * n))


def hecke_trace_mass(
    center: Rat, level: int, depth: int, p: int, cache: Optional[OracleCache] = None
) -> Fraction:
    """
    The mass of {g in K diag(p^-depth, p^depth) K : tr g in center + p^level o} for dg(K) = 1.

    Matrices X = p^depth g are primitive with det X = p^(2 depth); the Leray count of that
    fiber scales by p^(2 depth) against the fiber of det = 1, and dg(K) = 1 divides by
    1 - p^-2. The count is taken at two precisions and must agree.

    Raises:
        PrecisionExhausted: If the two precisions disagree.
    """
    center = Fraction(center)
    if depth < 0:
        raise ValueError("the depth must be non-negative")
    if center != 0 and level > valuation(center, p) and valuation(center, p) < -depth:
        return Fraction(0)
    n = max(2 * depth + 1, depth + level, 1)

    def compute() -> str:
        coarse = _leray_count(center, level, depth, p, n)
        fine = _leray_count(center, level, depth, p, n + 1)
        if coarse != fine:
            raise PrecisionExhausted(f"trace fiber count changed between p^{n} and p^{n + 1}")
        return str(coarse * p ** (2 * depth) / (1 - Fraction(1, p**2)))

    cache = cache or default_cache()
    key = cache.key_of("hecke-trace-mass", p=p, depth=depth, center=str(center), level=level)
    return Fraction(cache.get_or_compute(key, compute))
