"""
Finite models of SL2(Z/p^k) and the Iwasawa decomposition of rational SL2 matrices.
"""

import logging
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, Sequence, Tuple

import numpy as np

from ..fields import valuation
from ..tools.settings import settings

logger = logging.getLogger(__name__)

Matrix = Tuple[Fraction, Fraction, Fraction, Fraction]

# largest table kept in memory; bigger groups are streamed block by block
_FULL_LIST_LIMIT = 10**6


@lru_cache(maxsize=None)
def inverse_table(p: int, k: int) -> np.ndarray:
    """x -> x^{-1} mod p^k on units, 0 on non-units."""
    m = p**k
    return np.array([pow(x, -1, m) if x % p else 0 for x in range(m)], dtype=np.int64)


def valuations(values: np.ndarray, p: int, cap: int) -> np.ndarray:
    """Elementwise p-adic valuation of integers, capped at ``cap`` (zero has valuation cap)."""
    values = np.asarray(values, dtype=np.int64) % p**cap
    out = np.zeros(values.shape, dtype=np.int64)
    rest = values.copy()
    for _ in range(cap):
        divisible = (rest % p == 0) & (out < cap)
        if not divisible.any():
            break
        out = out + divisible
        rest = np.where(divisible, rest // p, rest)
    return np.minimum(out, cap)


def primitive_rows(p: int, k: int) -> np.ndarray:
    """All pairs (a, b) mod p^k with a or b a unit, as an (n, 2) array."""
    m = p**k
    a, b = np.meshgrid(np.arange(m, dtype=np.int64), np.arange(m, dtype=np.int64), indexing="ij")
    a, b = a.ravel(), b.ravel()
    keep = (a % p != 0) | (b % p != 0)
    return np.stack([a[keep], b[keep]], axis=1)


class FiniteGroupTable:
    """
    The group SL2(Z/p^k).

    Elements are generated row by row: a primitive first row (a, b) has exactly p^k
    completions (c0 + t a, d0 + t b), where (c0, d0) is one solution of ad - bc = 1.

    Raises:
        ValueError: If the group exceeds ``PTW_MAX_ENUMERATION`` elements.
    """

    def __init__(self, p: int, k: int) -> None:
        if k < 1:
            raise ValueError("k must be positive")
        if p ** (3 * k) > settings.PTW_MAX_ENUMERATION:
            raise ValueError(f"SL2(Z/{p}^{k}) exceeds the enumeration limit")
        self.p = p
        self.k = k

    @property
    def modulus(self) -> int:
        return self.p**self.k

    @property
    def order(self) -> int:
        return self.p ** (3 * self.k) - self.p ** (3 * self.k - 2)

    def iter_blocks(self, rows_per_block: int = 4096) -> Iterator[np.ndarray]:
        """Yield the elements as (n, 4) arrays of (a, b, c, d)."""
        m = self.modulus
        inv = inverse_table(self.p, self.k)
        rows = primitive_rows(self.p, self.k)
        t = np.arange(m, dtype=np.int64)
        for start in range(0, len(rows), rows_per_block):
            a, b = rows[start : start + rows_per_block].T
            unit = a % self.p != 0
            c0 = np.where(unit, 0, (-inv[b]) % m)
            d0 = np.where(unit, inv[a], 0)
            c = (c0[:, None] + t[None, :] * a[:, None]) % m
            d = (d0[:, None] + t[None, :] * b[:, None]) % m
            n = c.size
            yield np.stack(
                [np.repeat(a, m), np.repeat(b, m), c.reshape(n), d.reshape(n)], axis=1
            )

    @cached_property
    def elements(self) -> np.ndarray:
        if self.p ** (3 * self.k) > _FULL_LIST_LIMIT:
            raise ValueError("the full element list is only kept for small groups; use iter_blocks")
        out = np.concatenate(list(self.iter_blocks()))
        logger.debug(f"enumerated SL2(Z/{self.p}^{self.k}): {len(out)} elements")
        return out

    def count(self) -> int:
        return sum(len(block) for block in self.iter_blocks())

    def check_order(self) -> bool:
        return self.count() == self.order

    def trace_histogram(self, level: int) -> np.ndarray:
        """Number of elements in each class of the trace mod p^level."""
        if not 0 <= level <= self.k:
            raise ValueError("the trace level must lie between 0 and k")
        size = self.p**level
        hist = np.zeros(size, dtype=np.int64)
        for block in self.iter_blocks():
            hist += np.bincount((block[:, 0] + block[:, 3]) % size, minlength=size)
        return hist


def matmul(g: Matrix, h: Matrix) -> Matrix:
    a, b, c, d = g
    e, f, x, y = h
    return (a * e + b * x, a * f + b * y, c * e + d * x, c * f + d * y)


def iwasawa(g: Sequence, p: int) -> Tuple[Fraction, Fraction, Matrix]:
    """
    Write g in SL2(Q) as n(x) diag(A, 1/A) k with k in SL2(Z_p).

    Returns:
        The triple (x, A, k).
    """
    a, b, c, d = (Fraction(x) for x in g)
    if a * d - b * c != 1:
        raise ValueError("not in SL2")
    if d != 0 and (c == 0 or valuation(d, p) <= valuation(c, p)):
        gamma = c / d
        k = (Fraction(1), Fraction(0), gamma, Fraction(1))
        k_inv = (Fraction(1), Fraction(0), -gamma, Fraction(1))
    else:
        delta = d / c
        k = (Fraction(0), Fraction(-1), Fraction(1), delta)
        k_inv = (delta, Fraction(1), Fraction(-1), Fraction(0))
    upper = matmul((a, b, c, d), k_inv)
    if upper[2] != 0:
        raise ArithmeticError("Iwasawa reduction failed")
    big_a = upper[0]
    return upper[1] * big_a, big_a, k
