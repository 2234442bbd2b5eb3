"""
Riemann sums of locally constant, compactly supported functions on F and F^2.

The integral over p^-radius o (or its square) is sampled on the mesh of level n and
confirmed on the mesh of level n + 1; a disagreement means the integrand is not
constant on the coarser cells.
"""

import logging
from fractions import Fraction
from itertools import product
from typing import Callable, Union

from ..arith import NotLocallyConstant, Scalar, is_zero, normalize_scalar

logger = logging.getLogger(__name__)

Rat = Union[int, Fraction]


def _mesh(p: int, level: int, radius: int):
    step = Fraction(1, p**radius)
    return [j * step for j in range(p ** (radius + level))]


def _sample(fn: Callable, p: int, level: int, radius: int, dim: int) -> Scalar:
    points = _mesh(p, level, radius)
    weight = Fraction(1, p ** (dim * level))
    total: Scalar = Fraction(0)
    for x in product(points, repeat=dim):
        total = total + fn(*x)
    return normalize_scalar(total * weight)


def riemann_sum(
    fn: Callable,
    p: int,
    level: int,
    radius: int = 0,
    dim: int = 1,
    tolerance: float = 1e-10,
) -> Scalar:
    """
    Integrate fn over (p^-radius o)^dim against dx (dx(o) = 1).

    Args:
        fn: A function of ``dim`` rationals with values exact or complex.
        p: The prime.
        level: The mesh level; fn must be constant on cosets of p^level o.
        radius: The support bound.
        dim: 1 or 2.
        tolerance: Allowed numeric deviation between the two meshes.

    Returns:
        The integral, exact when fn is exact.

    Raises:
        NotLocallyConstant: If one refinement of the mesh changes the value.
    """
    if dim not in (1, 2):
        raise ValueError("only dimensions 1 and 2 are sampled")
    if level + radius < 0:
        raise ValueError("the mesh is coarser than the support")
    coarse = _sample(fn, p, level, radius, dim)
    fine = _sample(fn, p, level + 1, radius, dim)
    if not is_zero(coarse - fine, tolerance):
        raise NotLocallyConstant(f"integral changed from {coarse} to {fine} at mesh level {level + 1}")
    logger.debug(f"riemann sum over p^{-radius}o^{dim} at level {level}: {coarse}")
    return coarse
