"""
The family coordinate C(g1, g2) = tr(g1 w g2^t w^-1) on pairs of 2x2 matrices.

On SL2 the conjugated transpose w g^t w^-1 is the inverse, so C restricts to the trace
map g1 g2^-1; on the rank-one idempotents (E11, E22) it takes the value 1.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, Rational, eye, zeros

logger = logging.getLogger(__name__)

W = Matrix([[0, -1], [1, 0]])


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    """A sympy matrix with exact rational entries."""
    if isinstance(rows, Matrix):
        return rows
    return Matrix([[Rational(str(Fraction(x))) for x in row] for row in rows])


def family_coordinate(g1, g2) -> Rational:
    g1, g2 = as_matrix(g1), as_matrix(g2)
    return (g1 * W * g2.T * W.inv()).trace()


@dataclass(frozen=True)
class CoordinateSample:
    """
    The coordinate of one pair, and what it is checked against.

    Attributes:
        label: A name for the pair.
        value: C(g1, g2).
        expected: The expected value.
        inverse_ok: For g2 in SL2, whether w g2^t w^-1 equals g2^-1; None otherwise.
    """

    label: str
    value: Rational
    expected: Rational
    inverse_ok: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return self.value == self.expected and self.inverse_ok is not False


@dataclass(frozen=True)
class CoordinateReport:
    samples: Tuple[CoordinateSample, ...]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.samples)

    def failures(self) -> List[CoordinateSample]:
        return [s for s in self.samples if not s.passed]

    def to_rows(self) -> List[List[str]]:
        return [[s.label, str(s.value), str(s.expected), str(s.passed)] for s in self.samples]


def random_sl2(rng: np.random.Generator, size: int = 3) -> Matrix:
    """A product of elementary unipotents with small rational entries, hence in SL2(Q)."""
    g = eye(2)
    for _ in range(size):
        a = Rational(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        b = Rational(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        g = g * Matrix([[1, a], [0, 1]]) * Matrix([[1, 0], [b, 1]])
    return g


def default_samples(count: int = 20, seed: int = 0) -> List[Tuple[str, Matrix, Matrix]]:
    rng = np.random.default_rng(seed)
    samples = [
        ("identity", eye(2), eye(2)),
        ("rank-one", Matrix([[1, 0], [0, 0]]), Matrix([[0, 0], [0, 1]])),
        ("zero", zeros(2), zeros(2)),
    ]
    for i in range(count):
        samples.append((f"sl2-{i}", random_sl2(rng), random_sl2(rng)))
    return samples


def _expected(label: str, g1: Matrix, g2: Matrix) -> Rational:
    if label == "rank-one":
        return Rational(1)
    if g2.det() == 1:
        return (g1 * g2.inv()).trace()
    return family_coordinate(g1, g2)


def family_coordinate_check(samples: Optional[Iterable[Tuple[str, object, object]]] = None) -> CoordinateReport:
    """
    Check C against the trace map on SL2 pairs, the rank-one pair and zero.

    Args:
        samples: (label, g1, g2) triples; twenty random SL2(Q) pairs and the three
            distinguished ones when omitted.
    """
    samples = default_samples() if samples is None else samples
    out = []
    for label, g1, g2 in samples:
        g1, g2 = as_matrix(g1), as_matrix(g2)
        inverse_ok = None
        if g2.det() == 1:
            inverse_ok = W * g2.T * W.inv() == g2.inv()
        value = family_coordinate(g1, g2)
        expected = Rational(0) if label == "zero" else _expected(label, g1, g2)
        out.append(CoordinateSample(label, value, expected, inverse_ok))
    report = CoordinateReport(tuple(out))
    logger.debug(f"family coordinate on {len(out)} pairs, {len(report.failures())} failures")
    return report
