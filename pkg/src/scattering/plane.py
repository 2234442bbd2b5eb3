"""
Fourier transform, Radon transform and Jacquet integral on the plane V = F^2.

V carries the symplectic form w((x1, y1), (x2, y2)) = x1 y2 - y1 x2 and the Haar measure
dx dy. Schwartz functions are finite sums of product-ball indicators, stored on a common
level so that the cells are disjoint. Every transform is summed exactly:

    F phi(v*) = integral of phi(v) psi(w(v, v*)) dv
    R phi(v) = integral of phi(u1 - z v) dz, for any u1 with w(u1, v) = 1
    J W(v) = the same line integral of a Whittaker section W.

Whittaker sections live on pairs (u, v) with w(u, v) = 1 and satisfy
W(u, v - x u) = psi(x) W(u, v). They are stored through a section u -> (u, s(u)),
with s(u) = (0, 1/u_x) on cells away from u_x = 0 and s(u) = (-1/u_y, 0) otherwise.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from ..arith import (
    NUMERIC,
    Scalar,
    deviation,
    format_scalar,
    is_zero,
    normalize_scalar,
    scalar_from_json,
    scalar_to_json,
    scalars_equal,
)
from ..fields import Ball, MultChar, PAdicContext, gamma_factor, psi_eval, unit_residues, valuation

logger = logging.getLogger(__name__)

Rat = Union[int, Fraction]
Point = Tuple[Fraction, Fraction]
Cell = Tuple[Ball, Ball, Scalar]

CELL_TOLERANCE = 1e-12


def as_point(v: Sequence[Rat]) -> Point:
    x, y = v
    return Fraction(x), Fraction(y)


def omega(v: Sequence[Rat], w: Sequence[Rat]) -> Fraction:
    (x1, y1), (x2, y2) = as_point(v), as_point(w)
    return x1 * y2 - y1 * x2


def norm_exponent(v: Sequence[Rat], p: int) -> int:
    """The s with |v| = q^s, for non-zero v."""
    coords = [c for c in as_point(v) if c != 0]
    if not coords:
        raise ValueError("the zero vector has no norm exponent")
    return max(-valuation(c, p) for c in coords)


def line_section(v: Sequence[Rat], p: int) -> Point:
    """A point u1 with w(u1, v) = 1 and |u1| = 1/|v|."""
    a, b = as_point(v)
    if b != 0 and (a == 0 or valuation(b, p) <= valuation(a, p)):
        return 1 / b, Fraction(0)
    if a == 0:
        raise ValueError("the zero vector has no horocycle")
    return Fraction(0), -1 / a


def _ball_radius(ball: Ball) -> int:
    if ball.center == 0:
        return -ball.level
    return max(-ball.level, -valuation(ball.center, ball.p))


def _numeric(p: int, ctx: Optional[PAdicContext]) -> PAdicContext:
    return PAdicContext(p, 6, NUMERIC) if ctx is None else ctx


@dataclass(frozen=True)
class PlaneFunction:
    """
    A locally constant, compactly supported function on F^2.

    Attributes:
        p: The prime.
        cells: (x-ball, y-ball, value) triples on one common level, pairwise disjoint.
    """

    p: int
    cells: Tuple[Cell, ...] = ()

    @classmethod
    def from_terms(cls, p: int, terms: Iterable[Cell]) -> "PlaneFunction":
        """Sum product-ball indicators, refining them to the finest level among them."""
        terms = [(bx, by, c) for bx, by, c in terms if not is_zero(c, CELL_TOLERANCE)]
        if not terms:
            return cls(p)
        level = max(max(bx.level, by.level) for bx, by, _ in terms)
        acc = {}
        for bx, by, c in terms:
            for x in bx.refine(level):
                for y in by.refine(level):
                    acc[(x, y)] = acc.get((x, y), Fraction(0)) + c
        cells = [(x, y, normalize_scalar(c)) for (x, y), c in acc.items() if not is_zero(c, CELL_TOLERANCE)]
        return cls(p, tuple(sorted(cells, key=lambda cell: (cell[0], cell[1]))))

    @classmethod
    def indicator(
        cls, p: int, x: Rat = 0, x_level: int = 0, y: Rat = 0, y_level: int = 0, coeff: Scalar = Fraction(1)
    ) -> "PlaneFunction":
        return cls.from_terms(p, [(Ball.make(x, x_level, p), Ball.make(y, y_level, p), coeff)])

    @classmethod
    def zero(cls, p: int) -> "PlaneFunction":
        return cls(p)

    def is_zero(self) -> bool:
        return not self.cells

    @property
    def level(self) -> int:
        """The common level of the cells."""
        return self.cells[0][0].level if self.cells else 0

    @property
    def radius(self) -> int:
        """The least r with the support inside (p^-r o)^2."""
        if not self.cells:
            return 0
        return max(max(_ball_radius(bx), _ball_radius(by)) for bx, by, _ in self.cells)

    def value_at(self, x: Rat, y: Rat) -> Scalar:
        for bx, by, c in self.cells:
            if bx.contains(x) and by.contains(y):
                return c
        return Fraction(0)

    def integral(self) -> Scalar:
        q = Fraction(self.p)
        return normalize_scalar(sum((c * q ** (-bx.level - by.level) for bx, by, c in self.cells), Fraction(0)))

    def __add__(self, other: "PlaneFunction") -> "PlaneFunction":
        return PlaneFunction.from_terms(self.p, self.cells + other.cells)

    def scale(self, c: Scalar) -> "PlaneFunction":
        return PlaneFunction.from_terms(self.p, [(bx, by, c * v) for bx, by, v in self.cells])

    def __neg__(self) -> "PlaneFunction":
        return self.scale(Fraction(-1))

    def __sub__(self, other: "PlaneFunction") -> "PlaneFunction":
        return self + (-other)

    def reflect(self) -> "PlaneFunction":
        """v -> phi(-v)."""
        return self.dilate(-1)

    def dilate(self, a: Rat) -> "PlaneFunction":
        """v -> phi(a v)."""
        a = Fraction(a)
        if a == 0:
            raise ValueError("dilation by zero")
        shift = valuation(a, self.p)
        return PlaneFunction.from_terms(
            self.p,
            [
                (Ball.make(bx.center / a, bx.level - shift, self.p), Ball.make(by.center / a, by.level - shift, self.p), c)
                for bx, by, c in self.cells
            ],
        )

    def act(self, a: Rat) -> "PlaneFunction":
        """The normalized action a.phi(v) = |a| phi(a v)."""
        a = Fraction(a)
        return self.dilate(a).scale(Fraction(self.p) ** (-valuation(a, self.p)))

    def equals(self, other: "PlaneFunction", tolerance: float = 1e-9) -> bool:
        return all(is_zero(c, tolerance) for _, _, c in (self - other).cells)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "cells": [{"x": bx.to_dict(), "y": by.to_dict(), "c": scalar_to_json(c)} for bx, by, c in self.cells],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PlaneFunction":
        p = int(data["p"])
        return cls.from_terms(
            p,
            [
                (Ball.from_dict(row["x"], p), Ball.from_dict(row["y"], p), scalar_from_json(row["c"]))
                for row in data["cells"]
            ],
        )


def cell_basis(p: int, level: int) -> List[PlaneFunction]:
    """The indicators of the product balls of one level inside o^2."""
    balls = Ball.make(0, 0, p).refine(max(level, 0))
    return [PlaneFunction.from_terms(p, [(bx, by, Fraction(1))]) for bx in balls for by in balls]


# Fourier transform


def _dual_balls(ball: Ball) -> List[Ball]:
    # psi(center * xi) is constant on these, and the transform of the ball is supported on their union
    level = -ball.level if ball.center == 0 else max(-ball.level, -valuation(ball.center, ball.p))
    return Ball.make(0, -ball.level, ball.p).refine(level)


def fourier_2d(phi: PlaneFunction, psi_sign: int = 1, ctx: Optional[PAdicContext] = None) -> PlaneFunction:
    """
    The symplectic Fourier transform with the character psi^psi_sign.

    The transform of bx x by is q^-(lx + ly) psi(cx y* - cy x*) on (p^-ly o) x (p^-lx o), so the
    axes are swapped. With one psi the transform is an involution; with opposite signs
    the composite is the reflection v -> -v.

    Raises:
        InsufficientPrecision: If an output cell is finer than ctx allows.
        SymbolicRootOfUnity: If a phase is not real in the symbolic regime.
    """
    ctx = _numeric(phi.p, ctx)
    q = Fraction(phi.p)
    terms = []
    for bx, by, c in phi.cells:
        weight = c * q ** (-bx.level - by.level)
        for ys in _dual_balls(bx):
            for xs in _dual_balls(by):
                ctx.check_level(max(xs.level, ys.level))
                phase = psi_eval(bx.center * ys.center - by.center * xs.center, ctx, psi_sign)
                terms.append((xs, ys, weight * phase))
    out = PlaneFunction.from_terms(phi.p, terms)
    logger.debug(f"fourier transform of {len(phi.cells)} cells into {len(out.cells)}")
    return out


def fourier_value(phi: PlaneFunction, at: Sequence[Rat], psi_sign: int = 1, ctx: Optional[PAdicContext] = None) -> Scalar:
    """F phi at one point, without building the transform."""
    ctx = _numeric(phi.p, ctx)
    xs, ys = as_point(at)
    q = Fraction(phi.p)
    total: Scalar = Fraction(0)
    for bx, by, c in phi.cells:
        if ys != 0 and valuation(ys, phi.p) < -bx.level:
            continue
        if xs != 0 and valuation(xs, phi.p) < -by.level:
            continue
        phase = psi_eval(bx.center * ys - by.center * xs, ctx, psi_sign)
        total = total + c * q ** (-bx.level - by.level) * phase
    return normalize_scalar(total)


# Radon transform


def _axis_region(base: Fraction, step: Fraction, ball: Ball) -> Union[Ball, bool]:
    """The z with base + z step in ball: a ball, or True / False when step = 0."""
    if step == 0:
        return ball.contains(base)
    return Ball.make((ball.center - base) / step, ball.level - valuation(step, ball.p), ball.p)


def line_region(base: Sequence[Rat], direction: Sequence[Rat], bx: Ball, by: Ball) -> Optional[Ball]:
    """
    The parameters z with base + z direction in bx x by.

    Returns:
        A ball, or None when the line misses the cell.
    """
    base, direction = as_point(base), as_point(direction)
    regions = [_axis_region(b, d, ball) for b, d, ball in zip(base, direction, (bx, by))]
    if any(r is False for r in regions):
        return None
    balls = [r for r in regions if isinstance(r, Ball)]
    if not balls:
        raise ValueError("the direction of a line must be non-zero")
    ordered = sorted(balls, key=lambda b: b.level)
    coarse, fine = ordered[0], ordered[-1]
    return fine if coarse.contains(fine.center) else None


def line_integral(phi: PlaneFunction, base: Sequence[Rat], direction: Sequence[Rat]) -> Scalar:
    """The integral of phi(base + z direction) dz."""
    q = Fraction(phi.p)
    total: Scalar = Fraction(0)
    for bx, by, c in phi.cells:
        region = line_region(base, direction, bx, by)
        if region is not None:
            total = total + c * q ** (-region.level)
    return normalize_scalar(total)


def radon_2d(phi: PlaneFunction, at: Sequence[Rat]) -> Scalar:
    """
    R phi at a non-zero v: the integral of phi over the horocycle {u : w(u, v) = 1}.

    The horocycle is parametrized by z -> u1 - z v with the Haar measure dz.
    """
    a, b = as_point(at)
    u1 = line_section((a, b), phi.p)
    return line_integral(phi, u1, (-a, -b))


@dataclass(frozen=True)
class ExchangeCheck:
    """Both sides of an exchange relation at one point."""

    at: Tuple[Point, ...]
    lhs: Scalar
    rhs: Scalar
    tolerance: float = 1e-9

    @property
    def passed(self) -> bool:
        return scalars_equal(self.lhs, self.rhs, self.tolerance)

    @property
    def deviation(self) -> float:
        return deviation(self.lhs, self.rhs)

    def to_row(self) -> List[str]:
        label = " ".join(f"({x},{y})" for x, y in self.at)
        return [label, format_scalar(self.lhs), format_scalar(self.rhs), str(self.passed)]


def radon_fourier_rhs(phi: PlaneFunction, at: Sequence[Rat], ctx: Optional[PAdicContext] = None) -> Scalar:
    """
    The integral of R(a.phi)(v) psi(a) |a| d^x a, summed shell by shell.

    Shells with |a| > |v| q^radius carry nothing. Once |a u1| <= q^-level the integrand is
    the constant integral of phi over the line through 0, and the remaining integral of psi
    over p^K o is q^-K.
    """
    ctx = _numeric(phi.p, ctx)
    v = as_point(at)
    p, q = phi.p, Fraction(phi.p)
    if phi.is_zero():
        return Fraction(0)
    s = norm_exponent(v, p)
    deep = max(0, phi.level - s)
    total: Scalar = Fraction(0)
    for k in range(-phi.radius - s, deep):
        for r in unit_residues(p, deep - k):
            a = q**k * r
            total = total + q ** (-deep) * radon_2d(phi.act(a), v) * psi_eval(a, ctx)
    total = total + q ** (-deep) * radon_2d(phi.act(q**deep), v)
    return normalize_scalar(total)


def verify_radon_fourier(
    phi: PlaneFunction, points: Iterable[Sequence[Rat]], ctx: Optional[PAdicContext] = None, tolerance: float = 1e-9
) -> List[ExchangeCheck]:
    """Compare F phi(v) with the shell sum of Radon transforms at each point."""
    ctx = _numeric(phi.p, ctx)
    checks = []
    for v in points:
        v = as_point(v)
        checks.append(ExchangeCheck((v,), fourier_value(phi, v, 1, ctx), radon_fourier_rhs(phi, v, ctx), tolerance))
    logger.debug(f"radon-fourier relation at {len(checks)} points")
    return checks


# Mellin transforms along a ray


def _ray_average(fn, p: int, k: int, v: Point, level: int) -> Scalar:
    residues = unit_residues(p, level)
    scale = Fraction(p) ** k
    total: Scalar = Fraction(0)
    for r in residues:
        total = total + fn(scale * r * v[0], scale * r * v[1])
    return total / len(residues)


def fourier_mellin(phi: PlaneFunction, at: Sequence[Rat], z: Scalar, ctx: Optional[PAdicContext] = None) -> Scalar:
    """
    The integral of |t| F phi(t v) chi^-1(t) d^x t for unramified chi with chi(p) = z.

    Converges for |z| > 1/q.
    """
    ctx = _numeric(phi.p, ctx)
    fphi = fourier_2d(phi, 1, ctx)
    if fphi.is_zero():
        return Fraction(0)
    p, q = phi.p, Fraction(phi.p)
    v = as_point(at)
    s = norm_exponent(v, p)
    start, deep = s - fphi.radius, s + fphi.level
    total: Scalar = Fraction(0)
    for k in range(start, deep):
        level = max(1, fphi.level + s - k)
        total = total + (1 - 1 / q) * (q * z) ** (-k) * _ray_average(fphi.value_at, p, k, v, level)
    tail = (1 - 1 / q) * fphi.value_at(0, 0) * (q * z) ** (-deep) / (1 - 1 / (q * z))
    return normalize_scalar(total + tail)


def radon_mellin(phi: PlaneFunction, at: Sequence[Rat], z: Scalar) -> Scalar:
    """
    The integral of |t|^-1 R phi(t^-1 v) chi(t) d^x t for unramified chi with chi(p) = z.

    Converges for |z| < 1; far out R phi(w) = |w / v|^-1 times the integral of phi over
    the line through 0 and v.
    """
    if phi.is_zero():
        return Fraction(0)
    p, q = phi.p, Fraction(phi.p)
    v = as_point(at)
    s = norm_exponent(v, p)
    start, deep = -phi.radius - s, phi.level - s

    def radon(x: Fraction, y: Fraction) -> Scalar:
        return radon_2d(phi, (x, y))

    total: Scalar = Fraction(0)
    for k in range(start, deep):
        level = max(1, phi.level - s - k)
        total = total + (1 - 1 / q) * (q * z) ** k * _ray_average(radon, p, -k, v, level)
    through_zero = line_integral(phi, (0, 0), v)
    tail = (1 - 1 / q) * through_zero * z**deep / (1 - z)
    return normalize_scalar(total + tail)


@dataclass(frozen=True)
class SpectralSample:
    """F_chi against gamma(chi, 0, psi) R_chi at one unramified parameter."""

    z: complex
    fourier: Scalar
    radon: Scalar
    gamma: Scalar
    tolerance: float = 1e-9

    @property
    def passed(self) -> bool:
        scale = max(1.0, abs(complex(self.fourier)))
        return abs(complex(self.fourier) - complex(self.gamma) * complex(self.radon)) <= self.tolerance * scale

    def to_row(self) -> List[str]:
        return [format_scalar(self.z), format_scalar(self.fourier), format_scalar(self.radon), str(self.passed)]


def radon_fourier_spectral(
    phi: PlaneFunction,
    at: Sequence[Rat],
    samples: Iterable[complex],
    ctx: Optional[PAdicContext] = None,
    tolerance: float = 1e-9,
) -> List[SpectralSample]:
    """
    Check F_chi = gamma(chi, 0, psi) R_chi along the ray through v.

    Args:
        samples: Values chi(p) in the annulus 1/q < |z| < 1 where both transforms converge.
    """
    ctx = _numeric(phi.p, ctx)
    out = []
    for z in samples:
        z = complex(z)
        if not 1 / phi.p < abs(z) < 1:
            raise ValueError(f"z={z} lies outside the common domain of convergence")
        gamma = gamma_factor(MultChar.unramified(phi.p, z), Fraction(1), ctx).value
        out.append(SpectralSample(z, fourier_mellin(phi, at, z, ctx), radon_mellin(phi, at, z), gamma, tolerance))
    return out


# Whittaker sections and the Jacquet integral


@dataclass(frozen=True)
class WhittakerPlaneFunction:
    """
    A compactly supported Whittaker section, through its values W(u, s(u)) on cells of V - 0.

    Attributes:
        base: The values on the section; no cell may contain the origin.
    """

    base: PlaneFunction

    def __post_init__(self) -> None:
        for bx, by, _ in self.base.cells:
            if bx.contains(0) and by.contains(0):
                raise ValueError("a Whittaker section is stored away from the origin")

    @property
    def p(self) -> int:
        return self.base.p

    @staticmethod
    def branch(bx: Ball) -> str:
        """``x`` where the section is (0, 1/u_x), ``y`` where it is (-1/u_y, 0)."""
        return "y" if bx.contains(0) else "x"

    def value(self, u: Sequence[Rat], w: Sequence[Rat], ctx: Optional[PAdicContext] = None) -> Scalar:
        """W(u, w) for w(u, w) = 1."""
        ctx = _numeric(self.p, ctx)
        u, w = as_point(u), as_point(w)
        if omega(u, w) != 1:
            raise ValueError("the pair is not on the torsor")
        for bx, by, c in self.base.cells:
            if bx.contains(u[0]) and by.contains(u[1]):
                x = -w[0] / u[0] if self.branch(bx) == "x" else -w[1] / u[1]
                return normalize_scalar(c * psi_eval(x, ctx))
        return Fraction(0)


def jacquet_integral(wf: WhittakerPlaneFunction, at: Sequence[Rat], ctx: Optional[PAdicContext] = None) -> Scalar:
    """
    J W(v): the integral of W(u1 - z v, v) dz.

    On a cell of branch x the phase is psi(-v_x / u_x), constant on z-balls of level
    2 v(u_x) - 2 v(v_x); the region is split to that level and summed.
    """
    ctx = _numeric(wf.p, ctx)
    v = as_point(at)
    p, q = wf.p, Fraction(wf.p)
    u1 = line_section(v, p)
    direction = (-v[0], -v[1])
    total: Scalar = Fraction(0)
    for bx, by, c in wf.base.cells:
        region = line_region(u1, direction, bx, by)
        if region is None:
            continue
        axis = 0 if wf.branch(bx) == "x" else 1
        step = v[axis]
        if step == 0:
            total = total + c * q ** (-region.level)
            continue
        ball = bx if axis == 0 else by
        level = max(region.level, 2 * valuation(ball.center, p) - 2 * valuation(step, p))
        ctx.check_level(level)
        for sub in region.refine(level):
            coord = u1[axis] - sub.center * step
            total = total + c * q ** (-level) * psi_eval(-step / coord, ctx)
    return normalize_scalar(total)


def jacquet_adjoint(phi: PlaneFunction, v: Sequence[Rat], u: Sequence[Rat], ctx: Optional[PAdicContext] = None) -> Scalar:
    """J* phi(v, u) = the integral of phi(u - z v) psi(z) dz, for w(v, u) = 1."""
    ctx = _numeric(phi.p, ctx)
    v, u = as_point(v), as_point(u)
    if omega(v, u) != 1:
        raise ValueError("the pair is not on the torsor")
    q = Fraction(phi.p)
    total: Scalar = Fraction(0)
    for bx, by, c in phi.cells:
        region = line_region(u, (-v[0], -v[1]), bx, by)
        if region is None or region.level < 0:
            continue
        total = total + c * q ** (-region.level) * psi_eval(region.center, ctx)
    return normalize_scalar(total)


def torsor_point(v: Sequence[Rat]) -> Tuple[Point, Point]:
    """A pair (v, u) with w(v, u) = 1."""
    a, b = as_point(v)
    if a != 0:
        return (a, b), (Fraction(0), 1 / a)
    if b == 0:
        raise ValueError("the zero vector is not on the torsor")
    return (a, b), (-1 / b, Fraction(0))


def default_points(p: int) -> List[Point]:
    """Points of V - 0 with |v| <= q."""
    inv = Fraction(1, p)
    return [as_point(v) for v in [(1, 0), (0, 1), (1, 1), (inv, 0), (0, inv), (inv, 1), (2, inv), (p, 1)]]


def verify_jacquet_fourier(
    phi: PlaneFunction,
    points: Optional[Iterable[Sequence[Rat]]] = None,
    ctx: Optional[PAdicContext] = None,
    tolerance: float = 1e-9,
) -> List[ExchangeCheck]:
    """
    Check F o J = J in its adjoint form J* o F* = J*, F* built with psi^-1.

    Both sides are finite sums for compactly supported phi.
    """
    ctx = _numeric(phi.p, ctx)
    dual = fourier_2d(phi, -1, ctx)
    checks = []
    for point in points if points is not None else default_points(phi.p):
        v, u = torsor_point(point)
        checks.append(ExchangeCheck((v, u), jacquet_adjoint(dual, v, u, ctx), jacquet_adjoint(phi, v, u, ctx), tolerance))
    logger.debug(f"jacquet-fourier relation at {len(checks)} points")
    return checks
