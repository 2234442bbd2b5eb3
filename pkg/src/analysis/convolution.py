"""
Multiplicative Fourier convolutions f -> f * k_*(chi(x) |x|^s psi(x) d^x x).

Two independent routes are provided. The spectral route multiplies the Mellin transform of f
by the gamma factor of the kernel. The shell route integrates shell by shell: exact shell
masses for unit-invariant inputs and unramified kernels with k = +-1 (tails are summed in
closed form), and an exact coset-by-coset enumeration in the numeric regime otherwise.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from ..arith import (
    Q,
    Z,
    InsufficientPrecision,
    NonSummableTail,
    PoleHit,
    RatFunc,
    Scalar,
    SymbolicRamified,
    SymbolicRegime,
    UnrecognizedPoleStructure,
    ZeroDenominator,
    normalize_scalar,
    scalar_to_json,
)
from ..fields import (
    MultChar,
    PAdicContext,
    UnitCoset,
    char_power,
    gauss_sum,
    iter_shell_cosets,
    psi_angle,
    unit_part,
    unit_residues,
    unitcoset_volume,
    valuation,
)
from ..measures import AT_INFINITY, ExtendedMeasure, SchwartzMeasureGm, TailGerm, as_extended
from .mellin import (
    SIDE_INFINITY,
    SIDE_ZERO,
    GeometricSeries,
    MellinComponent,
    MellinData,
    geometric_closed_form,
    mellin,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvolutionKernel:
    """
    The kernel k_*(chi(x) |x|^s psi(x) d^x x).

    Attributes:
        power: The cocharacter x -> x^k, k != 0.
        twist: The character chi.
        u: The exponent slot q^-s.
    """

    power: int
    twist: MultChar
    u: Scalar = field(default=Fraction(1))

    def __post_init__(self) -> None:
        if self.power == 0:
            raise ValueError("the cocharacter power must be non-zero")
        object.__setattr__(self, "u", normalize_scalar(self.u))

    @property
    def p(self) -> int:
        return self.twist.p

    @classmethod
    def standard(cls, p: int, power: int = 1, s: int = 0, ctx: Optional[PAdicContext] = None) -> "ConvolutionKernel":
        """The kernel with trivial twist and an integral exponent s."""
        q = ctx.q if ctx is not None else Q
        return cls(power, MultChar.trivial(p), q ** (-s))

    @property
    def unramified(self) -> bool:
        return not self.twist.ramified

    def eta(self, tame: Tuple[Fraction, ...]) -> MultChar:
        """The tame type of chi'^k chi^{-1} on the component of chi'."""
        chi = char_power(MultChar(self.p, tame, Fraction(1)), self.power)
        return chi * MultChar(self.p, self.twist.angles, Fraction(1)).inverse()

    def to_dict(self) -> dict:
        return {"k": self.power, "twist": self.twist.to_dict(), "u": scalar_to_json(self.u)}


def shell_integral(chi: MultChar, m: int, xi: Union[int, Fraction], ctx: PAdicContext) -> Scalar:
    """
    int_{|x| = q^-m} chi(x) psi(x xi) d^x x.

    With v = m + v(xi): for unramified chi the value is z^m times 1 - q^-1 (v >= 0), -q^-1
    (v = -1) or 0; for chi of conductor n it vanishes unless v = -n and is then a Gauss sum.

    Raises:
        InsufficientPrecision: If the conductor exceeds k_max.
    """
    v = m + valuation(xi, chi.p)
    n = chi.conductor
    ctx.check_level(n)
    base = chi.z**m
    if n == 0:
        if v >= 0:
            return normalize_scalar(base * (1 - 1 / ctx.q))
        if v == -1:
            return normalize_scalar(-base / ctx.q)
        return Fraction(0)
    if v != -n:
        return Fraction(0)
    return base * ctx.q ** (-n) * gauss_sum(chi, ctx, unit_part(xi, chi.p))


# spectral route


def kernel_multiplier_symbolic(kernel: ConvolutionKernel, tame, ctx: PAdicContext) -> Tuple[RatFunc, Tuple]:
    """gamma(chi'^k chi^{-1}, 1 - s, psi) as a function of z, with the side of its pole."""
    eta = kernel.eta(tame)
    if eta.ramified:
        raise SymbolicRamified(f"component {tame} meets the kernel in a ramified character")
    k = kernel.power
    a = kernel.twist.z * kernel.u
    value = (1 - Z**k / (ctx.q * a)) / (1 - a * Z ** (-k))
    sides: Tuple = ()
    if k == 1:
        sides = ((normalize_scalar(a), SIDE_INFINITY),)
    elif k == -1:
        sides = ((normalize_scalar(1 / a), SIDE_ZERO),)
    return value, sides


def kernel_multiplier_numeric(kernel: ConvolutionKernel, tame, ctx: PAdicContext) -> MellinComponent:
    """The same multiplier as a Laurent monomial plus a geometric series in z^k."""
    eta = kernel.eta(tame)
    k = kernel.power
    a = kernel.twist.z * kernel.u
    q = ctx.q
    n = eta.conductor
    if n:
        ctx.check_level(n)
        g = gauss_sum(eta.inverse(), ctx)
        return MellinComponent(tame, laurent=((k * n, (1 / (a * q)) ** n * g),))
    side = SIDE_INFINITY if k > 0 else SIDE_ZERO
    series = GeometricSeries(1 - 1 / q, a, 0, 0, side, 0, abs(k))
    return MellinComponent(tame, laurent=((k, normalize_scalar(-1 / (q * a))),), series=(series,))


def _merge_sides(first, second) -> Tuple:
    out = list(first)
    for loc, side in second:
        for known, known_side in first:
            if known == loc and known_side != side:
                raise NonSummableTail(f"pole at z={loc} is approached from both sides")
        out.append((loc, side))
    return tuple(out)


def _multiply_numeric(comp: MellinComponent, mult: MellinComponent) -> MellinComponent:
    if comp.series and mult.series:
        raise UnrecognizedPoleStructure("numeric product of two geometric series")
    laurent: Dict[int, Scalar] = {}
    for e1, c1 in comp.laurent:
        for e2, c2 in mult.laurent:
            laurent[e1 + e2] = laurent.get(e1 + e2, Fraction(0)) + c1 * c2
    series: List[GeometricSeries] = []
    for e, c in comp.laurent:
        series.extend(s.shifted(e, c) for s in mult.series)
    for e, c in mult.laurent:
        series.extend(s.shifted(e, c) for s in comp.series)
    return MellinComponent(
        comp.tame,
        laurent=tuple(sorted((e, normalize_scalar(c)) for e, c in laurent.items())),
        series=tuple(series),
    )


def apply_kernel(data: MellinData, kernel: ConvolutionKernel, ctx: PAdicContext) -> MellinData:
    """Multiply every component of a Mellin transform by the multiplier of a kernel."""

    def _apply(comp: MellinComponent) -> MellinComponent:
        if comp.symbolic:
            value, sides = kernel_multiplier_symbolic(kernel, comp.tame, ctx)
            return MellinComponent(comp.tame, value=comp.value * value, sides=_merge_sides(comp.sides, sides))
        return _multiply_numeric(comp, kernel_multiplier_numeric(kernel, comp.tame, ctx))

    return data.map_components(_apply)


def fourier_convolve_spectral(f, kernel: ConvolutionKernel, ctx: PAdicContext) -> MellinData:
    """
    The Mellin transform of the convolution: mellin(f) times the gamma multiplier.

    Raises:
        SymbolicRamified: If a component meets the kernel in a ramified character symbolically.
        NonSummableTail: If a pole of f coincides with a pole of the kernel on the other side.
    """
    return apply_kernel(mellin(f, ctx), kernel, ctx)


# shell route


def _shells_only(f: ExtendedMeasure) -> bool:
    return (
        not f.germs
        and f.compact.max_level() == 0
        and all(not t.eta.ramified for t in f.tails)
    )


def _kernel_shell_mass(kernel: ConvolutionKernel, c: int, ctx: PAdicContext) -> Scalar:
    j = kernel.power * c
    kappa = kernel.twist.z * kernel.u
    return normalize_scalar(kappa**j * shell_integral(MultChar.trivial(kernel.p), j, 1, ctx))


def _geometric_sum(log_power: int, start: int, ratio: Scalar) -> Scalar:
    try:
        return geometric_closed_form(log_power, start).evaluate({"z": ratio})
    except (PoleHit, ZeroDenominator, ZeroDivisionError):
        raise NonSummableTail(f"the shell series has ratio {ratio}") from None


def _tail_shell_mass(tail: TailGerm, a: int, kernel: ConvolutionKernel, ctx: PAdicContext) -> Scalar:
    vol = 1 - 1 / ctx.q
    c, rho, m = tail.coeff * vol, tail.eta.z, tail.log_power
    sigma = kernel.power
    kappa = kernel.twist.z * kernel.u

    def mass(b: int) -> Scalar:
        return c * Fraction(b) ** m * rho ** (-b)

    at_infinity = tail.end == AT_INFINITY
    if at_infinity != (sigma == 1):
        bs = range(a - 1, -tail.start + 1) if at_infinity else range(tail.start, a + 2)
        return sum((mass(b) * _kernel_shell_mass(kernel, a - b, ctx) for b in bs), Fraction(0))
    boundary = a + sigma
    total: Scalar = Fraction(0)
    if tail.covers(boundary):
        total = mass(boundary) * _kernel_shell_mass(kernel, a - boundary, ctx)
    if at_infinity:
        tail_sum = _geometric_sum(m, max(-a, tail.start), rho * kappa)
        return total + c * (-1) ** m * kappa**a * vol * tail_sum
    tail_sum = _geometric_sum(m, max(a, tail.start), kappa / rho)
    return total + c * kappa ** (-a) * vol * tail_sum


def _convolve_masses(f: ExtendedMeasure, kernel: ConvolutionKernel, window: List[int], ctx: PAdicContext) -> SchwartzMeasureGm:
    masses = f.compact.shell_masses(ctx)
    out: Dict[int, Scalar] = {}
    for a in window:
        total: Scalar = Fraction(0)
        for b, mb in masses.items():
            total = total + mb * _kernel_shell_mass(kernel, a - b, ctx)
        for tail in f.tails:
            total = total + _tail_shell_mass(tail, a, kernel, ctx)
        out[a] = normalize_scalar(total)
    return SchwartzMeasureGm.from_shell_masses(f.p, out, ctx)


class _KernelCosets:
    """Kernel masses of unit cosets, memoized per coset."""

    def __init__(self, kernel: ConvolutionKernel, ctx: PAdicContext) -> None:
        self.kernel = kernel
        self.ctx = ctx
        self._cache: Dict[UnitCoset, complex] = {}

    def __call__(self, coset: UnitCoset) -> complex:
        if coset not in self._cache:
            self._cache[coset] = self._compute(coset)
        return self._cache[coset]

    def _compute(self, coset: UnitCoset) -> complex:
        k, chi, p = self.kernel.power, self.kernel.twist, self.kernel.p
        if coset.valuation % k:
            return 0j
        v = coset.valuation // k
        scale = complex((chi.z * self.kernel.u) ** v)
        level = max(coset.level, chi.conductor, -v, 0)
        if level == 0:
            return scale * float(1 - Fraction(1, p))
        self.ctx.check_level(level)
        residues = [
            r for r in unit_residues(p, level)
            if coset.level == 0 or pow(r, k, p**coset.level) == coset.unit_residue
        ]
        if not residues:
            return 0j
        angles = np.array(
            [float(chi.tame_angle(r) + psi_angle(Fraction(p) ** v * r, p)) for r in residues]
        )
        return scale * complex(np.exp(2j * np.pi * angles).sum()) / p**level


def _convolve_cosets(
    f: SchwartzMeasureGm, kernel: ConvolutionKernel, window: List[int], level: int, ctx: PAdicContext
) -> SchwartzMeasureGm:
    kernel_mass = _KernelCosets(kernel, ctx)
    pieces = [
        (piece.representative(), coeff * unitcoset_volume(piece, ctx))
        for piece, coeff in f.refined(level)
    ]
    terms = []
    for a in window:
        for target in iter_shell_cosets(a, level, f.p):
            total = 0j
            for rep, mass in pieces:
                total += complex(mass) * kernel_mass(target.translate(1 / rep))
            terms.append((target, total / complex(unitcoset_volume(target, ctx))))
    return SchwartzMeasureGm.from_terms(f.p, terms)


def default_level(f: SchwartzMeasureGm, kernel: ConvolutionKernel) -> int:
    p, k = f.p, kernel.power
    level = max(f.max_level(), kernel.twist.conductor) + valuation(k, p)
    if p == 2 and k % 2 == 0:
        level += 1
    return level


def fourier_convolve_shell(
    f,
    kernel: ConvolutionKernel,
    window: Iterable[int],
    ctx: PAdicContext,
    level: Optional[int] = None,
) -> ExtendedMeasure:
    """
    The convolution restricted to the shells of a window, by direct integration.

    Unit-invariant inputs under unramified kernels with k = +-1 are handled through exact
    shell masses, with tails summed as rational functions. Everything else is integrated
    coset by coset in the numeric regime; the level is raised until refining once more no
    longer changes the result.

    Raises:
        NonSummableTail: If a tail series diverges at ratio one.
        SymbolicRegime: If the coset route is needed in the symbolic regime.
        InsufficientPrecision: If no stable level exists within k_max.
    """
    f = as_extended(f)
    window = list(window)
    if kernel.unramified and abs(kernel.power) == 1 and _shells_only(f):
        logger.debug(f"shell route by masses on {len(window)} shells")
        return ExtendedMeasure.of(_convolve_masses(f, kernel, window, ctx))
    if ctx.symbolic:
        raise SymbolicRegime("this convolution needs the numeric coset route")
    if f.tails:
        raise ValueError("tails are only summed for unit-invariant inputs under k = +-1 kernels")
    compact = f.compact
    for germ in f.germs:
        compact = compact + germ.realize(ctx)
    current = default_level(compact, kernel) if level is None else level
    result = _convolve_cosets(compact, kernel, window, current, ctx)
    if level is not None:
        return ExtendedMeasure.of(result)
    while True:
        if current + 1 > ctx.k_max:
            raise InsufficientPrecision(f"no stable level up to k_max={ctx.k_max}")
        finer = _convolve_cosets(compact, kernel, window, current + 1, ctx)
        if finer.equals(result):
            logger.debug(f"coset route stable at level {current}")
            return ExtendedMeasure.of(result)
        current, result = current + 1, finer


def vanishing_bound(f: SchwartzMeasureGm, kernel: ConvolutionKernel) -> Tuple[str, int]:
    """
    Where the convolution of a Schwartz measure vanishes: ("below", M) means no mass on shells
    a < M, ("above", M) no mass on shells a > M.
    """
    reach = abs(kernel.power) * max(1, kernel.twist.conductor)
    shells = f.shells()
    if not shells:
        return ("below", 0)
    if kernel.power > 0:
        return ("below", shells[0] - reach)
    return ("above", shells[-1] + reach)
