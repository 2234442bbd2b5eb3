"""
The verification suites behind the command line.

Each suite builds a ``Report`` whose rows compare two independent evaluations of the same
quantity and name the route of each side.
"""

import cmath
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .analysis import (
    ConvolutionKernel,
    check_zeta_residue,
    fourier_convolve_shell,
    fourier_convolve_spectral,
    inverse_mellin,
    mellin,
    verify_functional_equation,
)
from .arith import (
    NUMERIC,
    SYMBOLIC,
    U,
    Z,
    InvalidCharacter,
    OutsideHeckeFamily,
    Scalar,
    deviation,
    format_scalar,
    normalize_scalar,
    scalars_equal,
)
from .fields import Ball, MultChar, PAdicContext, all_characters, gamma_factor, gauss_sum, unit_residues
from .kuznetsov import (
    AD,
    BASIC,
    STD_PAIR,
    GroupTag,
    HeckeElement,
    basic_vector,
    bessel_character,
    hecke_act,
    load_germ,
    macdonald_spherical,
    std_pair_series,
    whittaker_series,
)
from .measures import AT_INFINITY, ExtendedMeasure, SchwartzMeasureGa, SchwartzMeasureGm, TailGerm
from .oracle import (
    gauss_sum_enumerated,
    kloosterman_sum,
    orbital_density,
    satake_by_enumeration,
    spherical_by_enumeration,
    trace_fiber_count,
)
from .scattering import (
    PlaneFunction,
    SphericalCase,
    cell_basis,
    gamma_duality,
    scattering_table,
    verify_boundary,
    verify_jacquet_fourier,
    verify_radon_fourier,
)
from .stable import (
    double_coset_decomposition,
    fundamental_lemma_check,
    stable_pairing,
    torus_multiplier,
    trace_pushforward,
    transfer_ball_mass,
    transfer_kuznetsov_to_stable,
    transfer_kuznetsov_to_torus_spectral,
)
from .tools import CLOSED_FORM, ORACLE, SPECTRAL, OracleCache, Report, RunConfig, default_cache

logger = logging.getLogger(__name__)

# unitary parameter and exponent slot of the numeric samples
SAMPLE_Z = 0.8 - 0.6j
SAMPLE_U = 0.37 + 0.2j

TATE_FAMILIES = ("balls", "mixed")
ORACLE_OPS = ("trace-fiber", "kloosterman", "gauss", "satake", "spherical")


def context(cfg: RunConfig, regime: Optional[str] = None) -> PAdicContext:
    return PAdicContext(cfg.prime, cfg.precision, regime or cfg.regime)


def _char_label(chi: MultChar) -> str:
    return f"n={chi.conductor} tame=({','.join(str(a) for a in chi.angles)})"


def _ball_label(ball: Ball) -> str:
    return f"{ball.center}+p^{ball.level}o"


def _measure_label(phi: SchwartzMeasureGa) -> str:
    return " ".join(f"{format_scalar(c)}*[{_ball_label(b)}]" for b, c in phi.terms) or "0"


def _compare(lhs: Scalar, rhs: Scalar, tolerance: float) -> bool:
    return scalars_equal(lhs, rhs, tolerance)


def _deviation(lhs: Scalar, rhs: Scalar) -> str:
    return f"{deviation(lhs, rhs):.3g}"


def _add_comparison(
    report: Report,
    labels: list,
    lhs: Scalar,
    rhs: Scalar,
    tolerance: float = 0.0,
    routes: Tuple[str, str] = (CLOSED_FORM, CLOSED_FORM),
) -> bool:
    """Append labels, both sides and their deviation; returns whether the sides agree."""
    passed = _compare(lhs, rhs, tolerance)
    cells = labels + [format_scalar(lhs), format_scalar(rhs), _deviation(lhs, rhs)]
    report.add(cells, passed, *routes)
    return passed


def load_measure(data: Optional[dict]) -> Optional[ExtendedMeasure]:
    """An extended measure from its JSON form, Kloosterman germs included."""
    if data is None:
        return None
    return ExtendedMeasure.from_dict(data, load_germ)


# gamma factors


def gamma_suite(cfg: RunConfig, conductor: int = 0, as_ratfunc: bool = False) -> Report:
    """
    gamma(chi, s, psi) with its L/epsilon decomposition, checked against the decomposition
    and against the duality gamma(chi, s, psi) gamma(chi^-1, 1 - s, psi^-1) = 1.

    Conductor zero is the unramified character, symbolic in z and u unless the regime is
    numeric; ramified characters of the given conductor are numeric.
    """
    report = Report("gamma", ["character", "gamma", "epsilon", "L numerator", "L denominator", "duality"])
    symbolic = conductor == 0 and (as_ratfunc or cfg.regime == SYMBOLIC)
    ctx = context(cfg, SYMBOLIC if symbolic else NUMERIC)
    if conductor == 0:
        chis = [MultChar.unramified(cfg.prime, Z if symbolic else SAMPLE_Z)]
    else:
        chis = [c for c in all_characters(cfg.prime, conductor, SAMPLE_Z) if c.conductor == conductor]
    u = U if symbolic else SAMPLE_U
    for chi in chis:
        g = gamma_factor(chi, u, ctx)
        decomposed = normalize_scalar(g.eps * g.l_num / g.l_den)
        duality = gamma_duality(chi, u, ctx)
        passed = _compare(g.value, decomposed, cfg.tolerance)
        passed = passed and _compare(duality, Fraction(1), cfg.tolerance)
        cells = [_char_label(chi), format_scalar(g.value), format_scalar(g.eps)]
        cells += [format_scalar(g.l_num), format_scalar(g.l_den), format_scalar(duality)]
        report.add(cells, passed, CLOSED_FORM, CLOSED_FORM)
    report.notes["u"] = format_scalar(u)
    return report


# Mellin transforms


def default_gm_measure(p: int) -> ExtendedMeasure:
    """The unit shell plus the tail d^x zeta on |zeta| >= 1."""
    tail = TailGerm(MultChar.trivial(p), 0, Fraction(1))
    return ExtendedMeasure(SchwartzMeasureGm.shell(p, 2, Fraction(5)), (tail,))


def mellin_suite(cfg: RunConfig, f: Optional[ExtendedMeasure] = None, window: int = 3) -> Report:
    """The Mellin transform of f and the shell masses of its inverse against those of f."""
    ctx = context(cfg)
    f = f or default_gm_measure(cfg.prime)
    data = mellin(f, ctx)
    back = inverse_mellin(data, ctx)
    report = Report("mellin", ["shell", "f", "inverse mellin", "deviation"])
    for v in range(-window, window + 1):
        lhs = f.shell_mass(v, ctx)
        rhs = back.shell_mass(v, ctx)
        _add_comparison(report, [v], lhs, rhs, cfg.tolerance, (CLOSED_FORM, SPECTRAL))
    for comp in data.components:
        if comp.symbolic:
            report.notes[f"mellin {comp.tame}"] = comp.value
            poles = [(format_scalar(pole.location), pole.order, pole.side) for pole in comp.poles()]
            report.notes[f"poles {comp.tame}"] = poles
    return report


# Tate's thesis


def tate_family(p: int, family: str, max_level: int) -> List[SchwartzMeasureGa]:
    """
    Ball indicators with |valuation| <= 3: the balls p^n o, and balls around p^v a for the
    first two unit residues a. The mixed family adds differences of neighbouring balls.
    """
    if family not in TATE_FAMILIES:
        raise ValueError(f"unknown family: {family}")
    balls = [SchwartzMeasureGa.ball(p, 0, n) for n in range(-3, max_level + 1)]
    for v in range(-3, min(3, max_level)):
        for a in unit_residues(p, 1)[:2]:
            for n in range(v + 1, max_level + 1):
                balls.append(SchwartzMeasureGa.ball(p, Fraction(p) ** v * a, n))
    if family == "balls":
        return balls
    mixed = list(balls)
    for first, second in zip(balls, balls[1:]):
        mixed.append(first - second.scale(Fraction(2)))
    return mixed


def tate_suite(cfg: RunConfig, family: str = "balls", max_level: int = 2, max_conductor: int = 2) -> Report:
    """
    The local functional equation, exactly for the unramified character and numerically for
    every ramified character up to ``max_conductor``, and the residue at s = 0.
    """
    report = Report("tate-check", ["check", "measure", "character", "lhs", "rhs", "deviation"])
    phis = tate_family(cfg.prime, family, max_level)
    symbolic = context(cfg, SYMBOLIC)
    numeric = context(cfg, NUMERIC)
    for phi in phis:
        r = verify_functional_equation(phi, MultChar.unramified(cfg.prime), symbolic)
        cells = ["functional equation", _measure_label(phi), "unramified"]
        cells += [format_scalar(r.lhs), format_scalar(r.rhs), f"{r.deviation:.3g}"]
        report.add(cells, r.passed, CLOSED_FORM, CLOSED_FORM)
    ramified = [c for c in all_characters(cfg.prime, max_conductor, SAMPLE_Z) if c.ramified]
    for chi in ramified:
        for phi in phis:
            r = verify_functional_equation(phi, chi, numeric, u=SAMPLE_U, tolerance=cfg.tolerance)
            cells = ["functional equation", _measure_label(phi), _char_label(chi)]
            cells += [format_scalar(r.lhs), format_scalar(r.rhs), f"{r.deviation:.3g}"]
            report.add(cells, r.passed, CLOSED_FORM, CLOSED_FORM)
    for phi in phis:
        r = check_zeta_residue(phi, numeric, cfg.tolerance)
        cells = ["residue", _measure_label(phi), "trivial"]
        cells += [format_scalar(r.residue), format_scalar(r.expected), f"{r.deviation:.3g}"]
        report.add(cells, r.passed, CLOSED_FORM, CLOSED_FORM)
    report.notes["measures"] = len(phis)
    report.notes["ramified characters"] = len(ramified)
    return report


# multiplicative Fourier convolution


def conv_suite(
    cfg: RunConfig, power: int = 1, s: int = 1, window: int = 3, f: Optional[ExtendedMeasure] = None
) -> Report:
    """The shell route of F_{k, s} against the inverse Mellin transform of the spectral route."""
    ctx = context(cfg)
    f = f or ExtendedMeasure.of(SchwartzMeasureGm.shell(cfg.prime, 0))
    kernel = ConvolutionKernel.standard(cfg.prime, power, s, ctx)
    shells = list(range(-window, window + 1))
    direct = fourier_convolve_shell(f, kernel, shells, ctx)
    spectral = inverse_mellin(fourier_convolve_spectral(f, kernel, ctx), ctx)
    report = Report("conv", ["shell", "shell route", "spectral route", "deviation"])
    for v in shells:
        lhs = direct.shell_mass(v, ctx)
        rhs = spectral.shell_mass(v, ctx)
        _add_comparison(report, [v], lhs, rhs, cfg.tolerance, (CLOSED_FORM, SPECTRAL))
    report.notes["kernel"] = kernel.to_dict()
    return report


# basic vectors


def _orbital(depth: int, v: int, p: int, group: GroupTag, cache: OracleCache) -> complex:
    key = OracleCache.key_of("orbital-density", p=p, group=group.value, depth=depth, shell=v)
    x = Fraction(p) ** v
    re, im = cache.get_or_compute(key, lambda: _pair(orbital_density(depth, x, p, group.value)))
    return complex(re, im)


def _pair(value: complex) -> List[float]:
    return [value.real, value.imag]


def basic_vector_suite(
    cfg: RunConfig,
    group: str = "sl2",
    r_tag: str = AD,
    shells: int = 8,
    hecke_depth: int = 0,
    oracle_shells: int = 4,
    cache: Optional[OracleCache] = None,
) -> Report:
    """
    Shell densities of h f_{L(r, s)} against the enumerated orbital integrals of its
    Whittaker coefficients, and for SL2 with h = 1 the closed form of the tail at infinity.
    """
    cache = cache or default_cache()
    group = GroupTag.parse(group)
    p = cfg.prime
    report = Report("basic-vector", ["check", "shell", "closed form", "reference", "deviation"])
    numeric = context(cfg, NUMERIC)
    q = Fraction(p)
    if group is GroupTag.SL2:
        h = HeckeElement.double_coset(hecke_depth)
        u = 1 / q
        f = hecke_act(h, basic_vector(r_tag, group, u=u))
        series = whittaker_series(h, BASIC, u).specialize(q=p)
    else:
        if hecke_depth:
            raise OutsideHeckeFamily("only the identity of the PGL2 Hecke algebra is modelled")
        u, w = q**-2, q**-3
        f = basic_vector(r_tag, group, u, w)
        series = std_pair_series(u, w).specialize(q=p)
    measure = f.measure(numeric)
    for v in range(0, -min(shells, oracle_shells), -1):
        closed = measure.shell_mass(v, numeric) / (1 - 1 / q)
        # cosets of depth j meet the shells -j to 2 - j
        terms = (complex(series.coefficient(j)) * _orbital(j, v, p, group, cache) for j in range(0, 3 - v))
        expected = sum(terms, 0j)
        _add_comparison(report, ["enumeration", v], closed, expected, cfg.tolerance, (CLOSED_FORM, ORACLE))
    if group is GroupTag.SL2 and hecke_depth == 0:
        symbolic = context(cfg, SYMBOLIC)
        qs = symbolic.q
        c = 1 / (1 - qs**-2)
        f = basic_vector(r_tag, group).measure(symbolic)
        for v in range(-1, -shells - 1, -1):
            lhs = f.shell_mass(v, symbolic)
            rhs = normalize_scalar((1 - 1 / qs) * c * (1 - U / qs) / (1 - U**2) * (qs * U) ** (-v))
            _add_comparison(report, ["tail", v], lhs, rhs)
    report.notes["group"] = group.value
    report.notes["hecke depth"] = hecke_depth
    report.notes["oracle cache"] = f"{cache.hits} hits, {cache.misses} misses"
    return report


# transfer operators


def default_kuznetsov_measure(ctx: PAdicContext) -> ExtendedMeasure:
    tail = TailGerm(MultChar.unramified(ctx.p, Fraction(1)), 0, Fraction(1), 1, AT_INFINITY)
    return ExtendedMeasure.build(SchwartzMeasureGm.shell(ctx.p, 0, Fraction(2)), [tail], ctx=ctx)


def transfer_suite(
    cfg: RunConfig, case: str = "rudnick", f: Optional[ExtendedMeasure] = None, window: int = 3
) -> Report:
    """
    rudnick: ball masses of T f around 0 against the shell route of the same convolution.
    torus: the twice convolved Mellin transform against the squared gamma multiplier.
    Both add the boundary multiplier against the Plancherel ratio.
    """
    ctx = context(cfg, SYMBOLIC)
    report = Report(f"transfer-{case}", ["check", "at", "lhs", "rhs", "deviation"])
    if case == "rudnick":
        f = f or default_kuznetsov_measure(ctx)
        kernel = ConvolutionKernel.standard(ctx.p, 1, 1, ctx)
        levels = list(range(-window, window + 1))
        shells = fourier_convolve_shell(f, kernel, levels, ctx)
        for a in levels:
            lhs = normalize_scalar(transfer_ball_mass(f, 0, a, ctx) - transfer_ball_mass(f, 0, a + 1, ctx))
            rhs = shells.shell_mass(a, ctx)
            _add_comparison(report, ["shell mass", a], lhs, rhs, cfg.tolerance)
    elif case == "torus":
        f = f or basic_vector(STD_PAIR, GroupTag.PGL2, 1 / ctx.q, 1 / ctx.q).measure(ctx)
        before = mellin(f, ctx)
        after = transfer_kuznetsov_to_torus_spectral(f, ctx)
        multiplier = torus_multiplier(ctx)
        for comp in after.components:
            lhs = comp.value
            rhs = normalize_scalar(before.component(comp.tame).value * multiplier)
            _add_comparison(report, ["mellin", comp.tame], lhs, rhs, cfg.tolerance, (SPECTRAL, CLOSED_FORM))
    else:
        raise ValueError(f"unknown transfer: {case}")
    check = verify_boundary(case, ctx)
    labels = ["boundary multiplier", "z"]
    _add_comparison(report, labels, check.multiplier, check.shifted_ratio, routes=(CLOSED_FORM, SPECTRAL))
    return report


def fundamental_lemma_suite(
    cfg: RunConfig, depth: int = 0, max_level: int = 2, cache: Optional[OracleCache] = None
) -> Report:
    """
    T(h f_{L(Ad, 1)}) against zeta(2) times the trace pushforward of h, for h = 1 and the
    double cosets up to ``depth``.
    """
    report = Report("fundamental-lemma", ["hecke", "ball", "T(f)", "zeta(2) pushforward", "equal"])
    for d in range(depth + 1):
        for row in fundamental_lemma_check(d, cfg.prime, max_level, cache=cache or default_cache()):
            report.add([f"K{d}"] + row.to_row(), row.equal, CLOSED_FORM, ORACLE)
    return report


def char_identity_suite(cfg: RunConfig, depth: int = 2) -> Report:
    """
    The stable pairing of T f against the Bessel character of f over the Hecke family,
    with the pairing calibrated on the pushforward of 1_K.
    """
    ctx = context(cfg, NUMERIC)
    p = cfg.prime
    chi = MultChar.unramified(p, Z)
    report = Report("char-identity", ["hecke", "stable pairing", "bessel character", "equal"])
    calibration = stable_pairing(trace_pushforward(0, p, 1), chi)
    calibrated = calibration == 1
    cells = ["calibration", format_scalar(calibration), "1", str(calibrated)]
    report.add(cells, calibrated, ORACLE, CLOSED_FORM)
    family: Dict[str, HeckeElement] = {"1": HeckeElement.identity()}
    for n in range(1, depth + 1):
        family[f"K{n}"] = HeckeElement.double_coset(n)
        family[f"Sym{n} Ad"] = HeckeElement.sym_ad(n)
    for label, h in family.items():
        f = hecke_act(h, basic_vector(u=Fraction(1, p)))
        radius = max(double_coset_decomposition(h, p), default=0)
        mu = transfer_kuznetsov_to_stable(f, ctx, level=1, radius=radius)
        lhs = stable_pairing(mu, chi)
        rhs = bessel_character(chi, f, ctx)
        equal = _compare(lhs, rhs, cfg.tolerance)
        report.add([label, format_scalar(lhs), format_scalar(rhs), str(equal)], equal, CLOSED_FORM, SPECTRAL)
    return report


# scattering


def z_samples(count: int) -> List[complex]:
    """``count`` unitary parameters, away from z = +-1."""
    return [cmath.exp(2j * cmath.pi * (k + 0.5) / count) for k in range(count)]


def scattering_suite(cfg: RunConfig, case: str = "all", samples: int = 8) -> List[Report]:
    """The scattering table at unitary parameters, the boundary multipliers and the gamma duality."""
    cases = list(SphericalCase) if case == "all" else [SphericalCase.parse(case)]
    numeric = context(cfg, NUMERIC)
    table = Report("scattering-table", ["case", "z", "scattering", "plancherel", "consistent"])
    for row in scattering_table(cases, z_samples(samples), numeric):
        cells = [row["case"]] + [format_scalar(row[key]) for key in ("z", "scattering", "plancherel")]
        table.add(cells + [str(row["consistent"])], row["consistent"], CLOSED_FORM, CLOSED_FORM)
    checks = Report("scattering-identities", ["check", "at", "lhs", "rhs", "deviation"])
    symbolic = context(cfg, SYMBOLIC)
    for transfer in ("rudnick", "torus"):
        b = verify_boundary(transfer, symbolic)
        labels = ["boundary " + transfer, "z"]
        _add_comparison(checks, labels, b.multiplier, b.shifted_ratio, routes=(CLOSED_FORM, SPECTRAL))
    duality = gamma_duality(MultChar.unramified(cfg.prime, Z), U, symbolic)
    _add_comparison(checks, ["gamma duality", "unramified"], duality, Fraction(1))
    for chi in all_characters(cfg.prime, 1, SAMPLE_Z):
        if not chi.ramified:
            continue
        value = gamma_duality(chi, SAMPLE_U, numeric)
        _add_comparison(checks, ["gamma duality", _char_label(chi)], value, Fraction(1), cfg.tolerance)
    return [table, checks]


def exchange_suite(cfg: RunConfig, max_level: int = 1) -> Report:
    """The Radon-Fourier and Jacquet-Fourier exchange relations on the cell bases of the plane."""
    ctx = context(cfg, NUMERIC)
    p = cfg.prime
    inv = Fraction(1, p)
    points = [(1, 0), (0, 1), (1, 1), (inv, 0), (2, inv)]
    basis = [PlaneFunction.indicator(p)]
    for level in range(1, max_level + 1):
        basis += cell_basis(p, level)
    report = Report("exchange", ["relation", "function", "at", "lhs", "rhs", "passed"])
    for index, phi in enumerate(basis):
        for check in verify_radon_fourier(phi, points, ctx, cfg.tolerance):
            report.add(["radon-fourier", index] + check.to_row(), check.passed, CLOSED_FORM, CLOSED_FORM)
        for check in verify_jacquet_fourier(phi, None, ctx, cfg.tolerance):
            report.add(["jacquet-fourier", index] + check.to_row(), check.passed, CLOSED_FORM, CLOSED_FORM)
    return report


# finite oracles


def oracle_suite(
    cfg: RunConfig,
    op: str,
    k: int = 2,
    center: Fraction = Fraction(0),
    level: int = 1,
    depth: int = 1,
    a: Fraction = Fraction(1),
    b: Fraction = Fraction(1),
    cache: Optional[OracleCache] = None,
) -> Report:
    """
    A finite enumeration with its self-consistency check.

    trace-fiber: fiber masses of the trace at meshes k and k + 1.
    kloosterman: Kl(a, b; p^k) against Kl(b, a; p^k), and its imaginary part.
    gauss: enumerated Gauss sums of the conductor-k characters against the table sums.
    satake: the coset-counted Satake transform of K diag(p^-depth, p^depth) K.
    spherical: the enumerated spherical function on the shells down to -depth.
    """
    cache = cache or default_cache()
    p = cfg.prime
    report = Report(f"oracle-{op}", ["op", "at", "oracle", "reference", "deviation"])
    if op == "trace-fiber":
        values = []
        for mesh in (k, k + 1):
            key = OracleCache.key_of("trace-fiber", p=p, k=mesh, center=str(center), level=level)
            count = cache.get_or_compute(key, lambda m=mesh: str(trace_fiber_count(center, level, p, m)))
            values.append(Fraction(count))
        _add_comparison(report, [op, f"{center}+p^{level}o"], values[0], values[1], routes=(ORACLE, ORACLE))
    elif op == "kloosterman":
        lhs, rhs = kloosterman_sum(a, b, p, k), kloosterman_sum(b, a, p, k)
        # Kl(a, b) is real and symmetric in a and b
        _add_comparison(report, [op, f"a={a} b={b} p^{k}"], lhs, rhs, cfg.tolerance, (ORACLE, ORACLE))
        _add_comparison(report, [op, "imaginary part"], lhs.imag, 0.0, cfg.tolerance, (ORACLE, CLOSED_FORM))
    elif op == "gauss":
        ctx = context(cfg, NUMERIC)
        chis = [c for c in all_characters(p, k, Fraction(1)) if c.conductor == k]
        if not chis:
            raise InvalidCharacter(f"no characters of conductor {k}")
        for chi in chis:
            lhs, rhs = gauss_sum_enumerated(chi, k, ctx), gauss_sum(chi, ctx)
            _add_comparison(report, [op, _char_label(chi)], lhs, rhs, cfg.tolerance, (ORACLE, CLOSED_FORM))
    elif op == "satake":
        lhs = satake_by_enumeration(depth, p)
        rhs = HeckeElement.double_coset(depth).satake.subs(q=p)
        _add_comparison(report, [op, f"K{depth}"], lhs, rhs, routes=(ORACLE, CLOSED_FORM))
    elif op == "spherical":
        for v in range(1, -depth - 1, -1):
            lhs = spherical_by_enumeration(v, p)
            rhs = macdonald_spherical(v).subs(q=p)
            _add_comparison(report, [op, v], lhs, rhs, routes=(ORACLE, CLOSED_FORM))
    else:
        raise ValueError(f"unknown oracle op: {op}")
    return report
