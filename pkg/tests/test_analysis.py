import math
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.arith import NUMERIC, SYMBOLIC, Q, U, Z, NonSummableTail, SymbolicRamified, SymbolicRegime, UnrecognizedPoleStructure
from src.analysis import (
    SIDE_INFINITY,
    SIDE_ZERO,
    ConvolutionKernel,
    MellinComponent,
    MellinData,
    apply_kernel,
    check_zeta_residue,
    fourier_convolve_shell,
    fourier_convolve_spectral,
    inverse_mellin,
    mellin,
    shell_integral,
    tate_zeta,
    trivial_tame,
    vanishing_bound,
    verify_functional_equation,
    zeta_residue,
)
from src.fields import MultChar, PAdicContext, UnitCoset
from src.measures import AT_ZERO, ExtendedMeasure, SchwartzMeasureGa, SchwartzMeasureGm, TailGerm, translate, twist
from src.suites import tate_family, tate_suite
from src.tools import RunConfig

TRIVIAL = trivial_tame(3)
QUADRATIC = (Fraction(1, 2),)


def symbolic_data(value, sides=()):
    return MellinData(3, "symbolic", (MellinComponent(TRIVIAL, value=value, sides=sides),))


# Mellin transform


def test_mellin_of_unit_shell(ctx3):
    data = mellin(SchwartzMeasureGm.shell(3, 0), ctx3)
    assert data.trivial().value == 1 - 1 / Q
    assert data.component(QUADRATIC).value == 0
    assert data.is_laurent()


def test_mellin_of_small_coset(ctx3):
    data = mellin(SchwartzMeasureGm.indicator(UnitCoset(3, 1, 1, 1)), ctx3)
    assert data.trivial().value == 1 / (Z * Q)
    assert data.component(QUADRATIC).value == 1 / (Z * Q)
    assert data.complete


def test_mellin_of_tail(ctx3):
    # |x| d^x x on |x| >= 1
    tail = TailGerm(MultChar.unramified(3, Q), 0, Fraction(1))
    data = mellin(ExtendedMeasure(SchwartzMeasureGm.zero(3), (tail,)), ctx3)
    value = data.trivial().value
    assert value == (1 - 1 / Q) / (1 - Q * Z)
    poles = data.trivial().poles()
    assert [(p.location, p.order, p.side) for p in poles] == [(1 / Q, 1, SIDE_ZERO)]
    partial = value.shell_expand("z", "at-zero", 30)
    for j in range(30):
        assert partial.coefficient(j) == (1 - 1 / Q) * Q**j


def test_mellin_round_trip(ctx3):
    f = SchwartzMeasureGm.from_terms(
        3, [(UnitCoset(3, 0, 1, 1), Fraction(2)), (UnitCoset.shell(-2, 3), Q), (UnitCoset(3, 1, 2, 1), Fraction(-1))]
    )
    back = inverse_mellin(mellin(f, ctx3), ctx3)
    assert back.is_schwartz()
    # character counts are concrete, volumes are functions of q
    assert back.compact.specialize(ctx3).equals(f.specialize(ctx3))


def test_inverse_of_simple_pole(ctx3):
    data = symbolic_data(1 / (1 - Z / Q), ((Q, SIDE_ZERO),))
    f = inverse_mellin(data, ctx3)
    assert f.compact.is_zero()
    (tail,) = f.tails
    assert tail.log_power == 0
    assert tail.eta.z == 1 / Q
    assert mellin(f, ctx3).trivial().value == 1 / (1 - Z / Q)


def test_inverse_of_double_pole(ctx3):
    value = 1 / (1 - Z / Q) ** 2
    f = inverse_mellin(symbolic_data(value, ((Q, SIDE_ZERO),)), ctx3)
    assert sorted(t.log_power for t in f.tails) == [0, 1]
    assert mellin(f, ctx3).trivial().value == value


def test_inverse_of_pole_at_infinity_side(ctx3):
    value = (Z + 2) / (1 - 1 / (Q * Z))
    f = inverse_mellin(symbolic_data(value, ((1 / Q, SIDE_INFINITY),)), ctx3)
    assert all(t.end == AT_ZERO for t in f.tails)
    assert mellin(f, ctx3).trivial().value == value


def test_inverse_rejects_unknown_poles(ctx3):
    with pytest.raises(UnrecognizedPoleStructure):
        inverse_mellin(symbolic_data(1 / (1 - Q * Z**2)), ctx3)
    with pytest.raises(UnrecognizedPoleStructure):
        inverse_mellin(symbolic_data(1 / (1 - Z)), ctx3)


def test_numeric_round_trip(num3):
    f = SchwartzMeasureGm.indicator(UnitCoset(3, 0, 1, 1)) + SchwartzMeasureGm.indicator(UnitCoset(3, -1, 4, 2), 2j)
    data = mellin(f, num3)
    assert len(data.components) == 6
    back = inverse_mellin(data, num3)
    assert back.compact.equals(f)


def test_mellin_data_json(ctx3):
    tail = TailGerm(MultChar.unramified(3, Q), 1, Fraction(1))
    data = mellin(ExtendedMeasure(SchwartzMeasureGm.shell(3, 2), (tail,)), ctx3)
    again = MellinData.from_dict(data.to_dict())
    assert again.trivial().value == data.trivial().value
    assert again.trivial().poles() == data.trivial().poles()


# Tate zeta integrals


def test_zeta_of_unit_ball(ctx3):
    chi = MultChar.unramified(3)
    assert tate_zeta(SchwartzMeasureGa.ball(3, 0, 0), chi, ctx3) == (1 - 1 / Q) / (1 - Z * U)


def test_zeta_of_units_specializes(ctx3):
    units = SchwartzMeasureGa.ball(3, 0, 0) - SchwartzMeasureGa.ball(3, 0, 1)
    value = tate_zeta(units, MultChar.unramified(3), ctx3)
    assert ctx3.specialize(value) == Fraction(2, 3)


def test_zeta_ramified(ctx3, num3):
    chi = MultChar.quadratic(3, 0.5 + 0j)
    assert tate_zeta(SchwartzMeasureGa.ball(3, 0, 0), chi, num3, 0.3) == 0
    with pytest.raises(SymbolicRamified):
        tate_zeta(SchwartzMeasureGa.ball(3, 0, 0), MultChar.quadratic(3), ctx3)


def test_zeta_degree_bound(ctx3):
    phi = SchwartzMeasureGa.ball(3, 9, 1) + SchwartzMeasureGa.ball(3, 0, 3, Fraction(2))
    value = tate_zeta(phi, MultChar.unramified(3), ctx3) * (1 - Z * U)
    num, den = value.split("u")
    assert max(num) - max(den) <= 3


def test_functional_equation_symbolic(ctx2):
    chi = MultChar.unramified(2)
    for phi in (
        SchwartzMeasureGa.ball(2, 0, 0),
        SchwartzMeasureGa.ball(2, 0, 2, Fraction(3)),
        SchwartzMeasureGa.ball(2, 1, 1) - SchwartzMeasureGa.ball(2, Fraction(1, 2), 0),
        SchwartzMeasureGa.zero(2),
    ):
        report = verify_functional_equation(phi, chi, ctx2)
        assert report.exact and report.passed


def test_zeta_is_additive_over_cosets(ctx3):
    chi = MultChar.unramified(3)
    unit_ball, inner = SchwartzMeasureGa.ball(3, 0, 0), SchwartzMeasureGa.ball(3, 0, 1)
    # o - po is stored as the cosets 1 + po and 2 + po
    split = tate_zeta(unit_ball - inner, chi, ctx3)
    assert split == tate_zeta(unit_ball, chi, ctx3) - tate_zeta(inner, chi, ctx3)
    assert split == 1 - 1 / Q


def test_functional_equation_compares_cosets_at_q_equals_p(ctx3):
    phi = SchwartzMeasureGa.ball(3, 1, 1) - SchwartzMeasureGa.ball(3, Fraction(1, 3), 0)
    report = verify_functional_equation(phi, MultChar.unramified(3), ctx3)
    assert report.q_specialized and report.passed
    central = verify_functional_equation(SchwartzMeasureGa.ball(3, 0, 2), MultChar.unramified(3), ctx3)
    assert not central.q_specialized and central.passed


@pytest.mark.parametrize("p", [2, 3, 5])
def test_functional_equation_over_ball_family(p):
    ctx = PAdicContext(p, 6, SYMBOLIC)
    chi = MultChar.unramified(p)
    for phi in tate_family(p, "balls", 3):
        report = verify_functional_equation(phi, chi, ctx)
        assert report.exact and report.passed, phi


@pytest.mark.slow
def test_tate_suite_at_five_runs_within_a_minute():
    start = time.perf_counter()
    report = tate_suite(RunConfig(prime=5), "balls", 2, 2)
    assert report.passed
    assert time.perf_counter() - start < 60


@pytest.mark.parametrize("angle", [Fraction(1, 2), Fraction(1, 6), Fraction(5, 6)])
def test_functional_equation_ramified(num3, angle):
    chi = MultChar(3, (angle,), 0.8 - 0.6j)
    phi = SchwartzMeasureGa.ball(3, 1, 1) + SchwartzMeasureGa.ball(3, 4, 2, Fraction(-1, 2))
    report = verify_functional_equation(phi, chi, num3, u=0.37 + 0.2j)
    assert report.passed, report.deviation


@pytest.mark.parametrize(
    "p, phi, expected",
    [
        (3, SchwartzMeasureGa.ball(3, 0, 0), (1 - 1 / 3) / math.log(3)),
        (5, SchwartzMeasureGa.ball(5, 0, 1), (1 - 1 / 5) / math.log(5)),
        (3, SchwartzMeasureGa.ball(3, 0, 0) - SchwartzMeasureGa.ball(3, 0, 1), 0),
    ],
)
def test_zeta_residue(p, phi, expected):
    ctx = PAdicContext(p, 5, "numeric")
    assert abs(zeta_residue(phi, ctx) - expected) < 1e-12
    assert check_zeta_residue(phi, ctx).passed


def test_zeta_residue_is_numeric(ctx3):
    with pytest.raises(SymbolicRegime):
        zeta_residue(SchwartzMeasureGa.ball(3, 0, 0), ctx3)


# convolutions


def test_shell_integrals(ctx3, num3):
    trivial = MultChar.trivial(3)
    assert shell_integral(trivial, 0, 1, ctx3) == 1 - 1 / Q
    assert shell_integral(trivial, 0, Fraction(1, 3), ctx3) == -1 / Q
    assert shell_integral(trivial, 0, Fraction(1, 9), ctx3) == 0
    chi = MultChar.quadratic(3, Fraction(1))
    assert shell_integral(chi, 0, 1, num3) == 0
    assert abs(abs(shell_integral(chi, 0, Fraction(1, 3), num3)) - 3**-0.5) < 1e-12


def test_routes_agree_on_unit_shell(ctx3):
    f = SchwartzMeasureGm.shell(3, 0)
    kernel = ConvolutionKernel.standard(3, 1, 1)
    window = range(-3, 4)
    direct = fourier_convolve_shell(f, kernel, window, ctx3)
    spectral = inverse_mellin(fourier_convolve_spectral(f, kernel, ctx3), ctx3)
    assert direct.compact.equals(spectral.realize(window, ctx3))
    assert direct.compact.shell_masses(ctx3)[-1] == -(1 - 1 / Q)


def test_routes_agree_with_summable_tail(ctx3):
    tail = TailGerm(MultChar.trivial(3), 0, Fraction(1))
    f = ExtendedMeasure(SchwartzMeasureGm.shell(3, 2, Fraction(5)), (tail,))
    kernel = ConvolutionKernel.standard(3, 1, 1)
    window = range(-3, 4)
    direct = fourier_convolve_shell(f, kernel, window, ctx3)
    spectral = inverse_mellin(fourier_convolve_spectral(f, kernel, ctx3), ctx3)
    assert direct.compact.equals(spectral.realize(window, ctx3))


def test_routes_agree_for_inverse_power(ctx3):
    f = SchwartzMeasureGm.shell(3, 1) + SchwartzMeasureGm.shell(3, -1, Q)
    kernel = ConvolutionKernel(-1, MultChar.unramified(3, Fraction(1)), U)
    window = range(-3, 4)
    direct = fourier_convolve_shell(f, kernel, window, ctx3)
    spectral = inverse_mellin(fourier_convolve_spectral(f, kernel, ctx3), ctx3)
    assert direct.compact.equals(spectral.realize(window, ctx3))


def _kernel_of_power(p, k, ctx):
    if k == 1:
        return ConvolutionKernel.standard(p, 1, 1, ctx)
    return ConvolutionKernel(-1, MultChar.unramified(p, Fraction(1)), U)


@settings(max_examples=25, deadline=None)
@given(
    p=st.sampled_from([2, 3, 5]),
    k=st.sampled_from([1, -1]),
    shells=st.dictionaries(st.integers(0, 2), st.integers(-4, 4).filter(bool), min_size=1, max_size=3),
)
def test_routes_agree_on_random_shells(p, k, shells):
    ctx = PAdicContext(p, 6, SYMBOLIC)
    f = SchwartzMeasureGm.zero(p)
    for s, c in shells.items():
        f = f + SchwartzMeasureGm.shell(p, s, Fraction(c))
    kernel = _kernel_of_power(p, k, ctx)
    window = range(-3, 4)
    direct = fourier_convolve_shell(f, kernel, window, ctx)
    spectral = inverse_mellin(fourier_convolve_spectral(f, kernel, ctx), ctx)
    assert direct.compact.equals(spectral.realize(window, ctx))


@pytest.mark.slow
@settings(max_examples=25, deadline=None)
@given(
    p=st.sampled_from([3, 5]),
    s=st.integers(0, 2),
    coeff=st.integers(1, 3),
    quadratic=st.booleans(),
)
def test_routes_agree_on_random_quadratic_twists(p, s, coeff, quadratic):
    ctx = PAdicContext(p, 5, NUMERIC)
    f = SchwartzMeasureGm.shell(p, s, Fraction(coeff))
    if quadratic:
        f = twist(f, MultChar.quadratic(p, Fraction(1)), ctx)
    kernel = ConvolutionKernel.standard(p, 1, 1, ctx)
    window = range(s - 2, s + 3)
    direct = fourier_convolve_shell(f, kernel, window, ctx)
    spectral = inverse_mellin(fourier_convolve_spectral(f, kernel, ctx), ctx)
    assert direct.compact.equals(spectral.realize(window, ctx))


def test_divergent_tail(ctx3):
    tail = TailGerm(MultChar.unramified(3, Q), 0, Fraction(1))
    f = ExtendedMeasure(SchwartzMeasureGm.zero(3), (tail,))
    kernel = ConvolutionKernel.standard(3, 1, 1)
    with pytest.raises(NonSummableTail):
        fourier_convolve_shell(f, kernel, range(-2, 3), ctx3)
    with pytest.raises(NonSummableTail):
        fourier_convolve_spectral(f, kernel, ctx3)


def test_kernel_twice(ctx3):
    f = SchwartzMeasureGm.shell(3, 0)
    kernel = ConvolutionKernel.standard(3, 1, 1)
    once = fourier_convolve_spectral(f, kernel, ctx3)
    twice = apply_kernel(once, kernel, ctx3)
    gamma = (1 - Z) / (1 - 1 / (Q * Z))
    assert twice.trivial().value == (1 - 1 / Q) * gamma**2


def test_zero_input(ctx3):
    kernel = ConvolutionKernel.standard(3, 1, 1)
    assert fourier_convolve_spectral(SchwartzMeasureGm.zero(3), kernel, ctx3).components == ()
    assert fourier_convolve_shell(SchwartzMeasureGm.zero(3), kernel, range(-1, 2), ctx3).is_zero()


def test_coset_route_matches_spectral(num3):
    f = SchwartzMeasureGm.indicator(UnitCoset(3, 0, 1, 1))
    kernel = ConvolutionKernel.standard(3, 1, 1, num3)
    window = range(-2, 3)
    direct = fourier_convolve_shell(f, kernel, window, num3)
    spectral = inverse_mellin(fourier_convolve_spectral(f, kernel, num3), num3)
    assert direct.compact.equals(spectral.realize(window, num3))


@pytest.mark.slow
def test_coset_route_ramified_kernel(num3):
    f = SchwartzMeasureGm.indicator(UnitCoset(3, 1, 2, 1), 0.5 + 0j) + SchwartzMeasureGm.shell(3, 0)
    kernel = ConvolutionKernel(1, MultChar.quadratic(3, 1j), Fraction(1, 3))
    window = range(-2, 3)
    direct = fourier_convolve_shell(f, kernel, window, num3)
    spectral = inverse_mellin(fourier_convolve_spectral(f, kernel, num3), num3)
    assert direct.compact.equals(spectral.realize(window, num3))


def test_coset_route_is_numeric(ctx3):
    f = SchwartzMeasureGm.indicator(UnitCoset(3, 0, 1, 1))
    with pytest.raises(SymbolicRegime):
        fourier_convolve_shell(f, ConvolutionKernel.standard(3, 1, 1), range(0, 2), ctx3)


@settings(max_examples=5, deadline=None)
@given(st.sampled_from([Fraction(2), Fraction(4), Fraction(5), Fraction(7, 2)]))
def test_convolution_commutes_with_unit_translation(a):
    ctx = PAdicContext(3, 5, "numeric")
    f = SchwartzMeasureGm.indicator(UnitCoset(3, 0, 2, 1)) + SchwartzMeasureGm.shell(3, 1, Fraction(2))
    kernel = ConvolutionKernel.standard(3, 1, 1, ctx)
    window = range(-2, 3)
    moved = fourier_convolve_shell(translate(f, a), kernel, window, ctx)
    expected = translate(fourier_convolve_shell(f, kernel, window, ctx).compact, a)
    assert moved.compact.equals(expected)


def test_vanishing_bound(ctx3):
    f = SchwartzMeasureGm.shell(3, 0) + SchwartzMeasureGm.shell(3, 2)
    kernel = ConvolutionKernel.standard(3, 1, 1)
    side, bound = vanishing_bound(f, kernel)
    assert (side, bound) == ("below", -1)
    out = fourier_convolve_shell(f, kernel, range(bound - 3, bound + 1), ctx3)
    masses = out.compact.shell_masses(ctx3)
    assert all(v >= bound for v in masses)
