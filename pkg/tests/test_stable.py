from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from src.analysis import ConvolutionKernel, fourier_convolve_shell, mellin
from src.arith import NUMERIC, SYMBOLIC, DegenerateParameter, InvalidCharacter, PrecisionExhausted, Q, Z, scalars_equal
from src.fields import MultChar, PAdicContext
from src.kuznetsov import GroupTag, HeckeElement, STD_PAIR, basic_vector, bessel_character, hecke_act, satake_at
from src.measures import AT_INFINITY, ExtendedMeasure, SchwartzMeasureGa, SchwartzMeasureGm, TailGerm
from src.stable import (
    StablePairingKernel,
    TraceMeasure,
    double_coset_decomposition,
    family_coordinate,
    family_coordinate_check,
    fit_germ,
    fundamental_lemma_check,
    stable_pairing,
    torus_multiplier,
    trace_pushforward,
    transfer_ball_mass,
    transfer_kuznetsov_to_stable,
    transfer_kuznetsov_to_torus_spectral,
)

ZETA2 = Fraction(9, 8)


@pytest.fixture
def chi3():
    return MultChar.unramified(3, Z)


# trace pushforward


def test_pushforward_of_k_has_unit_mass():
    mu = trace_pushforward(0, 3, 1)
    assert mu.mass() == 1
    # 6 of the 24 elements of SL2(F_3) have trace 0
    assert mu.ball_mass(0, 1) == Fraction(6, 24)
    assert mu.ball_mass(1, 1) == Fraction(9, 24)


def test_pushforward_of_first_double_coset():
    mu = trace_pushforward(1, 3, 1)
    assert mu.radius == 1
    assert mu.mass() == 12


def test_germ_law_of_k():
    mu = trace_pushforward(0, 3, 1)
    for center in (2, -2):
        germ = mu.germ(center)
        assert germ.law == (1, 0)
        assert germ.total() == Fraction(1, 2)


def test_finer_balls_are_refused():
    with pytest.raises(ValueError):
        trace_pushforward(0, 3, 1).ball_mass(0, 2)


def test_double_coset_decomposition():
    assert double_coset_decomposition(HeckeElement.double_coset(2), 3) == {2: 1}
    assert double_coset_decomposition(HeckeElement.sym_ad(1), 3) == {1: Fraction(1, 3), 0: Fraction(1, 3)}


def test_trace_measure_round_trip():
    mu = trace_pushforward(0, 3, 1)
    assert TraceMeasure.from_dict(mu.to_dict()).equals(mu)


def test_fit_germ_recovers_the_law():
    shells = [2 * Fraction(3) ** -e + 5 * Fraction(3) ** (-2 * e) for e in (1, 2, 3)]
    assert fit_germ(3, 2, shells).law == (2, 5)


def test_fit_germ_refuses_an_unsettled_law():
    with pytest.raises(PrecisionExhausted):
        fit_germ(3, 2, [Fraction(1), Fraction(0), Fraction(5)])


# stable pairing


def test_calibration(chi3):
    assert stable_pairing(trace_pushforward(0, 3, 1), chi3) == 1


def test_calibration_at_five():
    assert stable_pairing(trace_pushforward(0, 5, 1), MultChar.unramified(5, Z)) == 1


@pytest.mark.parametrize("h", [HeckeElement.double_coset(1), HeckeElement.sym_ad(1)])
def test_pairing_is_the_satake_eigenvalue(h, chi3):
    assert stable_pairing(trace_pushforward(h, 3, 1), chi3) == satake_at(h, 3)


@pytest.mark.slow
def test_pairing_on_the_second_double_coset(chi3):
    h = HeckeElement.double_coset(2)
    assert stable_pairing(trace_pushforward(h, 3, 1), chi3) == satake_at(h, 3)


def test_kernel_is_inversion_invariant(chi3):
    mu = trace_pushforward(1, 3, 1)
    assert stable_pairing(mu, chi3) == StablePairingKernel(chi3).inverse().pair(mu)


def test_kernel_values(chi3):
    kernel = StablePairingKernel(chi3)
    assert kernel.at(3) == kernel.shell_weight(1) == (Z + 1 / Z) / 3
    assert kernel.at(2) == 6
    with pytest.raises(ValueError):
        kernel.at(-1)


def test_pairing_of_zero(chi3):
    assert stable_pairing(TraceMeasure(3, 1, 0, SchwartzMeasureGa.zero(3)), chi3) == 0


def test_pairing_errors():
    with pytest.raises(DegenerateParameter):
        stable_pairing(trace_pushforward(0, 2, 1), MultChar.unramified(2, Z))
    with pytest.raises(InvalidCharacter):
        stable_pairing(trace_pushforward(0, 3, 1), MultChar.quadratic(3))


# transfer to the stable side


def test_transfer_of_basic_vector_by_hand(num3):
    f = basic_vector(u=Fraction(1, 3))
    assert transfer_ball_mass(f, 0, 1, num3) == Fraction(9, 32)
    assert transfer_ball_mass(f, 1, 1, num3) == Fraction(27, 64)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_fundamental_lemma_for_the_identity(p):
    rows = fundamental_lemma_check(0, p, max_level=3)
    assert rows
    assert all(row.equal for row in rows), [row.to_row() for row in rows if not row.equal]


@pytest.mark.slow
@pytest.mark.parametrize("p, balls", [(2, 63), (3, 364), (5, 3906)])
def test_fundamental_lemma_up_to_radius_two(p, balls):
    rows = fundamental_lemma_check(0, p, max_level=3, radius=2)
    assert len(rows) == balls
    assert all(row.equal for row in rows), [row.to_row() for row in rows if not row.equal]


def test_fundamental_lemma_for_the_first_double_coset():
    assert all(row.equal for row in fundamental_lemma_check(1, 3, max_level=2))


@pytest.mark.slow
def test_fundamental_lemma_for_the_second_double_coset():
    assert all(row.equal for row in fundamental_lemma_check(2, 3, max_level=2))


def test_transfer_matches_pushforward_measure(num3):
    lhs = transfer_kuznetsov_to_stable(basic_vector(u=Fraction(1, 3)), num3)
    rhs = trace_pushforward(0, 3, 1).scale(ZETA2)
    assert lhs.equals(rhs)


HECKE_FAMILY = [HeckeElement.identity()] + [
    make(n) for n in range(1, 4) for make in (HeckeElement.double_coset, HeckeElement.sym_ad)
]


@pytest.mark.parametrize("h", HECKE_FAMILY)
def test_character_identity(h, num3, chi3):
    f = hecke_act(h, basic_vector(u=Fraction(1, 3)))
    radius = max(double_coset_decomposition(h, 3), default=0)
    mu = transfer_kuznetsov_to_stable(f, num3, level=1, radius=radius)
    assert scalars_equal(stable_pairing(mu, chi3), bessel_character(chi3, f, num3), 1e-9)


def test_transfer_agrees_with_shell_convolution(ctx3):
    tail = TailGerm(MultChar.unramified(3, Fraction(1)), 0, Fraction(1), 1, AT_INFINITY)
    f = ExtendedMeasure.build(SchwartzMeasureGm.shell(3, 0, Fraction(2)), [tail], ctx=ctx3)
    kernel = ConvolutionKernel.standard(3, 1, 1, ctx3)
    window = list(range(-2, 4))
    shells = fourier_convolve_shell(f, kernel, window, ctx3)
    for a in window:
        transferred = transfer_ball_mass(f, 0, a, ctx3) - transfer_ball_mass(f, 0, a + 1, ctx3)
        assert transferred == shells.shell_mass(a, ctx3)


@settings(max_examples=25, deadline=None)
@given(
    p=st.sampled_from([2, 3, 5]),
    regime=st.sampled_from([SYMBOLIC, NUMERIC]),
    shells=st.dictionaries(st.integers(0, 2), st.integers(-3, 3).filter(bool), min_size=1, max_size=3),
    z=st.sampled_from([Fraction(1), Fraction(-1), Fraction(1, 2)]),
    log_power=st.integers(0, 1),
    coeff=st.integers(-2, 2),
)
def test_transfer_agrees_with_shell_convolution_on_random_measures(p, regime, shells, z, log_power, coeff):
    ctx = PAdicContext(p, 6, regime)
    compact = SchwartzMeasureGm.zero(p)
    for v, c in shells.items():
        compact = compact + SchwartzMeasureGm.shell(p, v, Fraction(c))
    tails = [TailGerm(MultChar.unramified(p, z), log_power, Fraction(coeff), 1, AT_INFINITY)] if coeff else []
    f = ExtendedMeasure.build(compact, tails, ctx=ctx)
    kernel = ConvolutionKernel.standard(p, 1, 1, ctx)
    window = list(range(-2, 4))
    shells_route = fourier_convolve_shell(f, kernel, window, ctx)
    for a in window:
        transferred = transfer_ball_mass(f, 0, a, ctx) - transfer_ball_mass(f, 0, a + 1, ctx)
        assert scalars_equal(transferred, shells_route.shell_mass(a, ctx)), a


def test_image_of_a_compact_measure_is_compact(num3):
    f = ExtendedMeasure.of(SchwartzMeasureGm.shell(3, -2))
    mu = transfer_kuznetsov_to_stable(f, num3, level=1, radius=3, germ_depth=0)
    assert mu.mass() == 0
    assert mu.shell_mass(3) == -Fraction(2, 3)
    with pytest.raises(PrecisionExhausted):
        transfer_kuznetsov_to_stable(f, num3, level=1, radius=2, germ_depth=0)


# transfer to the torus


def test_torus_multiplier_is_the_squared_gamma(ctx3):
    assert torus_multiplier(ctx3) == ((1 - Z) / (1 - 1 / (Q * Z))) ** 2


def test_equal_ratio_tails_sit_at_the_trivial_character(ctx3):
    f = basic_vector(STD_PAIR, GroupTag.PGL2, 1 / Q, 1 / Q).measure(ctx3)
    assert f.tails
    assert {tail.eta.z for tail in f.tails} == {1}


def test_torus_transfer_cancels_the_double_pole(ctx3):
    f = basic_vector(STD_PAIR, GroupTag.PGL2, 1 / Q, 1 / Q).measure(ctx3)
    before = {pole.location: pole.order for pole in mellin(f, ctx3).trivial().poles()}
    assert before.get(1) == 2
    after = transfer_kuznetsov_to_torus_spectral(f, ctx3).trivial()
    assert 1 not in [pole.location for pole in after.poles()]
    assert after.value == mellin(f, ctx3).trivial().value * torus_multiplier(ctx3)


def test_torus_transfer_of_zero(ctx3):
    out = transfer_kuznetsov_to_torus_spectral(ExtendedMeasure.of(SchwartzMeasureGm.zero(3)), ctx3)
    assert out.components == ()


# family coordinate


def test_family_coordinate_values():
    assert family_coordinate([[1, 0], [0, 1]], [[1, 0], [0, 1]]) == 2
    assert family_coordinate([[1, 0], [0, 0]], [[0, 0], [0, 1]]) == 1
    assert family_coordinate([[0, 0], [0, 0]], [[0, 0], [0, 0]]) == 0


def test_family_coordinate_check_passes():
    report = family_coordinate_check()
    assert report.passed
    assert len(report.samples) == 23


def test_family_coordinate_outside_sl2():
    g = Matrix([[2, 0], [0, 1]])
    report = family_coordinate_check([("scaled", g, g)])
    assert report.samples[0].inverse_ok is None
    assert report.samples[0].value == 4
