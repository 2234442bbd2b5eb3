from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from src.arith import Q, Z, InsufficientPrecision, SymbolicRootOfUnity
from src.fields import Ball, MultChar, PAdicContext, UnitCoset
from src.measures import (
    AT_INFINITY,
    SL2,
    ExtendedMeasure,
    SchwartzMeasureGa,
    SchwartzMeasureGm,
    TailGerm,
    additive_fourier,
    invert_variable,
    pushforward_power,
    radial_fourier,
    tail_from_density,
    translate,
    twist,
)


def coset(v, r, n, p=3):
    return UnitCoset(p, v, r, n)


def test_complete_family_merges_to_shell():
    m = SchwartzMeasureGm.from_terms(3, [(coset(0, 1, 1), Fraction(1)), (coset(0, 2, 1), Fraction(1))])
    assert m.terms == ((UnitCoset.shell(0, 3), Fraction(1)),)


def test_overlapping_cells_split():
    m = SchwartzMeasureGm.shell(3, 0) + SchwartzMeasureGm.indicator(coset(0, 1, 1), Fraction(2))
    assert m.as_dict() == {coset(0, 1, 1): 3, coset(0, 2, 1): 1}
    assert (m - m).is_zero()


@given(st.integers(-3, 3), st.integers(1, 3), st.fractions(min_value=-5, max_value=5).filter(lambda c: c != 0))
def test_canonical_form_forgets_refinement(v, level, c):
    shell = SchwartzMeasureGm.shell(3, v, c)
    refined = SchwartzMeasureGm.from_terms(3, [(piece, c) for piece in UnitCoset.shell(v, 3).refine(level)])
    assert refined == shell


def test_masses(ctx3):
    m = SchwartzMeasureGm.shell(3, 0) + SchwartzMeasureGm.indicator(coset(2, 1, 1), Q)
    assert m.mass(ctx3) == 1 - 1 / Q + 1
    assert m.shell_masses(ctx3) == {0: 1 - 1 / Q, 2: 1}
    assert m.coset_mass(coset(0, 2, 2), ctx3) == Q**-2
    back = SchwartzMeasureGm.from_shell_masses(3, {0: Fraction(1), -1: Q}, ctx3)
    assert back.shell_masses(ctx3) == {-1: Q, 0: 1}


def test_density_and_translation():
    m = SchwartzMeasureGm.indicator(coset(0, 2, 1), Fraction(5))
    assert m.density_at(Fraction(5)) == 5
    assert m.density_at(Fraction(4)) == 0
    moved = m.translate(Fraction(6))
    assert moved.density_at(Fraction(12)) == 5


def test_ball_measures(ctx3):
    ball = SchwartzMeasureGa.ball(3, 0, 0)
    assert ball.mass(ctx3) == 1
    assert ball.value_at(Fraction(1, 3)) == 0
    assert additive_fourier(ball, ctx3) == ball
    small = SchwartzMeasureGa.ball(3, 0, 1)
    assert additive_fourier(small, ctx3) == SchwartzMeasureGa.ball(3, 0, -1, Q**-1)


def test_fourier_inversion_and_plancherel(num3):
    f = SchwartzMeasureGa.ball(3, 1, 1) + SchwartzMeasureGa.ball(3, Fraction(2, 3), 0, Fraction(-2))
    dual = additive_fourier(f, num3)
    back = additive_fourier(dual, num3, psi_sign=-1)
    assert back.equals(f.specialize(num3))
    assert abs(f.l2_norm_squared(num3) - dual.l2_norm_squared(num3)) < 1e-9


def test_radial_fourier_of_balls(ctx3):
    central = SchwartzMeasureGa.ball(3, 0, 2)
    assert radial_fourier(central, ctx3) == additive_fourier(central, ctx3)
    coset = SchwartzMeasureGa.ball(3, 1, 1)
    with pytest.raises(SymbolicRootOfUnity):
        additive_fourier(coset, ctx3)
    expected = SchwartzMeasureGa.ball(3, 0, 0, Fraction(3, 2) / Q) - SchwartzMeasureGa.ball(3, 0, -1, Fraction(1, 2) / Q)
    assert radial_fourier(coset, ctx3) == expected


@pytest.mark.parametrize("xi", [Fraction(1), Fraction(1, 3), Fraction(2, 9)])
def test_radial_fourier_averages_over_units(num3, xi):
    f = SchwartzMeasureGa.ball(3, 1, 1) + SchwartzMeasureGa.ball(3, Fraction(2, 3), 1, Fraction(-2))
    dual = additive_fourier(f, num3)
    units = [1, 2, 4, 5, 7, 8]
    average = sum(complex(dual.value_at(u * xi)) for u in units) / len(units)
    assert abs(complex(radial_fourier(f, num3).value_at(xi)) - average) < 1e-12


def test_fourier_needs_precision():
    ctx = PAdicContext(3, 1)
    with pytest.raises(InsufficientPrecision):
        additive_fourier(SchwartzMeasureGa.ball(3, 0, 3), ctx)


def test_twists(ctx3):
    m = SchwartzMeasureGm.shell(3, 0) + SchwartzMeasureGm.shell(3, 1)
    twisted = twist(m, MultChar.unramified(3, Z), ctx3)
    assert twisted.as_dict() == {UnitCoset.shell(0, 3): 1, UnitCoset.shell(1, 3): Z}
    quadratic = twist(SchwartzMeasureGm.shell(3, 0), MultChar.quadratic(3, Fraction(1)), ctx3)
    assert quadratic.as_dict() == {coset(0, 1, 1): 1, coset(0, 2, 1): -1}


def test_square_map(num3):
    image = pushforward_power(SchwartzMeasureGm.shell(3, 0), 2, num3)
    assert image.as_dict() == {coset(0, 1, 1): 2}
    assert image.mass(num3) == SchwartzMeasureGm.shell(3, 0).mass(num3)


def test_cube_map_raises_level(num3):
    image = pushforward_power(SchwartzMeasureGm.shell(3, 0), 3, num3)
    assert image.as_dict() == {coset(0, 1, 2): 3, coset(0, 8, 2): 3}


@given(
    st.integers(-4, 4).filter(lambda k: k != 0),
    st.integers(-2, 2),
    st.sampled_from([1, 2, 4, 5, 7, 8]),
)
def test_power_maps_preserve_mass(k, v, r):
    ctx = PAdicContext(3, 6, "numeric")
    f = SchwartzMeasureGm.indicator(coset(v, r, 2))
    image = pushforward_power(f, k, ctx)
    assert image.mass(ctx) == f.mass(ctx)
    assert image.shells() == [k * v]


def test_inversion():
    f = SchwartzMeasureGm.indicator(coset(2, 2, 2), Fraction(3))
    assert invert_variable(f).as_dict() == {coset(-2, 5, 2): 3}
    assert invert_variable(invert_variable(f)) == f


def test_tail_germ_shells(ctx3):
    tail = TailGerm(MultChar.unramified(3, Q), 1, Fraction(2), start=1)
    assert tail.covers(-1) and not tail.covers(0)
    assert tail.shell_mass(-2, ctx3) == 2 * -2 * Q**2 * (1 - 1 / Q)
    ramified = TailGerm(MultChar.quadratic(3, Fraction(1)), 0, Fraction(1))
    assert ramified.shell_mass(-1, ctx3) == 0
    assert len(ramified.shell_terms(-1, ctx3)) == 2


def test_extended_measure_merges_tails(ctx3):
    eta = MultChar.unramified(3, Q)
    f = ExtendedMeasure.build(
        SchwartzMeasureGm.zero(3),
        [TailGerm(eta, 0, Fraction(1), 0), TailGerm(eta, 0, Fraction(2), 2)],
    )
    assert len(f.tails) == 1
    assert f.tails[0].start == 2 and f.tails[0].coeff == 3
    assert f.compact.as_dict() == {UnitCoset.shell(0, 3): 1, UnitCoset.shell(-1, 3): Q}
    assert f.shell_mass(-1, ctx3) == Q - 1
    assert f.shell_mass(-3, ctx3) == 3 * Q**3 * (1 - 1 / Q)
    window = f.realize(range(-3, 1), ctx3)
    assert window.shells() == [-3, -2, -1, 0]


def test_sl2_density_shift(ctx3):
    tail = tail_from_density(MultChar.trivial(3), 0, Fraction(1), 0, SL2, ctx3)
    assert tail.eta.z == Q
    assert tail.end == AT_INFINITY
    # |x| d^x x on |x| >= 1
    assert tail.shell_mass(-2, ctx3) == Q**2 * (1 - 1 / Q)


def test_translate_extended():
    eta = MultChar.unramified(3, Q)
    f = ExtendedMeasure(SchwartzMeasureGm.indicator(coset(0, 1, 1)), (TailGerm(eta, 0, Fraction(1), 1),))
    moved = translate(f, Fraction(2))
    assert moved.compact.as_dict() == {coset(0, 2, 1): 1}
    with pytest.raises(ValueError):
        translate(f, Fraction(3))
