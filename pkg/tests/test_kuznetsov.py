import math
from fractions import Fraction

import pytest

from src.arith import (
    DegenerateParameter,
    InvalidCharacter,
    OracleRequired,
    OutsideHeckeFamily,
    Q,
    SymbolicRegime,
    U,
    Z,
)
from src.fields import MultChar, UnitCoset, iter_shell_cosets, unitcoset_volume
from src.kuznetsov import (
    BASIC,
    STD_PAIR,
    BasicVector,
    GroupTag,
    HeckeElement,
    KloostermanGerm,
    WhittakerCosetElement,
    basic_vector,
    bessel_character,
    bessel_standard,
    hecke_act,
    load_germ,
    macdonald_spherical,
    pushforward_coset,
    pushforward_coset_oracle,
    spherical_coefficient,
    std_pair_series,
    standard_vector,
    sym_power_adjoint,
    whittaker_series,
)
from src.measures import ExtendedMeasure, SchwartzMeasureGm
from src.oracle import orbital_density, whittaker_action

C = 1 / (1 - Q**-2)
C3 = Fraction(9, 8)


def densities(f: ExtendedMeasure, window, p=3):
    return {v: f.compact.density_at(Fraction(p) ** v) for v in window}


def test_group_tags():
    assert GroupTag.parse("pgl2") is GroupTag.PGL2
    assert GroupTag.SL2 == "SL2"
    assert GroupTag.SL2.delta_power == 2 and GroupTag.PGL2.delta_power == 1
    with pytest.raises(ValueError):
        GroupTag.parse("GL3")


def test_coset_element_values(ctx3):
    assert WhittakerCosetElement(GroupTag.SL2, 2).value(ctx3) == Q**-2
    assert WhittakerCosetElement(GroupTag.PGL2, 2).value(ctx3) == 1
    assert WhittakerCosetElement(GroupTag.SL2, 2).coweight == -2
    with pytest.raises(ValueError):
        WhittakerCosetElement(GroupTag.SL2, -1)


def test_first_coset_pushforward(ctx3):
    f = pushforward_coset(WhittakerCosetElement(GroupTag.SL2, 1), ctx3)
    assert f.is_schwartz()
    assert f.compact.as_dict() == {UnitCoset.shell(-1, 3): C * Q, UnitCoset.shell(0, 3): -C / Q}


@pytest.mark.parametrize("group", [GroupTag.SL2, GroupTag.PGL2])
@pytest.mark.parametrize("depth", [1, 2])
def test_coset_pushforward_matches_enumeration(num3, group, depth):
    e = WhittakerCosetElement(group, depth)
    window = range(-depth - 1, 4 if group is GroupTag.PGL2 else 3)
    closed = densities(pushforward_coset(e, num3), window)
    oracle = pushforward_coset_oracle(e, 3, window)
    for v in window:
        assert abs(complex(closed[v]) - oracle[v]) < 1e-9, v


def test_depth_zero_pushforward(ctx3):
    f = pushforward_coset(WhittakerCosetElement(GroupTag.SL2, 0), ctx3)
    assert f.compact.as_dict() == {UnitCoset.shell(0, 3): C}
    (germ,) = f.germs
    assert isinstance(germ, KloostermanGerm) and germ.coeff == C


def test_depth_zero_needs_the_oracle(ctx3):
    with pytest.raises(OracleRequired):
        pushforward_coset(WhittakerCosetElement(GroupTag.SL2, 0), ctx3, oracle=False)
    with pytest.raises(OracleRequired):
        standard_vector().measure(ctx3, oracle=False)


@pytest.mark.parametrize("group,shells", [(GroupTag.SL2, [1, 2]), (GroupTag.PGL2, [2, 3, 4])])
def test_germ_cosets_match_enumeration(num3, group, shells):
    germ = standard_vector(group).measure(num3).germs[0]
    for v in shells:
        for coset in iter_shell_cosets(v, germ.resolution(v), 3):
            expected = orbital_density(0, coset.representative(), 3, group.value)
            assert abs(complex(germ.coset_density(coset, num3)) - expected) < 1e-9


@pytest.mark.parametrize("group,v", [(GroupTag.SL2, 1), (GroupTag.SL2, 2), (GroupTag.SL2, 3), (GroupTag.PGL2, 2), (GroupTag.PGL2, 4)])
def test_germ_shell_mass_is_exact(num3, group, v):
    germ = standard_vector(group).measure(num3).germs[0]
    realized = sum(
        complex(germ.coset_density(c, num3)) * float(unitcoset_volume(c, num3))
        for c in iter_shell_cosets(v, germ.resolution(v), 3)
    )
    assert abs(realized - complex(germ.shell_mass(v, num3))) < 1e-9


def test_germ_values_are_numeric(ctx3):
    germ = standard_vector().measure(ctx3).germs[0]
    with pytest.raises(SymbolicRegime):
        germ.coset_density(UnitCoset(3, 1, 1, 1), ctx3)


def test_pgl2_volume_identity(ctx3):
    # int f |xi|^-1 d^x xi = C for the standard element
    f = standard_vector(GroupTag.PGL2).measure(ctx3)
    assert sum((f.shell_mass(v, ctx3) * Q**v for v in range(-2, 9)), Fraction(0)) == C


def test_germ_serialization(ctx3):
    f = standard_vector().measure(ctx3)
    assert ExtendedMeasure.from_dict(f.to_dict(), load_germ) == f
    with pytest.raises(ValueError):
        load_germ({"type": "unknown"})


def test_dual_characters():
    assert sym_power_adjoint(1) == Z + 1 + 1 / Z
    assert sym_power_adjoint(2) == Z**2 + Z + 2 + 1 / Z + Z**-2


def test_double_coset_satake():
    h = HeckeElement.double_coset(1)
    assert h.satake == Q * (Z + 1 / Z) + Q - 1
    # the degree of the operator is the number of cosets
    assert h.satake.subs(z=Q) == Q**2 + Q
    assert h.coset_coefficients() == {1: Q, 0: -1}
    assert HeckeElement.double_coset(2).coset_coefficients() == {2: Q**2, 1: -Q}


def test_hecke_algebra_product():
    h1, h2 = HeckeElement.double_coset(1), HeckeElement.double_coset(2)
    expected = h2 + h1.scale(Q - 1) + HeckeElement.identity().scale(Q**2 + Q)
    assert (h1 * h1).satake == expected.satake


def test_hecke_element_validation():
    with pytest.raises(OutsideHeckeFamily):
        HeckeElement(GroupTag.SL2, Z)
    with pytest.raises(OutsideHeckeFamily):
        HeckeElement(GroupTag.SL2, 1 / (1 - Z))
    with pytest.raises(OutsideHeckeFamily):
        HeckeElement.double_coset(1, GroupTag.PGL2)


def test_hecke_element_round_trip():
    h = HeckeElement.sym_ad(2)
    assert HeckeElement.from_dict(h.to_dict()) == h


def test_basic_whittaker_coefficients():
    series = whittaker_series(HeckeElement.identity(), BASIC)
    for j in range(6):
        assert series.coefficient(j) == U**j / (1 - U**2)


def test_basic_vector_tail(ctx3):
    f = basic_vector().measure(ctx3)
    for v in range(-8, 1):
        expected = (1 - 1 / Q) * C * (1 - U / Q) / (1 - U**2) * (Q * U) ** (-v)
        assert f.shell_mass(v, ctx3) == expected


def test_basic_vector_recursion(ctx3):
    densities_ = basic_vector().shell_densities(range(-10, 1), ctx3)
    for v in range(-10, 0):
        assert densities_[v] == Q * U * densities_[v + 1]


def test_unit_slot_gives_standard_element(ctx3):
    assert basic_vector().specialize(u=0).measure(ctx3) == standard_vector().measure(ctx3)


def test_basic_vector_realization(num3):
    f = basic_vector(u=Fraction(1, 9))
    window = range(-3, 1)
    realized = f.realize(window, num3)
    assert realized.shell_masses(num3) == f.measure(num3).shell_masses(window, num3)


def test_hecke_identity_acts_trivially():
    f = basic_vector()
    assert hecke_act(HeckeElement.identity(), f) == f


def test_hecke_action_on_measures(ctx3):
    zero = ExtendedMeasure.of(SchwartzMeasureGm.zero(3))
    assert hecke_act(HeckeElement.double_coset(1), zero) is zero
    with pytest.raises(OutsideHeckeFamily):
        hecke_act(HeckeElement.double_coset(1), standard_vector().measure(ctx3))


def test_hecke_translate_matches_enumeration(num3):
    f = hecke_act(HeckeElement.double_coset(1), standard_vector()).measure(num3)
    coefficients = {n: 3**n * whittaker_action(1, 0, n, 3) for n in range(3)}
    for v in range(-2, 1):
        expected = sum(c * orbital_density(n, Fraction(3) ** v, 3) for n, c in coefficients.items())
        assert abs(complex(f.compact.density_at(Fraction(3) ** v)) - expected) < 1e-9


def test_hecke_translate_of_basic_vector_on_unit_shell(num3):
    h = HeckeElement.double_coset(1)
    u = Fraction(1, 3)
    f = hecke_act(h, basic_vector(u=u)).measure(num3)
    series = whittaker_series(h, BASIC, u).specialize(q=3)
    expected = sum(complex(series.coefficient(n)) * orbital_density(n, 1, 3) for n in range(4))
    assert abs(complex(f.shell_mass(0, num3) / (1 - Fraction(1, 3))) - expected) < 1e-9


def test_std_pair_series():
    series = std_pair_series(U, U)
    for j in range(5):
        assert series.coefficient(j) == (j + 1) * U**j / (1 - Q * U**2)


def test_std_pair_vector_matches_enumeration(num3):
    u, w = Q**-2, Q**-3
    f = basic_vector(STD_PAIR, GroupTag.PGL2, u, w).measure(num3)
    series = std_pair_series(u, w).specialize(q=3)
    for v in range(-4, 1):
        expected = sum(
            complex(series.coefficient(j)) * orbital_density(j, Fraction(3) ** v, 3, "PGL2") for j in range(8)
        )
        closed = complex(f.shell_mass(v, num3) / (1 - Fraction(1, 3)))
        assert abs(closed - expected) < 1e-9, v


def test_basic_vector_validation():
    with pytest.raises(ValueError):
        BasicVector(GroupTag.PGL2, HeckeElement.identity(GroupTag.PGL2), BASIC, "Ad")
    with pytest.raises(ValueError):
        BasicVector(GroupTag.SL2, HeckeElement.identity(), "unknown")


def test_spherical_function(ctx3):
    chi = MultChar.unramified(3)
    assert spherical_coefficient(chi, 2, ctx3) == 1
    assert spherical_coefficient(chi, -1, ctx3) == macdonald_spherical(-1)
    assert 1 - spherical_coefficient(chi, -1, ctx3) == bessel_standard()


def test_bessel_of_standard_element(ctx3):
    chi = MultChar.unramified(3)
    assert bessel_character(chi, standard_vector(), ctx3) == (1 - Z / Q) * (1 - 1 / (Q * Z)) / (1 + 1 / Q)


def test_bessel_of_adjoint_basic_vector(ctx3):
    chi = MultChar.unramified(3)
    assert bessel_character(chi, basic_vector(u=1 / Q), ctx3) == 1 / (1 - Q**-2)


def test_bessel_is_hecke_equivariant(ctx3):
    chi = MultChar.unramified(3)
    h = HeckeElement.double_coset(2)
    assert bessel_character(chi, hecke_act(h, standard_vector()), ctx3) == h.satake * bessel_standard()


def test_bessel_of_zero(ctx3):
    chi = MultChar.unramified(3)
    assert bessel_character(chi, BasicVector(GroupTag.SL2, HeckeElement.zero()), ctx3) == 0
    assert bessel_character(chi, ExtendedMeasure.of(SchwartzMeasureGm.zero(3)), ctx3) == 0


def test_bessel_numeric(num3):
    chi = MultChar.unramified(3, Fraction(1, 2))
    assert bessel_character(chi, standard_vector(), num3) == Fraction(5, 6) * Fraction(1, 3) / Fraction(4, 3)


def test_bessel_errors(ctx3, num3):
    chi = MultChar.unramified(3)
    with pytest.raises(OutsideHeckeFamily):
        bessel_character(chi, standard_vector().measure(ctx3), ctx3)
    with pytest.raises(OutsideHeckeFamily):
        bessel_character(chi, standard_vector(GroupTag.PGL2), ctx3)
    with pytest.raises(InvalidCharacter):
        bessel_character(MultChar.quadratic(3), standard_vector(), ctx3)
    with pytest.raises(DegenerateParameter):
        spherical_coefficient(MultChar.unramified(3, complex(math.sqrt(3))), -1, num3)


def test_constants_agree(num3):
    assert GroupTag.SL2.pushforward_constant(num3) == C3
