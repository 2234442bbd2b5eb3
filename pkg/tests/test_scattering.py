import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.analysis import ConvolutionKernel, kernel_multiplier_symbolic, trivial_tame
from src.arith import Q, Z, SymbolicRamified
from src.fields import MultChar, gamma_factor, psi_eval, valuation
from src.oracle import riemann_sum
from src.scattering import (
    PlaneFunction,
    SphericalCase,
    WhittakerPlaneFunction,
    boundary_multiplier,
    cell_basis,
    fourier_2d,
    fourier_value,
    gamma_duality,
    jacquet_integral,
    line_section,
    plancherel_density,
    radon_2d,
    radon_fourier_spectral,
    scattering_scalar,
    scattering_table,
    verify_boundary,
    verify_jacquet_fourier,
    verify_radon_fourier,
)
from src.stable import torus_multiplier

CASES = list(SphericalCase)


@pytest.fixture
def chi():
    return MultChar.unramified(3, Z)


# scattering factors


def test_whittaker_scattering_scalar(chi, ctx3):
    assert scattering_scalar(SphericalCase.WHITTAKER, chi, ctx3) == (1 - 1 / Z) / (1 - Z / Q)


def test_group_plancherel_density(chi, ctx3):
    expected = (1 - 1 / Z) / (1 - Z / Q) * (1 - Z) / (1 - 1 / (Q * Z))
    assert plancherel_density(SphericalCase.GROUP, chi, ctx3) == expected


@pytest.mark.parametrize("case", CASES)
def test_scattering_is_the_density_at_the_reflected_character(case, chi, ctx3):
    assert scattering_scalar(case, chi, ctx3) == plancherel_density(case, chi.inverse(), ctx3)


@pytest.mark.parametrize("angle", [0.3, 1.0, 2.5, 3.0])
def test_group_density_is_nonnegative_on_unitary_characters(angle, num3):
    value = complex(plancherel_density(SphericalCase.GROUP, MultChar.unramified(3, cmath.exp(1j * angle)), num3))
    assert abs(value.imag) < 1e-10
    assert value.real >= -1e-10


def test_trivial_character_meets_the_zero_of_gamma(num3):
    trivial = MultChar.trivial(3)
    assert scattering_scalar(SphericalCase.WHITTAKER, trivial, num3) == 0
    assert plancherel_density(SphericalCase.GROUP, trivial, num3) == 0


def test_symbolic_ramified_is_refused(ctx3):
    with pytest.raises(SymbolicRamified):
        scattering_scalar(SphericalCase.GROUP, MultChar.quadratic(3), ctx3)


def test_rudnick_multiplier_is_the_convolution_multiplier(chi, ctx3):
    kernel = ConvolutionKernel.standard(3, 1, 1, ctx3)
    value, _ = kernel_multiplier_symbolic(kernel, trivial_tame(3), ctx3)
    assert boundary_multiplier("rudnick", chi, ctx3) == value


def test_torus_multiplier_is_the_squared_gamma(chi, ctx3):
    assert boundary_multiplier("torus", chi, ctx3) == torus_multiplier(ctx3)


@pytest.mark.parametrize("transfer", ["rudnick", "torus"])
def test_boundary_multiplier_is_the_plancherel_ratio(transfer, ctx3):
    assert verify_boundary(transfer, ctx3).passed


def test_torus_sign_twist_on_a_ramified_character(num3):
    eta = MultChar.quadratic(3, Fraction(1))
    expected = gamma_factor(eta, Fraction(1), num3).value ** 2
    assert abs(complex(boundary_multiplier("torus", eta, num3)) - complex(expected)) < 1e-10


def test_unknown_transfer(chi, ctx3):
    with pytest.raises(ValueError):
        boundary_multiplier("venkatesh", chi, ctx3)


def test_gamma_duality(chi, ctx3, num3):
    assert gamma_duality(chi, Fraction(1), ctx3) == 1
    assert abs(complex(gamma_duality(MultChar.quadratic(3, Fraction(1)), Fraction(1), num3)) - 1) < 1e-10


def test_scattering_table(num3):
    rows = scattering_table(CASES, [Fraction(2), Fraction(1, 2), 0.4 + 0.3j], num3)
    assert len(rows) == 9
    assert all(row["consistent"] for row in rows)


def test_case_parsing():
    assert SphericalCase.parse("Torus") is SphericalCase.TORUS
    with pytest.raises(ValueError):
        SphericalCase.parse("symmetric")


# plane functions


def test_fourier_of_the_unit_square_is_itself():
    unit = PlaneFunction.indicator(3)
    assert fourier_2d(unit).equals(unit)


def test_fourier_swaps_the_axes():
    phi = PlaneFunction.indicator(3, 0, 1, 0, 0)
    expected = PlaneFunction.indicator(3, 0, 0, 0, -1, Fraction(1, 3))
    assert fourier_2d(phi).equals(expected)


@pytest.mark.parametrize("at", [(Fraction(1, 3), Fraction(1, 3)), (1, Fraction(2, 3)), (0, Fraction(1, 9))])
def test_fourier_against_riemann_sums(at, num3):
    phi = PlaneFunction.indicator(3, 1, 1, 0, 1) + PlaneFunction.indicator(3, 0, 0, 2, 1, Fraction(2))
    xs, ys = at

    def integrand(x, y):
        return phi.value_at(x, y) * psi_eval(x * ys - y * xs, num3)

    expected = riemann_sum(integrand, 3, 2, 0, dim=2)
    assert abs(complex(fourier_value(phi, at)) - complex(expected)) < 1e-10
    assert abs(complex(fourier_2d(phi).value_at(*at)) - complex(expected)) < 1e-10


@pytest.mark.parametrize("phi", cell_basis(3, 1))
def test_fourier_is_an_involution(phi):
    once = fourier_2d(phi)
    assert fourier_2d(once).equals(phi)
    assert fourier_2d(once, psi_sign=-1).equals(phi.reflect())


@settings(max_examples=10, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=9, max_size=9))
def test_fourier_is_an_involution_on_combinations(coeffs):
    phi = PlaneFunction.zero(3)
    for c, cell in zip(coeffs, cell_basis(3, 1)):
        phi = phi + cell.scale(Fraction(c))
    assert fourier_2d(fourier_2d(phi)).equals(phi)


def test_plane_function_round_trip():
    phi = fourier_2d(PlaneFunction.indicator(3, 1, 1, 2, 1))
    assert PlaneFunction.from_dict(phi.to_dict()).equals(phi)


def test_radon_of_the_unit_square():
    unit = PlaneFunction.indicator(3)
    assert radon_2d(unit, (0, 1)) == 1
    assert radon_2d(unit, (1, 0)) == 1
    assert radon_2d(unit, (0, Fraction(1, 3))) == Fraction(1, 3)
    assert radon_2d(PlaneFunction.zero(3), (0, 1)) == 0


def test_radon_against_riemann_sums():
    phi = PlaneFunction.indicator(3, 1, 1, 2, 1) + PlaneFunction.indicator(3, 0, 0, 0, 1, Fraction(3))
    v = (Fraction(1), Fraction(2))
    u1 = line_section(v, 3)

    def integrand(z):
        return phi.value_at(u1[0] - z * v[0], u1[1] - z * v[1])

    assert radon_2d(phi, v) == riemann_sum(integrand, 3, 2, 0)


@pytest.mark.parametrize("a", [3, Fraction(1, 3), 2, Fraction(5, 9)])
def test_radon_is_anti_equivariant(a):
    phi = PlaneFunction.indicator(3, 1, 1, 0, 0)
    v = (Fraction(1), Fraction(1, 3))
    a = Fraction(a)
    # R(a.phi)(v) = |a|^-1 R phi(v / a)
    expected = Fraction(3) ** valuation(a, 3) * radon_2d(phi, (v[0] / a, v[1] / a))
    assert radon_2d(phi.act(a), v) == expected


def test_radon_fourier_by_hand():
    phi = PlaneFunction.indicator(3, 1, 1, 0, 1)
    check = verify_radon_fourier(phi, [(1, 0)])[0]
    assert abs(complex(check.lhs) - Fraction(1, 9)) < 1e-12
    assert check.passed


@pytest.mark.parametrize("phi", cell_basis(3, 1) + [PlaneFunction.indicator(3)])
def test_radon_fourier_on_level_one_cells(phi):
    points = [(1, 0), (0, 1), (1, 1), (Fraction(1, 3), 0), (2, Fraction(1, 3))]
    assert all(check.passed for check in verify_radon_fourier(phi, points))


def test_radon_fourier_of_zero():
    check = verify_radon_fourier(PlaneFunction.zero(3), [(0, 1)])[0]
    assert check.lhs == check.rhs == 0


@pytest.mark.slow
@pytest.mark.parametrize("phi", cell_basis(5, 1)[:6])
def test_radon_fourier_at_five(phi, num5):
    assert all(check.passed for check in verify_radon_fourier(phi, [(1, 0), (1, 2), (Fraction(1, 5), 1)], num5))


@pytest.mark.parametrize(
    "phi, at",
    [
        (PlaneFunction.indicator(3), (0, 1)),
        (PlaneFunction.indicator(3, 1, 1, 0, 0), (1, 0)),
        (PlaneFunction.indicator(3, 1, 1, 0, 0), (0, 1)),
        (PlaneFunction.indicator(3, 2, 1, 1, 1), (1, 1)),
    ],
)
def test_fourier_is_gamma_times_radon_spectrally(phi, at):
    samples = [0.5, 0.5j, 0.6 * cmath.exp(1j), -0.8]
    assert all(sample.passed for sample in radon_fourier_spectral(phi, at, samples))


def test_spectral_samples_outside_the_annulus():
    with pytest.raises(ValueError):
        radon_fourier_spectral(PlaneFunction.indicator(3), (0, 1), [0.2])


# Whittaker sections


def test_whittaker_sections_avoid_the_origin():
    with pytest.raises(ValueError):
        WhittakerPlaneFunction(PlaneFunction.indicator(3))


def test_whittaker_equivariance(num3):
    wf = WhittakerPlaneFunction(PlaneFunction.indicator(3, 1, 1, 0, 0))
    u, w, x = (1, 0), (0, 1), Fraction(1, 3)
    shifted = wf.value(u, (w[0] - x * u[0], w[1] - x * u[1]))
    assert abs(complex(shifted) - complex(psi_eval(x, num3)) * complex(wf.value(u, w))) < 1e-12


def test_jacquet_with_trivial_phase_is_radon():
    base = PlaneFunction.indicator(3, 1, 1, 0, 0)
    assert jacquet_integral(WhittakerPlaneFunction(base), (0, 1)) == radon_2d(base, (0, 1)) == 1


def test_jacquet_by_hand(num3):
    wf = WhittakerPlaneFunction(PlaneFunction.indicator(3, 1, 1, 0, 0))
    assert abs(complex(jacquet_integral(wf, (1, 1))) - 1 / 3) < 1e-12
    value = jacquet_integral(wf, (Fraction(1, 3), 1))
    assert abs(complex(value) - cmath.exp(4j * cmath.pi / 3) / 9) < 1e-12


@pytest.mark.parametrize("at", [(Fraction(1, 3), 1), (1, 2), (Fraction(2, 3), Fraction(1, 3))])
def test_jacquet_against_riemann_sums(at):
    wf = WhittakerPlaneFunction(PlaneFunction.indicator(3, 1, 1, 0, 0) + PlaneFunction.indicator(3, 0, 1, 2, 1))
    v = (Fraction(at[0]), Fraction(at[1]))
    u1 = line_section(v, 3)

    def integrand(z):
        return wf.value((u1[0] - z * v[0], u1[1] - z * v[1]), v)

    expected = riemann_sum(integrand, 3, 3, 1)
    assert abs(complex(jacquet_integral(wf, v)) - complex(expected)) < 1e-10


def test_jacquet_of_zero():
    assert jacquet_integral(WhittakerPlaneFunction(PlaneFunction.zero(3)), (0, 1)) == 0


@pytest.mark.parametrize("phi", cell_basis(3, 1) + [PlaneFunction.indicator(3)])
def test_jacquet_fourier_on_level_one_cells(phi):
    assert all(check.passed for check in verify_jacquet_fourier(phi))
