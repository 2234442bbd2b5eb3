from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.arith import NotLocallyConstant, Q, Z
from src.fields import MultChar, char_eval, psi_eval, valuation
from src.kuznetsov import HeckeElement, macdonald_spherical
from src.oracle import (
    FiniteGroupTable,
    coset_counts,
    hecke_coset_reps,
    hecke_trace_mass,
    kloosterman_sub_sum,
    kloosterman_sum,
    orbital_density,
    primitive_rows,
    psi_sum,
    quadratic_root_count,
    riemann_sum,
    satake_by_enumeration,
    spherical_by_enumeration,
    stable_phase_integral,
    trace_fiber_count,
    whittaker_action,
)
from src.tools.cache import OracleCache


@pytest.mark.parametrize("p,k", [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (7, 1)])
def test_group_order(p, k):
    table = FiniteGroupTable(p, k)
    assert table.check_order()
    assert table.order == p ** (3 * k) - p ** (3 * k - 2)


def test_primitive_rows_count():
    assert len(primitive_rows(3, 2)) == 81 - 9


def test_trace_histogram_partitions_the_group():
    hist = FiniteGroupTable(3, 1).trace_histogram(1)
    assert hist.sum() == 24
    # trace 0 is elliptic, the traces +-2 are unipotent up to sign
    assert hist.tolist() == [6, 9, 9]


def test_trace_fiber_count_full_line():
    assert trace_fiber_count(0, 0, 3, 2) == 1
    assert sum(trace_fiber_count(t, 1, 3, 1) for t in range(3)) == 1


@pytest.mark.parametrize("center", [0, 1, 2, 4])
def test_trace_fiber_count_is_stable(center):
    assert trace_fiber_count(center, 1, 3, 1) == trace_fiber_count(center, 1, 3, 2)


def test_kloosterman_sub_sum():
    assert abs(kloosterman_sub_sum(3) - (-1)) < 1e-12
    assert abs(kloosterman_sub_sum(5) - kloosterman_sum(1, 1, 5, 1)) < 1e-12


@given(st.integers(1, 3), st.integers(1, 26))
def test_psi_sum_orthogonality(k, scale):
    expected = 3**k if scale % 3**k == 0 else 0
    assert abs(psi_sum(k, 3, scale) - expected) < 1e-9


def test_quadratic_root_count():
    # -1 is a square mod 5 and not mod 3
    assert quadratic_root_count(1, 0, 1, 5, 3) == 2
    assert quadratic_root_count(1, 0, 1, 3, 2) == 0
    assert quadratic_root_count(1, 0, 0, 3, 2) == 3


def in_ball(x, level, p=3):
    return x == 0 or valuation(x, p) >= level


def test_riemann_sum_volume():
    assert riemann_sum(lambda x: Fraction(1), 3, 0) == 1
    assert riemann_sum(lambda x: Fraction(int(in_ball(x, 1))), 3, 1) == Fraction(1, 3)


def test_riemann_sum_fourier_of_ball(num3):
    # int_{p^-1 o} psi = 0 and the transform of 1_{p o} at y = 1/p is 1/q
    assert abs(riemann_sum(lambda x: psi_eval(x, num3), 3, 0, radius=1)) < 1e-12
    ball = riemann_sum(lambda x: psi_eval(x / 3, num3) if in_ball(x, 1) else 0j, 3, 1)
    assert abs(ball - Fraction(1, 3)) < 1e-12


def test_riemann_sum_character_orthogonality(num3):
    chi = MultChar.quadratic(3, Fraction(1))

    def fn(x):
        return complex(char_eval(chi, x, num3)) if x and valuation(x, 3) == 0 else 0j

    assert abs(riemann_sum(fn, 3, 1)) < 1e-12


def test_riemann_sum_detects_coarse_mesh():
    with pytest.raises(NotLocallyConstant):
        riemann_sum(lambda x: Fraction(int(in_ball(x, 2))), 3, 0)


def test_riemann_sum_plane():
    assert riemann_sum(lambda x, y: Fraction(1), 2, 1, dim=2) == 1


def test_stable_phase_integral_on_the_first_shell():
    # int_{|y| = q} psi(-y) dy = -1
    assert abs(stable_phase_integral(1, Fraction(1), 3) + 1) < 1e-12


def test_orbital_density_of_first_coset():
    c = 1 / (1 - 3**-2)
    assert abs(orbital_density(1, Fraction(1, 3), 3) - c * 3) < 1e-9
    assert abs(orbital_density(1, Fraction(1), 3) + c / 3) < 1e-9
    assert abs(orbital_density(1, Fraction(3), 3)) < 1e-9


@pytest.mark.parametrize("depth", [0, 1, 2])
def test_hecke_coset_counts(depth):
    counts = coset_counts(depth, 3)
    assert sum(counts.values()) == (1 if depth == 0 else 3 ** (2 * depth) + 3 ** (2 * depth - 1))
    assert len(hecke_coset_reps(depth, 3)) == sum(counts.values())


@pytest.mark.parametrize("depth", [0, 1, 2])
def test_satake_by_enumeration(depth):
    assert satake_by_enumeration(depth, 3) == HeckeElement.double_coset(depth).satake.subs(q=3)


def test_first_satake_transform():
    assert satake_by_enumeration(1, 3) == 3 * Z + 2 + 3 / Z


@pytest.mark.parametrize("depth", [1, 2])
def test_whittaker_action_matches_coset_coefficients(depth):
    coefficients = HeckeElement.double_coset(depth).coset_coefficients()
    for n in range(-1, depth + 2):
        expected = coefficients.get(n, 0)
        expected = complex(expected.subs(q=3).constant_value()) if expected else 0
        assert abs(3**n * whittaker_action(depth, 0, n, 3) - expected) < 1e-9


@pytest.mark.parametrize("v", [0, 2, -1, -2])
def test_spherical_by_enumeration(v):
    assert spherical_by_enumeration(v, 3) == macdonald_spherical(v).subs(q=3)


def test_macdonald_first_value():
    assert macdonald_spherical(-1) == (Z + 1 + 1 / Z - 1 / Q) / (Q + 1)


def test_hecke_trace_mass_of_double_coset():
    assert hecke_trace_mass(0, 0, 0, 3) == 1
    assert hecke_trace_mass(0, -1, 1, 3) == 12


def test_hecke_trace_mass_is_additive():
    whole = hecke_trace_mass(0, 0, 0, 3)
    parts = sum(hecke_trace_mass(t, 1, 0, 3) for t in range(3))
    assert parts == whole


def test_hecke_trace_mass_matches_group_fibers():
    assert hecke_trace_mass(2, 1, 0, 3) == trace_fiber_count(2, 1, 3, 1)


def test_hecke_trace_mass_is_cached(tmp_path):
    cache = OracleCache(str(tmp_path))
    first = hecke_trace_mass(1, 1, 0, 3, cache)
    assert hecke_trace_mass(1, 1, 0, 3, cache) == first
    assert (cache.hits, cache.misses) == (1, 1)


@given(st.integers(0, 8))
def test_hecke_trace_mass_outside_the_support(t):
    # traces of K diag(1/p, p) K lie in p^-1 o
    assert hecke_trace_mass(Fraction(1 + 3 * t, 9), 1, 1, 3) == 0


def test_enumeration_limit():
    with pytest.raises(ValueError):
        FiniteGroupTable(7, 4)


def test_kloosterman_sum_is_real():
    values = [kloosterman_sum(a, 1, 5, 2) for a in range(1, 5)]
    assert np.allclose(np.imag(values), 0)
