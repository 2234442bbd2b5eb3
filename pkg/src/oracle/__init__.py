from .groups import FiniteGroupTable, inverse_table, iwasawa, matmul, primitive_rows, valuations
from .sums import (
    gauss_sum_enumerated,
    kloosterman_sum,
    psi_sum,
    quadratic_root_count,
    unit_measure_of_roots,
)
from .orbital import (
    kloosterman_orbital,
    kloosterman_sub_sum,
    orbital_density,
    phase_integral,
    stable_phase_integral,
)
from .traces import bc_count_table, hecke_trace_mass, primitive_bc_count_table, trace_fiber_count
from .riemann import riemann_sum
from .hecke import coset_counts, hecke_coset_reps, satake_by_enumeration, whittaker_action
from .spherical import spherical_by_enumeration
