from .groups import GroupTag, WhittakerCosetElement
from .hecke import (
    HeckeElement,
    adjoint_l_series,
    dual_character,
    satake,
    satake_adapter,
    satake_at,
    sym_power_adjoint,
)
from .germ import DEFAULT_DEPTH, KloostermanGerm, load_germ
from .pushforward import (
    BASIC,
    STANDARD,
    TailTerm,
    WhittakerSeries,
    adjoint_l_coefficient,
    assemble_pushforward,
    pushforward_coset,
    pushforward_coset_oracle,
    std_pair_series,
    whittaker_series,
)
from .basic import AD, STD_PAIR, BasicVector, basic_vector, hecke_act, standard_vector
from .bessel import bessel_character, bessel_standard, macdonald_spherical, spherical_coefficient
