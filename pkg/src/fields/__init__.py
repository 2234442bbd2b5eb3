from .local import (
    Ball,
    PAdicContext,
    UnitCoset,
    avg_volume,
    ball_volume,
    canonical_center,
    fractional_part,
    iter_shell_cosets,
    psi_angle,
    psi_eval,
    residue,
    root_of_unity,
    unit_part,
    unit_residues,
    unitcoset_volume,
    valuation,
)
from .characters import (
    GammaFactor,
    MultChar,
    all_characters,
    char_eval,
    char_power,
    conductor_of,
    gamma_factor,
    gauss_sum,
    generator_orders,
    generators,
    l_factor,
    log_table,
)
