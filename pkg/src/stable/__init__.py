from .trace import (
    GERM_DEPTH,
    TraceGerm,
    TraceMeasure,
    build_trace_measure,
    double_coset_decomposition,
    fit_germ,
    trace_pushforward,
    unit_squares,
)
from .pairing import StablePairingKernel, stable_pairing
from .transfer import (
    LemmaRow,
    fundamental_lemma_check,
    torus_multiplier,
    transfer_ball_mass,
    transfer_kuznetsov_to_stable,
    transfer_kuznetsov_to_torus_spectral,
)
from .coordinates import (
    CoordinateReport,
    CoordinateSample,
    default_samples,
    family_coordinate,
    family_coordinate_check,
    random_sl2,
)
