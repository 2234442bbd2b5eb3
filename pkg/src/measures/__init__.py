from .cells import canonicalize
from .schwartz import SchwartzMeasureGa, SchwartzMeasureGm
from .germs import (
    AT_INFINITY,
    AT_ZERO,
    PGL2,
    SL2,
    ExtendedMeasure,
    TailGerm,
    ZeroGerm,
    as_extended,
    tail_from_density,
)
from .operations import (
    additive_fourier,
    invert_variable,
    pushforward_power,
    radial_fourier,
    translate,
    twist,
)
