from .mellin import (
    SIDE_INFINITY,
    SIDE_ZERO,
    GeometricSeries,
    MellinComponent,
    MellinData,
    Pole,
    geometric_closed_form,
    inverse_mellin,
    is_real_tame,
    mellin,
    tail_series,
    tame_types,
    trivial_tame,
)
from .tate import (
    FunctionalEquationReport,
    ResidueReport,
    check_zeta_residue,
    tate_zeta,
    verify_functional_equation,
    zeta_residue,
)
from .convolution import (
    ConvolutionKernel,
    apply_kernel,
    default_level,
    fourier_convolve_shell,
    fourier_convolve_spectral,
    kernel_multiplier_numeric,
    kernel_multiplier_symbolic,
    shell_integral,
    vanishing_bound,
)
