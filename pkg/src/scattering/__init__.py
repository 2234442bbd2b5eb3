from .factors import (
    BOUNDARY_CASES,
    PLANCHEREL_TERMS,
    SCATTERING_TERMS,
    BoundaryCheck,
    GammaTerm,
    SphericalCase,
    boundary_multiplier,
    gamma_duality,
    gamma_product,
    plancherel_density,
    plancherel_ratio,
    scattering_scalar,
    scattering_table,
    verify_boundary,
)
from .plane import (
    ExchangeCheck,
    PlaneFunction,
    SpectralSample,
    WhittakerPlaneFunction,
    cell_basis,
    default_points,
    fourier_2d,
    fourier_mellin,
    fourier_value,
    jacquet_adjoint,
    jacquet_integral,
    line_integral,
    line_region,
    line_section,
    norm_exponent,
    omega,
    radon_2d,
    radon_fourier_rhs,
    radon_fourier_spectral,
    radon_mellin,
    torsor_point,
    verify_jacquet_fourier,
    verify_radon_fourier,
)
