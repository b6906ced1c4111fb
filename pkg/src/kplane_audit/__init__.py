"""Numerical audit toolkit for sharp k-plane/X-ray space-time estimates.

Exact Gaussian-packet calculus, Haar sampling on Stiefel/Grassmann manifolds
under explicit mass normalizations, covariance weights, singular collinearity
pairings, and a grid-based spectral path, each claim checked through two
independent computational routes.
"""

from ._kernels import available_backends, backend_name
from .constants import (
    DimPair,
    c_constant,
    d_constant,
    gamma_product,
    grassmann_mass,
    grassmann_mass_sphere_ratio,
    sphere_area,
    stiefel_mass,
)
from .gaussian import (
    GaussianPacket,
    PacketDomainError,
    evaluate,
    fourier_transform,
    gaussian_integral,
    integrate_over_affine_plane,
    inverse_fourier_transform,
    is_isotropic,
    isotropic_packet,
    lp_norm,
    modulus_squared,
    plane_offset_packet,
    schrodinger_evolve,
    tensor,
    total_integral,
)
from .grid import (
    GridField,
    ResolutionError,
    SinogramGrid,
    continuous_fourier_grid,
    evolve_grid,
    extension_audit_2d,
    sample_packet_on_grid,
    theorem11_functional_gaussian,
    theorem11_functional_numeric,
    theorem11_functional_packet,
    theorem22_radial_audit,
    xray_grid,
)
from .manifolds import (
    AffineKPlane,
    OrthonormalFrame,
    QuadratureError,
    SampleError,
    exact_grassmann_quadrature_2d,
    grassmann_expectation,
    projection,
    sample_stiefel,
    stiefel_frame_batch,
)
from .pairing import (
    PairingResult,
    apply_L,
    apply_L_inverse,
    covariance_lemma_check,
    delta_rho_pair_2d,
    drury_audit,
    pair_Ak_gaussian,
    rho,
    support_predicate,
)
from .records import AuditRecord, Measurement, emit_report, parse_report
from .runner import ConfigError, SuiteConfig, run_suite, run_suites
from .streams import SeededStream
from .weights import (
    CalibrationError,
    Configuration,
    comparability_scan,
    covariance,
    i_weight_eigen_mc,
    i_weight_mc,
    i_weight_quadratic,
    trace_variance,
)

__version__ = "0.1.0"
