"""Traveling solitary waves of the compound Burgers-KdV equation.

Library layout: `model` holds parameter sets and pointwise residuals,
`series` the exponential-series arithmetic and the harmonic-balance
system, `solver` the gauge-fixed Newton / Gauss-Newton machinery,
`geometry` the phase surface and trajectory tracing for arbitrary
positive p, and `cli` the command-line front end.
"""

from .errors import (
    CbkdvError,
    DegenerateDispersion,
    DomainError,
    InvalidExponent,
    NonIntegerExponent,
    OrderMismatch,
    OverflowToInfinity,
    StencilOutOfDomain,
    StepSizeInvalid,
    UnsupportedIntegrationConstant,
)
from .geometry import (
    BLOWUP_LIMIT,
    SurfaceSpec,
    Trajectory,
    TrajectoryStatus,
    integrate_ode,
    reconstruct_point_cloud,
    sample_surface,
    surface_z,
)
from .model import (
    CbkdvParams,
    GeneralizedNonlinearity,
    GeneralizedOde,
    NormalizedParams,
    ProfilePoint,
    denormalize,
    generalized_ode_rhs,
    normalize,
    ode_residual,
    pde_residual_traveling,
    real_power,
)
from .series import (
    SAFE_ZETA_MAX,
    SAFE_ZETA_MIN,
    ExpSeries,
    HarmonicSystem,
    TruncationMode,
    build_system,
    eval_jacobian,
    eval_system,
    evaluate_profile,
    evaluate_series,
    series_power,
    series_product,
)
from .solver import (
    SeriesSolution,
    SolveOptions,
    VerifyReport,
    continuation_sweep,
    solve,
    verify_solution,
)

__version__ = "0.1.0"

__all__ = [
    "BLOWUP_LIMIT",
    "CbkdvError",
    "CbkdvParams",
    "DegenerateDispersion",
    "DomainError",
    "ExpSeries",
    "GeneralizedNonlinearity",
    "GeneralizedOde",
    "HarmonicSystem",
    "InvalidExponent",
    "NonIntegerExponent",
    "NormalizedParams",
    "OrderMismatch",
    "OverflowToInfinity",
    "ProfilePoint",
    "SAFE_ZETA_MAX",
    "SAFE_ZETA_MIN",
    "SeriesSolution",
    "SolveOptions",
    "StencilOutOfDomain",
    "StepSizeInvalid",
    "SurfaceSpec",
    "Trajectory",
    "TrajectoryStatus",
    "TruncationMode",
    "UnsupportedIntegrationConstant",
    "VerifyReport",
    "build_system",
    "continuation_sweep",
    "denormalize",
    "eval_jacobian",
    "eval_system",
    "evaluate_profile",
    "evaluate_series",
    "generalized_ode_rhs",
    "integrate_ode",
    "normalize",
    "ode_residual",
    "pde_residual_traveling",
    "real_power",
    "reconstruct_point_cloud",
    "sample_surface",
    "series_power",
    "series_product",
    "solve",
    "surface_z",
    "verify_solution",
]
