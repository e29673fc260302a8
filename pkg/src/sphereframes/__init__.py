"""Wavelet frames on the n-sphere: spectral profiles, discretization, verification."""

from .frame_verify import (
    ErrorBudget,
    FrameReport,
    certify_frame,
    error_budget,
    find_refinement,
    normalize_bounds,
)
from .harmonics import (
    HarmonicCoefficients,
    HarmonicIndex,
    SphereGrid,
    analyze,
    angles_to_vector,
    build_sphere_grid,
    dim_harmonic,
    surface_area,
    synthesize,
    vector_to_angles,
)
from .rotation_grid import (
    RotationGrid,
    SpherePartition,
    apply_rotation,
    build_rotation_grid,
    partition_sphere,
    rotation_matrix,
)
from .scale_grid import (
    EpsilonReport,
    ScaleCoverageWarning,
    ScaleGrid,
    build_scale_grid,
    discrete_beta,
    epsilon_report,
    find_ratio,
    scale_grid_for_profile,
)
from .transform import (
    TestField,
    TransformTable,
    energy_identity_oracle,
    frame_energy,
    random_bandlimited,
    transform_energies,
    wavelet_analysis,
)
from .wavelet_spectra import (
    BetaTable,
    SpectralProfile,
    beta_closed_form,
    beta_numeric,
    build_beta_table,
    make_preset,
    wavelet_bounds,
    zonal_hat,
)

__version__ = "0.1.0"

__all__ = [
    "BetaTable",
    "EpsilonReport",
    "ErrorBudget",
    "FrameReport",
    "HarmonicCoefficients",
    "HarmonicIndex",
    "RotationGrid",
    "ScaleCoverageWarning",
    "ScaleGrid",
    "SphereGrid",
    "SpherePartition",
    "SpectralProfile",
    "TestField",
    "TransformTable",
    "analyze",
    "angles_to_vector",
    "apply_rotation",
    "beta_closed_form",
    "beta_numeric",
    "build_beta_table",
    "build_rotation_grid",
    "build_scale_grid",
    "build_sphere_grid",
    "certify_frame",
    "dim_harmonic",
    "discrete_beta",
    "energy_identity_oracle",
    "epsilon_report",
    "error_budget",
    "find_ratio",
    "find_refinement",
    "frame_energy",
    "make_preset",
    "normalize_bounds",
    "partition_sphere",
    "random_bandlimited",
    "rotation_matrix",
    "scale_grid_for_profile",
    "surface_area",
    "synthesize",
    "transform_energies",
    "vector_to_angles",
    "wavelet_analysis",
    "wavelet_bounds",
    "zonal_hat",
    "__version__",
]
