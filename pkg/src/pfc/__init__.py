"""Fitted-component dimension reduction with finite-sample guarantees.

Simulation model, two subspace estimators (response-fitted and plain
principal components), exact angle laws, moment and confidence bounds,
and a Monte Carlo harness with named check suites.
"""
from .errors import (
    BoundUndefined,
    ConfigError,
    DegenerateResponses,
    DegenerateSpectrum,
    DimensionMismatch,
    IllConditioned,
    InvalidParam,
    LevelCrossing,
    NonFinite,
    NotOrthogonal,
    NotPositiveDefinite,
    NotSymmetric,
    PFCError,
    RankDeficient,
    SmallSampleWarning,
    SpacingDegenerateWarning,
    UnknownSuite,
    UnsupportedFyKind,
)
from .matkit import (
    Basis,
    Projector,
    SymEigen,
    WeylBounds,
    projector,
    sym_eig,
    weyl_bounds,
)
from .metrics import (
    AngleSample,
    c_ratio,
    m_metric,
    principal_angles,
    projector_distance,
    theta,
)
from .model import (
    Dataset,
    ModelSpec,
    VMatrix,
    build_fy,
    center,
    fit_predictors,
    simulate,
    simulate_given_responses,
    v_matrix,
)
from .estimators import PC, PFC, orthonormalize, pc, pfc
from .randsrc import (
    AngleLawParams,
    RngStream,
    sample_angle_fixed_lambda,
    sample_pfc_angle,
    sample_pfc_angles,
)
from .bounds import (
    CiReport,
    ConsistencyConstants,
    MomentReport,
    angle_lower_limit,
    angle_upper_limit,
    confidence_report,
    consistency_constants,
    crossing_report,
    pc_angle_approx,
    pc_angle_bound,
    signal_cov_limit,
    signal_noise_moments,
)
from .perturb import eigvec_correction, projected_trace_check, split_covariance
from .experiments import (
    CHECK_SUITES,
    BoundReport,
    CheckResult,
    ExperimentGrid,
    SeriesTable,
    bound_report,
    read_series_csv,
    run_checks,
    run_figure1,
    run_figure2,
)

__version__ = "0.1.0"

__all__ = [
    "AngleLawParams",
    "AngleSample",
    "Basis",
    "BoundReport",
    "BoundUndefined",
    "CHECK_SUITES",
    "CheckResult",
    "CiReport",
    "ConfigError",
    "ConsistencyConstants",
    "Dataset",
    "DegenerateResponses",
    "DegenerateSpectrum",
    "DimensionMismatch",
    "ExperimentGrid",
    "IllConditioned",
    "InvalidParam",
    "LevelCrossing",
    "ModelSpec",
    "MomentReport",
    "NonFinite",
    "NotOrthogonal",
    "NotPositiveDefinite",
    "NotSymmetric",
    "PC",
    "PFC",
    "PFCError",
    "Projector",
    "RankDeficient",
    "RngStream",
    "SeriesTable",
    "SmallSampleWarning",
    "SpacingDegenerateWarning",
    "SymEigen",
    "UnknownSuite",
    "UnsupportedFyKind",
    "VMatrix",
    "WeylBounds",
    "angle_lower_limit",
    "angle_upper_limit",
    "bound_report",
    "build_fy",
    "c_ratio",
    "center",
    "confidence_report",
    "consistency_constants",
    "crossing_report",
    "eigvec_correction",
    "fit_predictors",
    "m_metric",
    "orthonormalize",
    "pc",
    "pc_angle_approx",
    "pc_angle_bound",
    "pfc",
    "principal_angles",
    "projected_trace_check",
    "projector",
    "projector_distance",
    "read_series_csv",
    "run_checks",
    "run_figure1",
    "run_figure2",
    "sample_angle_fixed_lambda",
    "sample_pfc_angle",
    "sample_pfc_angles",
    "signal_cov_limit",
    "signal_noise_moments",
    "simulate",
    "simulate_given_responses",
    "split_covariance",
    "sym_eig",
    "theta",
    "v_matrix",
    "weyl_bounds",
]
