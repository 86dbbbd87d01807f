"""Index estimation in the monotone single index model."""

from ._monosindex import (
    DataError,
    NumericalFailure,
    SplineFit,
    asymptotic_covariance,
    ese_score,
    estimate,
    estimators,
    fit_smoothing_spline,
    generate_sample,
    lse_criterion,
    mre_objective,
    pava,
    plse_score,
    psi_alpha_oracle,
    sse_score,
)

__all__ = [
    "DataError",
    "NumericalFailure",
    "SplineFit",
    "asymptotic_covariance",
    "ese_score",
    "estimate",
    "estimators",
    "fit_smoothing_spline",
    "generate_sample",
    "lse_criterion",
    "mre_objective",
    "pava",
    "plse_score",
    "psi_alpha_oracle",
    "sse_score",
]
