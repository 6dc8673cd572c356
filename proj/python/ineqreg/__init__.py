"""Bayesian linear regression under linear inequality restrictions."""

from ._core import (
    RngStream,
    __version__,
    acf,
    check_feasible,
    ess,
    feasible_point,
    fit_multivariate,
    fit_univariate,
    mse,
    relative_efficiency,
    sample_inverse_gamma,
    sample_inverse_wishart,
    sample_matrix_normal,
    sample_tmvn_box,
    sample_truncnorm,
    select_partition,
    summarize,
)

__all__ = [
    "RngStream",
    "__version__",
    "acf",
    "check_feasible",
    "ess",
    "feasible_point",
    "fit_multivariate",
    "fit_univariate",
    "mse",
    "relative_efficiency",
    "sample_inverse_gamma",
    "sample_inverse_wishart",
    "sample_matrix_normal",
    "sample_tmvn_box",
    "sample_truncnorm",
    "select_partition",
    "summarize",
]
