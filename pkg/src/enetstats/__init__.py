"""Elastic-net regularization paths with cross-validated penalty selection
and multivariate regression diagnostics."""

from .cv import CvResult, FoldAssignment, cross_validate, make_folds
from .dataprep import (
    RawTable,
    StandardizedMatrix,
    SubsetConfig,
    destandardize,
    load_csv,
    select_variables,
    standardize,
)
from .dist import TailProbability, f_sf, log_gamma, reg_incomplete_beta, t_sf
from .enet import (
    EnetConfig,
    EnetPath,
    compute_lambda_max,
    deviance_explained,
    fit_gaussian_path,
    fit_mgaussian_path,
    group_soft_threshold,
    kkt_check,
    make_lambda_path,
    objective,
    soft_threshold,
)
from .inference import (
    MlmFit,
    fit_mlm,
    manova_table,
    pearson,
    residual_diagnostics,
    univariate_summary,
    vif,
)
from .linalg import cholesky_solve, least_squares, matmul

__version__ = "0.1.0"

__all__ = [
    "CvResult",
    "EnetConfig",
    "EnetPath",
    "FoldAssignment",
    "MlmFit",
    "RawTable",
    "StandardizedMatrix",
    "SubsetConfig",
    "TailProbability",
    "cholesky_solve",
    "compute_lambda_max",
    "cross_validate",
    "destandardize",
    "deviance_explained",
    "f_sf",
    "fit_gaussian_path",
    "fit_mgaussian_path",
    "fit_mlm",
    "group_soft_threshold",
    "kkt_check",
    "least_squares",
    "load_csv",
    "log_gamma",
    "make_folds",
    "make_lambda_path",
    "manova_table",
    "matmul",
    "objective",
    "pearson",
    "reg_incomplete_beta",
    "residual_diagnostics",
    "select_variables",
    "soft_threshold",
    "standardize",
    "t_sf",
    "univariate_summary",
    "vif",
]
