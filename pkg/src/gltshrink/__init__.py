"""Tail-adaptive global-local shrinkage regression toolkit."""

from .analysis import PosteriorSummary, mse_metrics, rank_coefficients, shrinkage_pairs, summarize
from .backend import backend_name, get_kernels, set_backend
from .chains import ChainConfig, ChainOutput, RegressionData
from .datagen import SimEnv, gaussian_kernel_design, quantile_transform, simulate
from .densities import (
    GltMarginalParams,
    glt_kappa_pdf,
    glt_marginal_beta,
    hs_kappa_pdf,
    hs_marginal_beta,
    tail_ratio_probe,
)
from .distributions import Gpd, gpd_cdf, gpd_pdf, gpd_quantile, gpd_sample, make_rng
from .ess import EllipseSpec, ess_step
from .glt_sampler import GltState, run_chain
from .hill import HillWindow, calibrated_mu, default_window, hill_estimates
from .hs_sampler import HsState, run_hs_chain
from .specfun import Accuracy, exp_integral_e, lower_inc_gamma, normal_quantile, student_t_cdf

__version__ = "0.1.0"

__all__ = [
    "Accuracy",
    "ChainConfig",
    "ChainOutput",
    "EllipseSpec",
    "GltMarginalParams",
    "GltState",
    "Gpd",
    "HillWindow",
    "HsState",
    "PosteriorSummary",
    "RegressionData",
    "SimEnv",
    "backend_name",
    "calibrated_mu",
    "default_window",
    "ess_step",
    "exp_integral_e",
    "gaussian_kernel_design",
    "get_kernels",
    "glt_kappa_pdf",
    "glt_marginal_beta",
    "gpd_cdf",
    "gpd_pdf",
    "gpd_quantile",
    "gpd_sample",
    "hill_estimates",
    "hs_kappa_pdf",
    "hs_marginal_beta",
    "lower_inc_gamma",
    "make_rng",
    "mse_metrics",
    "normal_quantile",
    "quantile_transform",
    "rank_coefficients",
    "run_chain",
    "run_hs_chain",
    "set_backend",
    "shrinkage_pairs",
    "simulate",
    "student_t_cdf",
    "summarize",
    "tail_ratio_probe",
    "__version__",
]
