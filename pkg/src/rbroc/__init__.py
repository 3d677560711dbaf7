"""Relative-belief ROC analysis.

Evidence-based Bayesian inference for diagnostic tests: prior elicitation,
Monte Carlo sampling of discrete, binormal, and Dirichlet-process models,
and relative-belief summaries for the AUC, optimal cutoffs, and error
characteristics at a cutoff.
"""

from .rb_core import (
    Grid,
    DensityHistogram,
    RelativeBeliefResult,
    HypothesisAssessment,
    relative_belief,
    assess_event,
    rb_summary,
)
from .elicitation import (
    BetaParams,
    KnownPrevalence,
    NormalGammaParams,
    DPConcentration,
    ElicitationError,
    elicit_beta,
    elicit_normal_gamma,
    elicit_dp_concentration,
    dp_bound,
)
from .error_metrics import (
    ErrorProfile,
    error_profile,
    auc,
    optimal_cutoff_grid,
    weighted_error_cutoff,
)
from .prevalence import PrevalenceModel, infer_prevalence
from .discrete_model import CountData, DirichletParams, DiscreteOptions, infer_discrete
from .binormal_model import (
    BinormalParams,
    SufficientStats,
    BinormalOptions,
    auc_binormal,
    copt_closed_form,
    finite_cutoff_condition,
    infer_binormal,
)
from .dp_model import DPData, DPModelSpec, DPOptions, infer_dp
from ._kernels import BACKEND as kernel_backend

__version__ = "0.1.0"

__all__ = [
    "Grid",
    "DensityHistogram",
    "RelativeBeliefResult",
    "HypothesisAssessment",
    "relative_belief",
    "assess_event",
    "rb_summary",
    "BetaParams",
    "KnownPrevalence",
    "NormalGammaParams",
    "DPConcentration",
    "ElicitationError",
    "elicit_beta",
    "elicit_normal_gamma",
    "elicit_dp_concentration",
    "dp_bound",
    "ErrorProfile",
    "error_profile",
    "auc",
    "optimal_cutoff_grid",
    "weighted_error_cutoff",
    "PrevalenceModel",
    "infer_prevalence",
    "CountData",
    "DirichletParams",
    "DiscreteOptions",
    "infer_discrete",
    "BinormalParams",
    "SufficientStats",
    "BinormalOptions",
    "auc_binormal",
    "copt_closed_form",
    "finite_cutoff_condition",
    "infer_binormal",
    "DPData",
    "DPModelSpec",
    "DPOptions",
    "infer_dp",
    "kernel_backend",
    "__version__",
]
