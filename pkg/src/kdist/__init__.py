"""CDFs of the K-prime and K-square distributions by recursive incomplete-beta series."""

from .errors import DomainError, NotConverged, UnderflowError
from .kprime import KPrimeParams, kprime_cdf, kprime_ncp_solve, kprime_quantile
from .ksquare import KSquareParams, central_f_cdf, ksquare_cdf, ksquare_quantile
from .series_engine import EvalOptions, EvalReport, SignMode, Strategy
from .applications import (
    PredictiveF,
    PredictiveT,
    PriorSpec,
    corr_confidence_limits,
    corr_sampling_cdf,
    mcorr_sampling_cdf,
    p_rep,
    predictive_f_params,
    predictive_t_params,
    prob_replication_exceeds,
)

__all__ = [
    "DomainError", "NotConverged", "UnderflowError",
    "KPrimeParams", "kprime_cdf", "kprime_ncp_solve", "kprime_quantile",
    "KSquareParams", "central_f_cdf", "ksquare_cdf", "ksquare_quantile",
    "EvalOptions", "EvalReport", "SignMode", "Strategy",
    "PriorSpec", "PredictiveT", "PredictiveF",
    "predictive_t_params", "predictive_f_params", "p_rep", "prob_replication_exceeds",
    "corr_sampling_cdf", "corr_confidence_limits", "mcorr_sampling_cdf",
]
