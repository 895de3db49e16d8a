"""Nonlinear growth-curve and compartmental modeling of regional epidemic data.

Fits seven models (logistic, intervention-modulated diffusion curves
with rectangular / seasonal / swab-volume perturbations, a dynamic-
ceiling family, and an S-I-R-D compartmental system) to daily regional
cumulative case series, compares them by R^2 / BIC / daily correlation,
and projects three weeks ahead under a frozen swab schedule.
"""

from .data_ingest import (
    DEFAULT_WINDOW,
    REGION_ALIASES,
    REGIONS,
    RegionSeries,
    load_region,
)
from .estimation import (
    MODEL_NAMES,
    FitConfig,
    FitResult,
    ModelSpec,
    asymptotic_ci,
    default_starts,
    fit_model,
    mle_fit,
    model_spec,
    nls_fit,
    numeric_jacobian,
    profile_ci,
)
from .growth_models import (
    BassCoreParams,
    BemmaorParams,
    DmpParams,
    LogisticParams,
    RectShockParams,
    SeasonalParams,
    SwabShockParams,
    daily_increments,
    eval_begbm,
    eval_dmp,
    eval_dmp_perturbed,
    eval_gbm,
    eval_logistic,
)
from .intervention import (
    SwabStats,
    rect_integral,
    seasonal_integral,
    swab_integral,
    swab_stats,
    swab_weight,
)
from .metrics import (
    ForecastResult,
    MetricsReport,
    bic,
    compute_metrics,
    forecast,
    r_squared,
    rho_squared,
    saturation_fraction,
)
from .sird import (
    SirdParams,
    SirdState,
    SirdTransformedParams,
    integrate,
    neg_log_likelihood,
    sird_derivatives,
    total_cases,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_WINDOW",
    "REGION_ALIASES",
    "REGIONS",
    "RegionSeries",
    "load_region",
    "MODEL_NAMES",
    "FitConfig",
    "FitResult",
    "ModelSpec",
    "asymptotic_ci",
    "default_starts",
    "fit_model",
    "mle_fit",
    "model_spec",
    "nls_fit",
    "numeric_jacobian",
    "profile_ci",
    "BassCoreParams",
    "BemmaorParams",
    "DmpParams",
    "LogisticParams",
    "RectShockParams",
    "SeasonalParams",
    "SwabShockParams",
    "daily_increments",
    "eval_begbm",
    "eval_dmp",
    "eval_dmp_perturbed",
    "eval_gbm",
    "eval_logistic",
    "SwabStats",
    "rect_integral",
    "seasonal_integral",
    "swab_integral",
    "swab_stats",
    "swab_weight",
    "ForecastResult",
    "MetricsReport",
    "bic",
    "compute_metrics",
    "forecast",
    "r_squared",
    "rho_squared",
    "saturation_fraction",
    "SirdParams",
    "SirdState",
    "SirdTransformedParams",
    "integrate",
    "neg_log_likelihood",
    "sird_derivatives",
    "total_cases",
    "__version__",
]
