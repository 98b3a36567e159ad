"""Univariate ARMA/ARIMA toolkit for annual temperature-anomaly analysis."""

from .arma import (
    AdmissibilityReport,
    ArmaParameters,
    LikelihoodResult,
    ModelOrder,
    check_admissible,
    log_likelihood,
    simulate,
)
from .correlation import (
    CorrelationSequence,
    acf_arma11_special,
    sample_acf,
    sample_pacf,
    theoretical_acf_ar1,
    theoretical_acf_arma11,
)
from .diagnostics import DiagnosticsReport, compare, diagnose
from .estimation import FittedModel, SelectionResult, auto_select, fit
from .forecasting import ForecastResult, forecast
from .series import MomentSummary, TimeSeries, difference, integrate, moments
from .stationarity import AdfResult, adf_test
from .uncertainty import (
    BiasedAnomalyConfig,
    UncertaintyDecomposition,
    decompose,
    difference_series,
    reduce_to_arma,
    simulate_biased_anomaly,
)

__version__ = "0.1.0"

__all__ = [
    "AdfResult",
    "AdmissibilityReport",
    "ArmaParameters",
    "BiasedAnomalyConfig",
    "CorrelationSequence",
    "DiagnosticsReport",
    "FittedModel",
    "ForecastResult",
    "LikelihoodResult",
    "ModelOrder",
    "MomentSummary",
    "SelectionResult",
    "TimeSeries",
    "UncertaintyDecomposition",
    "acf_arma11_special",
    "adf_test",
    "auto_select",
    "check_admissible",
    "compare",
    "decompose",
    "diagnose",
    "difference",
    "difference_series",
    "fit",
    "forecast",
    "integrate",
    "log_likelihood",
    "moments",
    "reduce_to_arma",
    "sample_acf",
    "sample_pacf",
    "simulate",
    "simulate_biased_anomaly",
    "theoretical_acf_ar1",
    "theoretical_acf_arma11",
    "__version__",
]
