"""Service-layer functions: pydantic request in, pydantic response out.

The FastAPI app routes to these, and the CLI calls them directly when no
remote server is configured, so both transports share one implementation.
"""

from __future__ import annotations

from .. import __version__
from ..arma import ModelOrder
from ..correlation import sample_acf, sample_pacf
from ..diagnostics import diagnose
from ..estimation import FittedModel, auto_select, fit
from ..forecasting import forecast
from ..ingest import parse_anomaly_csv
from ..report import AnalysisConfig, run_analysis
from ..series import moments
from ..stationarity import adf_test
from . import schemas as sc


def _corr_response(c) -> sc.CorrelationResponse:
    return sc.CorrelationResponse(
        kind=c.kind,
        lags=list(c.lags),
        values=[float(v) for v in c.values],
        threshold=float(c.threshold),
        significant_lags=list(c.significant_lags()),
    )


def _fit_response(m: FittedModel) -> sc.FitResponse:
    o = m.order
    return sc.FitResponse(
        order=sc.OrderSpec(p=o.p, d=o.d, q=o.q, include_constant=o.include_constant),
        label=o.label(),
        ar=[float(v) for v in m.params.ar],
        ma=[float(v) for v in m.params.ma],
        constant=float(m.params.constant),
        sigma2=float(m.params.sigma2),
        loglik=float(m.loglik),
        aic=float(m.aic),
        bic=float(m.bic),
        n_used=m.n_used,
        converged=m.converged,
    )


def _order(spec: sc.OrderSpec) -> ModelOrder:
    return ModelOrder(spec.p, spec.d, spec.q, include_constant=spec.include_constant)


def acf(req: sc.CorrelationRequest) -> sc.CorrelationResponse:
    return _corr_response(sample_acf(req.series.to_series(), req.max_lag))


def pacf(req: sc.CorrelationRequest) -> sc.CorrelationResponse:
    return _corr_response(sample_pacf(req.series.to_series(), req.max_lag))


def adf(req: sc.AdfRequest) -> sc.AdfResponse:
    r = adf_test(req.series.to_series(), max_lag=req.max_lag,
                 regression=req.regression, level=req.level)
    return sc.AdfResponse(
        statistic=r.statistic,
        p_value=r.p_value,
        used_lags=r.used_lags,
        n_obs=r.n_obs,
        critical_values=dict(r.critical_values),
        reject_unit_root=r.reject_unit_root,
        regression=r.regression,
        level=r.level,
    )


def fit_model(req: sc.FitRequest) -> sc.FitResponse:
    return _fit_response(fit(req.series.to_series(), _order(req.order)))


def auto(req: sc.AutoRequest) -> sc.AutoResponse:
    sel = auto_select(
        req.series.to_series(),
        max_p=req.max_p,
        max_d=req.max_d,
        max_q=req.max_q,
        criterion=req.criterion,
        min_d=req.min_d,
    )
    return sc.AutoResponse(
        best=_fit_response(sel.best),
        criterion=sel.criterion,
        chosen_d=sel.chosen_d,
        candidates=[
            sc.CandidateInfo(
                label=c.order.label() if c.order else "(invalid)",
                criterion_value=None if c.fitted is None else float(c.criterion_value),
                skipped=c.error,
            )
            for c in sel.ranking
        ],
    )


def diagnose_model(req: sc.DiagnoseRequest) -> sc.DiagnoseResponse:
    series = req.series.to_series()
    model = fit(series, _order(req.order))
    d = diagnose(model, series)
    return sc.DiagnoseResponse(
        fit=_fit_response(model),
        max_abs_residual=d.max_abs_residual,
        skewness=d.moments.skewness,
        kurtosis=d.moments.kurtosis,
        ljung_box=sc.LjungBoxPayload(
            statistic=d.ljung_box.statistic,
            p_value=d.ljung_box.p_value,
            lags=d.ljung_box.lags,
            dof=d.ljung_box.dof,
        ),
        jarque_bera=sc.JarqueBeraPayload(
            statistic=d.jarque_bera.statistic, p_value=d.jarque_bera.p_value
        ),
        standardized_residuals=[float(v) for v in d.standardized_residuals],
        qq_points=[(float(a), float(b)) for a, b in d.qq_points],
        kde_curve=[(float(a), float(b)) for a, b in d.kde_curve],
        residual_acf=_corr_response(d.residual_acf),
    )


def forecast_model(req: sc.ForecastRequest) -> sc.ForecastResponse:
    series = req.series.to_series()
    model = fit(series, _order(req.order))
    f = forecast(model, series, req.horizon, req.alpha)
    return sc.ForecastResponse(
        model_label=model.order.label(),
        times=list(f.times),
        point=list(f.point),
        variance=list(f.variance),
        lower=list(f.lower),
        upper=list(f.upper),
        alpha=f.alpha,
    )


def ingest_check(req: sc.IngestCheckRequest) -> sc.IngestCheckResponse:
    s = parse_anomaly_csv(req.csv_text, req.year_column, req.value_column)
    m = moments(s)
    return sc.IngestCheckResponse(
        n=len(s),
        first_year=s.times[0],
        last_year=s.times[-1],
        mean=m.mean,
        variance=m.variance,
    )


def report(req: sc.ReportRequest) -> sc.ReportResponse:
    config = AnalysisConfig(
        csv_text=req.csv_text,
        year_column=req.year_column,
        value_column=req.value_column,
        orders=tuple((o.p, o.d, o.q) for o in req.orders) if req.orders else None,
        auto=None
        if req.auto is None
        else {
            "max_p": req.auto.max_p,
            "max_d": req.auto.max_d,
            "max_q": req.auto.max_q,
            "criterion": req.auto.criterion,
            **({"min_d": req.auto.min_d} if req.auto.min_d is not None else {}),
        },
        include_constant=req.include_constant,
        lags=req.lags,
        adf_regression=req.adf_regression,
        adf_max_lag=req.adf_max_lag,
        horizon=req.horizon,
        alpha=req.alpha,
        formats=tuple(req.formats),
        seed=req.seed,
    )
    bundle = run_analysis(config)
    return sc.ReportResponse(
        document=bundle.document,
        json_text=bundle.json_text,
        text=bundle.text_report,
        figures=bundle.figures,
    )


def health() -> sc.HealthResponse:
    return sc.HealthResponse(status="ok", version=__version__)
