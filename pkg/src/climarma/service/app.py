"""FastAPI application wrapping the core toolkit."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..exceptions import ClimarmaError, NonConvergenceError
from . import api
from . import schemas as sc

app = FastAPI(
    title="climarma",
    description="ARMA/ARIMA estimation, diagnostics and forecasting for annual anomaly series",
    version=__version__,
)


@app.exception_handler(ClimarmaError)
async def _domain_error(request: Request, exc: ClimarmaError):
    status = 409 if isinstance(exc, NonConvergenceError) else 422
    payload = sc.ErrorResponse(
        error=type(exc).__name__,
        message=str(exc),
        stage=getattr(exc, "stage", None),
    )
    return JSONResponse(status_code=status, content=payload.model_dump())


@app.get("/v1/health", response_model=sc.HealthResponse)
def health() -> sc.HealthResponse:
    return api.health()


@app.post("/v1/ingest-check", response_model=sc.IngestCheckResponse)
def ingest_check(req: sc.IngestCheckRequest) -> sc.IngestCheckResponse:
    return api.ingest_check(req)


@app.post("/v1/acf", response_model=sc.CorrelationResponse)
def acf(req: sc.CorrelationRequest) -> sc.CorrelationResponse:
    return api.acf(req)


@app.post("/v1/pacf", response_model=sc.CorrelationResponse)
def pacf(req: sc.CorrelationRequest) -> sc.CorrelationResponse:
    return api.pacf(req)


@app.post("/v1/adf", response_model=sc.AdfResponse)
def adf(req: sc.AdfRequest) -> sc.AdfResponse:
    return api.adf(req)


@app.post("/v1/fit", response_model=sc.FitResponse)
def fit(req: sc.FitRequest) -> sc.FitResponse:
    return api.fit_model(req)


@app.post("/v1/auto", response_model=sc.AutoResponse)
def auto(req: sc.AutoRequest) -> sc.AutoResponse:
    return api.auto(req)


@app.post("/v1/diagnose", response_model=sc.DiagnoseResponse)
def diagnose(req: sc.DiagnoseRequest) -> sc.DiagnoseResponse:
    return api.diagnose_model(req)


@app.post("/v1/forecast", response_model=sc.ForecastResponse)
def forecast(req: sc.ForecastRequest) -> sc.ForecastResponse:
    return api.forecast_model(req)


@app.post("/v1/report", response_model=sc.ReportResponse)
def report(req: sc.ReportRequest) -> sc.ReportResponse:
    return api.report(req)
