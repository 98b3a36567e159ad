"""Pydantic request/response models for the analysis service."""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..series import TimeSeries


class SeriesPayload(BaseModel):
    years: list[int]
    values: list[float]

    def to_series(self) -> TimeSeries:
        return TimeSeries(tuple(self.years), tuple(self.values))

    @classmethod
    def from_series(cls, s: TimeSeries) -> "SeriesPayload":
        return cls(years=list(s.times), values=list(s.values))


class OrderSpec(BaseModel):
    p: int = 0
    d: int = 0
    q: int = 0
    include_constant: bool | None = None


class CorrelationRequest(BaseModel):
    series: SeriesPayload
    max_lag: int = 20


class CorrelationResponse(BaseModel):
    kind: str
    lags: list[int]
    values: list[float]
    threshold: float
    significant_lags: list[int]


class AdfRequest(BaseModel):
    series: SeriesPayload
    max_lag: int | None = None
    regression: str = "constant"
    level: float = 0.05


class AdfResponse(BaseModel):
    statistic: float
    p_value: float
    used_lags: int
    n_obs: int
    critical_values: dict[str, float]
    reject_unit_root: bool
    regression: str
    level: float


class FitRequest(BaseModel):
    series: SeriesPayload
    order: OrderSpec


class FitResponse(BaseModel):
    order: OrderSpec
    label: str
    ar: list[float]
    ma: list[float]
    constant: float
    sigma2: float
    loglik: float
    aic: float
    bic: float
    n_used: int
    converged: bool


class AutoRequest(BaseModel):
    series: SeriesPayload
    max_p: int = 2
    max_d: int = 2
    max_q: int = 2
    criterion: str = "aic"
    min_d: int | None = None


class CandidateInfo(BaseModel):
    label: str
    criterion_value: float | None
    skipped: str | None = None


class AutoResponse(BaseModel):
    best: FitResponse
    criterion: str
    chosen_d: int
    candidates: list[CandidateInfo]


class DiagnoseRequest(BaseModel):
    series: SeriesPayload
    order: OrderSpec


class LjungBoxPayload(BaseModel):
    statistic: float
    p_value: float
    lags: int
    dof: int


class JarqueBeraPayload(BaseModel):
    statistic: float
    p_value: float


class DiagnoseResponse(BaseModel):
    fit: FitResponse
    max_abs_residual: float
    skewness: float
    kurtosis: float
    ljung_box: LjungBoxPayload
    jarque_bera: JarqueBeraPayload
    standardized_residuals: list[float]
    qq_points: list[tuple[float, float]]
    kde_curve: list[tuple[float, float]]
    residual_acf: CorrelationResponse


class ForecastRequest(BaseModel):
    series: SeriesPayload
    order: OrderSpec
    horizon: int = 10
    alpha: float = 0.05


class ForecastResponse(BaseModel):
    model_label: str
    times: list[int]
    point: list[float]
    variance: list[float]
    lower: list[float]
    upper: list[float]
    alpha: float


class IngestCheckRequest(BaseModel):
    csv_text: str
    year_column: str = "Year"
    value_column: str | None = None


class IngestCheckResponse(BaseModel):
    n: int
    first_year: int
    last_year: int
    mean: float
    variance: float


class ReportRequest(BaseModel):
    csv_text: str
    year_column: str = "Year"
    value_column: str | None = None
    orders: list[OrderSpec] | None = None
    auto: AutoRequestGrid | None = None
    include_constant: bool | None = None
    lags: int = 20
    adf_regression: str = "constant"
    adf_max_lag: int | None = None
    horizon: int = 10
    alpha: float = 0.05
    formats: list[str] = Field(default_factory=lambda: ["json"])
    seed: int = 0


class AutoRequestGrid(BaseModel):
    max_p: int = 2
    max_d: int = 2
    max_q: int = 2
    criterion: str = "aic"
    min_d: int | None = None


class ReportResponse(BaseModel):
    document: dict
    json_text: str
    text: str | None = None
    figures: dict[str, str] = Field(default_factory=dict)


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorResponse(BaseModel):
    error: str
    message: str
    stage: str | None = None


ReportRequest.model_rebuild()
