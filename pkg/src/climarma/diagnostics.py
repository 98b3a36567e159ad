"""Residual diagnostics: standardized residuals, density, Q-Q, correlogram,
portmanteau and normality tests, and cross-model comparison tables.

Raw one-step prediction errors from the likelihood filter are the residuals;
``max_abs_residual`` is taken on the raw scale (the headline comparator for
model fit), while the distributional diagnostics standardize each residual
by its predicted standard deviation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2, norm

from .arma import log_likelihood
from .correlation import CorrelationSequence, sample_acf
from .estimation import FittedModel
from .exceptions import DegenerateInputError, InsufficientDataError, RangeError
from .series import MomentSummary, TimeSeries, moments

__all__ = [
    "LjungBoxResult",
    "JarqueBeraResult",
    "DiagnosticsReport",
    "ComparisonRow",
    "ComparisonTable",
    "diagnose",
    "compare",
    "gaussian_kde_curve",
    "normal_qq_points",
]

KDE_GRID_SIZE = 512
KDE_PAD_BANDWIDTHS = 3.0
RESIDUAL_ACF_LAGS = 20
LJUNG_BOX_LAGS = 10


@dataclass(frozen=True)
class LjungBoxResult:
    statistic: float
    p_value: float
    lags: int
    dof: int


@dataclass(frozen=True)
class JarqueBeraResult:
    statistic: float
    p_value: float


@dataclass(frozen=True)
class DiagnosticsReport:
    label: str
    order: tuple[int, int, int]
    standardized_residuals: tuple[float, ...]
    moments: MomentSummary
    max_abs_residual: float
    qq_points: tuple[tuple[float, float], ...]
    kde_curve: tuple[tuple[float, float], ...]
    residual_acf: CorrelationSequence
    ljung_box: LjungBoxResult
    jarque_bera: JarqueBeraResult
    aic: float
    bic: float


def silverman_bandwidth(x: np.ndarray) -> float:
    """0.9 * min(sd, IQR/1.34) * n^(-1/5)."""
    sd = float(np.std(x, ddof=1))
    q75, q25 = np.percentile(x, [75.0, 25.0])
    h = 0.9 * min(sd, (q75 - q25) / 1.34) * x.size ** (-0.2)
    if h <= 0 or not math.isfinite(h):
        raise DegenerateInputError("KDE bandwidth collapsed (degenerate residuals)")
    return h


def gaussian_kde_curve(x: np.ndarray, grid_size: int = KDE_GRID_SIZE):
    """Gaussian-kernel density on a fixed grid spanning the data +/- 3 bandwidths."""
    h = silverman_bandwidth(x)
    lo = float(np.min(x)) - KDE_PAD_BANDWIDTHS * h
    hi = float(np.max(x)) + KDE_PAD_BANDWIDTHS * h
    grid = np.linspace(lo, hi, grid_size)
    u = (grid[:, None] - x[None, :]) / h
    dens = norm.pdf(u).mean(axis=1) / h
    return grid, dens


def normal_qq_points(x: np.ndarray):
    """Normal Q-Q pairs: theoretical quantiles at (i - 0.5)/n vs sorted data."""
    srt = np.sort(np.asarray(x, dtype=float))
    n = srt.size
    theo = norm.ppf((np.arange(1, n + 1) - 0.5) / n)
    return theo, srt


def ljung_box(std_resid: np.ndarray, lags: int, model_df: int) -> LjungBoxResult:
    n = std_resid.size
    lags = min(lags, n - 1)
    rho = np.asarray(sample_acf(TimeSeries.from_values(std_resid), lags).values)[1:]
    k = np.arange(1, lags + 1)
    q = float(n * (n + 2) * np.sum(rho**2 / (n - k)))
    dof = max(1, lags - model_df)  # clamped for degenerate (p+q >= lags) orders
    return LjungBoxResult(q, float(chi2.sf(q, dof)), lags, dof)


def jarque_bera(m: MomentSummary, n: int) -> JarqueBeraResult:
    stat = n / 6.0 * (m.skewness**2 + (m.kurtosis - 3.0) ** 2 / 4.0)
    return JarqueBeraResult(float(stat), float(chi2.sf(stat, 2)))


def diagnose(model: FittedModel, series: TimeSeries, label: str | None = None) -> DiagnosticsReport:
    """Full residual diagnostics for a fitted model on its training series."""
    lik = log_likelihood(model.params, model.order, series)
    raw = np.asarray(lik.residuals)
    if raw.size < 8:
        raise InsufficientDataError(f"need at least 8 residuals, have {raw.size}")
    std = raw / np.sqrt(np.asarray(lik.residual_variances))

    mom = moments(TimeSeries.from_values(std))
    theo, srt = normal_qq_points(std)
    n = srt.size
    grid, dens = gaussian_kde_curve(raw)
    acf = sample_acf(TimeSeries.from_values(std), min(RESIDUAL_ACF_LAGS, n - 1))
    order = model.order
    return DiagnosticsReport(
        label=label or order.label(),
        order=(order.p, order.d, order.q),
        standardized_residuals=tuple(float(v) for v in std),
        moments=mom,
        max_abs_residual=float(np.max(np.abs(raw))),
        qq_points=tuple((float(a), float(b)) for a, b in zip(theo, srt)),
        kde_curve=tuple((float(a), float(b)) for a, b in zip(grid, dens)),
        residual_acf=acf,
        ljung_box=ljung_box(std, LJUNG_BOX_LAGS, order.p + order.q),
        jarque_bera=jarque_bera(mom, n),
        aic=model.aic,
        bic=model.bic,
    )


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    order: tuple[int, int, int]
    max_abs_residual: float
    skewness: float
    kurtosis_gap: float
    ljung_box_p: float
    aic: float
    bic: float
    criterion_rank: int
    residual_rank: int


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[ComparisonRow, ...]
    criterion: str

    def best_by_criterion(self) -> ComparisonRow:
        return next(r for r in self.rows if r.criterion_rank == 1)

    def best_by_residual(self) -> ComparisonRow:
        return next(r for r in self.rows if r.residual_rank == 1)


def compare(reports: list[tuple[str, DiagnosticsReport]], criterion: str = "aic") -> ComparisonTable:
    """Rank diagnostics reports across models.

    Rows are sorted by the information criterion (ties broken by smaller
    p + q, then smaller q; stable for identical keys).  A parallel ranking
    by smallest max |residual| is attached to every row, since that is the
    headline comparator when models live on different differencing levels
    (criterion values are not comparable across d).
    """
    if len(reports) < 2:
        raise RangeError("need at least two reports to compare")
    criterion = criterion.lower()
    if criterion not in ("aic", "bic"):
        raise RangeError(f"criterion must be 'aic' or 'bic', got {criterion!r}")

    def crit(rep: DiagnosticsReport) -> float:
        return rep.aic if criterion == "aic" else rep.bic

    idx = list(range(len(reports)))
    by_crit = sorted(
        idx,
        key=lambda i: (
            crit(reports[i][1]),
            reports[i][1].order[0] + reports[i][1].order[2],
            reports[i][1].order[2],
        ),
    )
    by_resid = sorted(idx, key=lambda i: reports[i][1].max_abs_residual)
    crit_rank = {i: k + 1 for k, i in enumerate(by_crit)}
    resid_rank = {i: k + 1 for k, i in enumerate(by_resid)}

    rows = []
    for i in by_crit:
        label, rep = reports[i]
        rows.append(
            ComparisonRow(
                label=label,
                order=rep.order,
                max_abs_residual=rep.max_abs_residual,
                skewness=rep.moments.skewness,
                kurtosis_gap=abs(rep.moments.kurtosis - 3.0),
                ljung_box_p=rep.ljung_box.p_value,
                aic=rep.aic,
                bic=rep.bic,
                criterion_rank=crit_rank[i],
                residual_rank=resid_rank[i],
            )
        )
    return ComparisonTable(tuple(rows), criterion)
