"""Truncated m-step-ahead forecasting with prediction variances and intervals.

Point forecasts use the truncated recursion: in-sample innovations come from
the zero-initialized recursion w_t = x_t - c - sum(phi_i x_{t-i})
- sum(theta_j w_{t-j}) and innovations beyond the sample are set to zero.
Prediction variances use the psi-weight expansion
p_{n+m} = sigma2 * sum_{j=0}^{m-1} psi_j^2 with psi_0 = 1 and
psi_j = theta_j + sum_i phi_i psi_{j-i}.  For d > 0 the forecasts are
produced on the differenced scale and integrated back; the psi weights of
the integrated process are the d-fold cumulative sums, so the variance
accumulation follows the same formula on those weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter
from scipy.stats import norm

from .arma import ArmaParameters, ModelOrder
from .estimation import FittedModel
from .exceptions import RangeError
from .series import TimeSeries

__all__ = ["ForecastResult", "forecast", "psi_weights"]

MAX_HORIZON = 1000


@dataclass(frozen=True)
class ForecastResult:
    horizon: int
    times: tuple[int, ...]
    point: tuple[float, ...]
    variance: tuple[float, ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    alpha: float


def psi_weights(ar, ma, m: int, d: int = 0) -> np.ndarray:
    """First m causal MA(infinity) weights psi_0..psi_{m-1} of an ARIMA model.

    With d > 0 the stationary-part weights are cumulatively summed d times,
    which is polynomial division by (1-z)^d truncated at order m.
    """
    ar = np.asarray(ar, dtype=float)
    ma = np.asarray(ma, dtype=float)
    psi = np.zeros(m)
    psi[0] = 1.0
    for j in range(1, m):
        acc = ma[j - 1] if j - 1 < ma.size else 0.0
        upper = min(j, ar.size)
        for i in range(1, upper + 1):
            acc += ar[i - 1] * psi[j - i]
        psi[j] = acc
    for _ in range(d):
        psi = np.cumsum(psi)
    return psi


def _truncated_point_forecasts(z: np.ndarray, params: ArmaParameters, m: int) -> np.ndarray:
    """m-step forecasts of the (differenced) series via the truncated recursion."""
    phi = np.asarray(params.ar)
    theta = np.asarray(params.ma)
    mu = params.mean()
    zc = z - mu
    # truncated in-sample innovations, zero pre-sample values
    w = lfilter(np.concatenate(([1.0], -phi)), np.concatenate(([1.0], theta)), zc)
    n = zc.size
    hist = np.concatenate((zc, np.zeros(m)))
    wext = np.concatenate((w, np.zeros(m)))
    for j in range(m):
        t = n + j
        val = 0.0
        for i in range(1, phi.size + 1):
            if t - i >= 0:
                val += phi[i - 1] * hist[t - i]
        for k in range(1, theta.size + 1):
            if 0 <= t - k < n:
                val += theta[k - 1] * wext[t - k]
        hist[t] = val
    return hist[n:] + mu


def forecast(model: FittedModel, series: TimeSeries, m: int, alpha: float = 0.05) -> ForecastResult:
    """Forecast m steps ahead with (1 - alpha) prediction intervals.

    Interval half-width is z_{1-alpha/2} * sqrt(variance); variances are
    strictly positive and non-decreasing in the horizon.
    """
    if m < 1:
        raise RangeError(f"horizon must be >= 1, got {m}")
    if m > MAX_HORIZON:
        raise RangeError(f"horizon capped at {MAX_HORIZON}, got {m}")
    if not 0.0 < alpha < 1.0:
        raise RangeError(f"alpha must be in (0, 1), got {alpha}")
    order: ModelOrder = model.order
    params = model.params
    x = series.to_array()
    if x.size - order.d != model.n_used:
        raise RangeError(
            "series length does not match the sample the model was fitted on"
        )
    d = order.d
    z = np.diff(x, n=d) if d else x

    fc = _truncated_point_forecasts(z, params, m)
    # integrate back through the d anchor values at the end of the sample
    for k in range(d - 1, -1, -1):
        anchor = np.diff(x, n=k)[-1]
        fc = anchor + np.cumsum(fc)

    psi = psi_weights(params.ar, params.ma, m, d=d)
    variance = params.sigma2 * np.cumsum(psi**2)
    half = norm.ppf(1.0 - alpha / 2.0) * np.sqrt(variance)
    t0 = series.times[-1]
    return ForecastResult(
        horizon=m,
        times=tuple(range(t0 + 1, t0 + 1 + m)),
        point=tuple(float(v) for v in fc),
        variance=tuple(float(v) for v in variance),
        lower=tuple(float(v) for v in fc - half),
        upper=tuple(float(v) for v in fc + half),
        alpha=alpha,
    )
