"""Sample and theoretical autocorrelation / partial autocorrelation sequences.

Sample autocovariances use the biased denominator n, which keeps the
autocovariance sequence positive semidefinite -- a requirement of the
Durbin-Levinson recursion used for the PACF.  Confidence thresholds are the
large-sample white-noise band z_0.975 / sqrt(n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    AdmissibilityError,
    NumericalDegeneracyError,
    RangeError,
)
from .series import TimeSeries

__all__ = [
    "CorrelationSequence",
    "sample_acf",
    "sample_pacf",
    "theoretical_acf_ar1",
    "theoretical_acf_arma11",
    "acf_arma11_special",
]

# standard normal 97.5% quantile; the classic "1.96" band
Z_975 = 1.959963984540054


@dataclass(frozen=True)
class CorrelationSequence:
    """ACF or PACF values per lag with a symmetric confidence band half-width."""

    kind: str  # "ACF" or "PACF"
    lags: tuple[int, ...]
    values: tuple[float, ...]
    threshold: float

    def __post_init__(self):
        if self.kind not in ("ACF", "PACF"):
            raise RangeError(f"kind must be ACF or PACF, got {self.kind!r}")
        if len(self.lags) != len(self.values):
            raise RangeError("lags and values differ in length")
        if any(abs(v) > 1.0 + 1e-9 for v in self.values):
            raise NumericalDegeneracyError("correlation value outside [-1, 1]")

    def value(self, lag: int) -> float:
        return self.values[self.lags.index(lag)]

    def significant_lags(self) -> tuple[int, ...]:
        """Lags (excluding lag 0) whose |value| exceeds the threshold."""
        return tuple(
            lag for lag, v in zip(self.lags, self.values) if lag > 0 and abs(v) > self.threshold
        )


def _autocovariances(x: np.ndarray, max_lag: int) -> np.ndarray:
    n = x.size
    c = x - x.mean()
    return np.asarray([c[: n - h] @ c[h:] / n for h in range(max_lag + 1)])


def sample_acf(series: TimeSeries, max_lag: int) -> CorrelationSequence:
    """Sample autocorrelation for lags 0..max_lag.

    value(h) = gamma_hat(h) / gamma_hat(0) with the biased (denominator n)
    autocovariance estimator; value(0) is exactly 1.
    """
    n = len(series)
    if not 1 <= max_lag < n:
        raise RangeError(f"max_lag must be in [1, {n - 1}], got {max_lag}")
    gamma = _autocovariances(series.to_array(), max_lag)
    if gamma[0] <= 0:
        raise NumericalDegeneracyError("zero-variance series has no autocorrelation")
    rho = gamma / gamma[0]
    rho[0] = 1.0
    return CorrelationSequence(
        "ACF", tuple(range(max_lag + 1)), tuple(float(v) for v in rho), Z_975 / np.sqrt(n)
    )


def pacf_from_acf(rho: np.ndarray) -> np.ndarray:
    """Durbin-Levinson recursion: partial autocorrelations from rho(1..L).

    ``rho`` holds autocorrelations for lags 0..L (rho[0] == 1).  Returns
    phi_hh for h = 1..L.  Raises on a degenerate step (|phi_kk| >= 1 or a
    non-positive prediction-variance factor), which signals non-PSD input.
    """
    L = rho.size - 1
    pacf = np.empty(L)
    phi_prev = np.empty(L)
    phi_cur = np.empty(L)
    if abs(rho[1]) >= 1.0:
        raise NumericalDegeneracyError("lag-1 autocorrelation outside (-1, 1)")
    pacf[0] = phi_prev[0] = rho[1]
    for k in range(2, L + 1):
        num = rho[k] - phi_prev[: k - 1] @ rho[k - 1 : 0 : -1]
        den = 1.0 - phi_prev[: k - 1] @ rho[1:k]
        if den <= 0:
            raise NumericalDegeneracyError(
                f"Durbin-Levinson prediction variance non-positive at lag {k}"
            )
        phi_kk = num / den
        if abs(phi_kk) >= 1.0:
            raise NumericalDegeneracyError(
                f"partial autocorrelation at lag {k} outside (-1, 1): {phi_kk:.6g}"
            )
        phi_cur[: k - 1] = phi_prev[: k - 1] - phi_kk * phi_prev[k - 2 :: -1]
        phi_cur[k - 1] = pacf[k - 1] = phi_kk
        phi_prev, phi_cur = phi_cur, phi_prev
    return pacf


def sample_pacf(series: TimeSeries, max_lag: int) -> CorrelationSequence:
    """Sample partial autocorrelation for lags 1..max_lag via Durbin-Levinson."""
    n = len(series)
    if not 1 <= max_lag < n / 2:
        raise RangeError(f"max_lag must be in [1, n/2) with n={n}, got {max_lag}")
    rho = np.asarray(sample_acf(series, max_lag).values)
    pacf = pacf_from_acf(rho)
    return CorrelationSequence(
        "PACF", tuple(range(1, max_lag + 1)), tuple(float(v) for v in pacf), Z_975 / np.sqrt(n)
    )


def theoretical_acf_ar1(phi: float, h: int) -> float:
    """AR(1) autocorrelation rho(h) = phi**h for |phi| < 1, h >= 0."""
    if abs(phi) >= 1:
        raise AdmissibilityError(f"AR(1) requires |phi| < 1, got {phi}")
    if h < 0:
        raise RangeError(f"lag must be >= 0, got {h}")
    return float(phi**h)


def theoretical_acf_arma11(phi: float, theta: float, h: int) -> float:
    """ARMA(1,1) autocorrelation at lag h >= 1.

    rho(h) = [(phi + theta)(1 + phi*theta) / (1 + 2*phi*theta + theta^2)]
             * phi^(h-1)

    for the model x_t = phi x_{t-1} + w_t + theta w_{t-1} with |phi| < 1
    (stationarity) and |theta| < 1 (invertibility).  With theta = 0 this
    reduces to the AR(1) form phi^h.
    """
    if abs(phi) >= 1:
        raise AdmissibilityError(f"stationarity requires |phi| < 1, got {phi}")
    if abs(theta) >= 1:
        raise AdmissibilityError(f"invertibility requires |theta| < 1, got {theta}")
    if h < 1:
        raise RangeError(f"lag must be >= 1, got {h}")
    rho1 = (phi + theta) * (1.0 + phi * theta) / (1.0 + 2.0 * phi * theta + theta**2)
    return float(rho1 * phi ** (h - 1))


def acf_arma11_special(beta: float, h: int) -> float:
    """Specialized closed form rho(h) = (1/2) (1 + beta) beta^(h-1).

    This is the simplified expression sometimes quoted for the composite
    land/sea noise model with unit MA weight.  It is NOT the general
    ARMA(1,1) autocorrelation (see :func:`theoretical_acf_arma11`) and the
    two only coincide at particular parameter values; it is exposed for
    reproducibility of that narrative, not as ground truth.
    """
    if abs(beta) >= 1:
        raise AdmissibilityError(f"requires |beta| < 1, got {beta}")
    if h < 1:
        raise RangeError(f"lag must be >= 1, got {h}")
    return float(0.5 * (1.0 + beta) * beta ** (h - 1))
