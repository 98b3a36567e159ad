"""Augmented Dickey-Fuller unit-root test.

The test regression is

    dx_t = alpha + (delta * t) + gamma * x_{t-1} + sum_i beta_i dx_{t-i} + e_t

fitted by OLS; the statistic is gamma_hat / se(gamma_hat).  Lag order is
chosen by AIC minimization over 0..max_lag on a common trimmed sample, then
the final regression is re-estimated on the full sample available for the
chosen lag.  P-values use the MacKinnon (1994) response-surface polynomial
approximation; critical values use the MacKinnon (2010) response surfaces.
Both constant tables are reproduced below from the published papers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular
from scipy.stats import norm

from .exceptions import DegenerateInputError, InsufficientDataError, RangeError
from .series import TimeSeries

__all__ = ["AdfResult", "adf_test"]

_REGRESSION_ALIASES = {
    "constant": "c",
    "c": "c",
    "constant+trend": "ct",
    "ct": "ct",
    "none": "n",
    "n": "n",
    "nc": "n",
}

# MacKinnon (1994) approximate asymptotic p-value surfaces for the ADF tau
# statistic, N=1.  Outside [tau_min, tau_max] the p-value saturates at 0/1;
# below tau_star the small-p polynomial applies, above it the large-p one.
# p = Phi(polynomial(tau)).
_TAU_MAX = {"n": math.inf, "c": 2.74, "ct": 0.7}
_TAU_MIN = {"n": -19.04, "c": -18.83, "ct": -16.18}
_TAU_STAR = {"n": -1.04, "c": -1.61, "ct": -2.89}
_TAU_SMALLP = {
    "n": (0.6344, 1.2378, 3.2496e-2),
    "c": (2.1659, 1.4412, 3.8269e-2),
    "ct": (3.2512, 1.6047, 4.9588e-2),
}
_TAU_LARGEP = {
    "n": (0.4797, 9.3557e-1, -0.6999e-1, 3.3066e-2),
    "c": (1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2),
    "ct": (2.5261, 6.1654e-1, -3.7956e-1, -6.0285e-2),
}

# MacKinnon (2010) critical-value response surfaces, N=1:
# cv(T) = b0 + b1/T + b2/T^2 + b3/T^3 at the 1%/5%/10% levels.
_CV_SURFACE = {
    "n": (
        (-2.56574, -2.2358, -3.627, 0.0),
        (-1.94100, -0.2686, -3.365, 31.223),
        (-1.61682, 0.2656, -2.714, 25.364),
    ),
    "c": (
        (-3.43035, -6.5393, -16.786, -79.433),
        (-2.86154, -2.8903, -4.234, -40.040),
        (-2.56677, -1.5384, -2.809, 0.0),
    ),
    "ct": (
        (-3.95877, -9.0531, -28.428, -134.155),
        (-3.41049, -4.3904, -9.036, -45.374),
        (-3.12705, -2.5856, -3.925, -22.380),
    ),
}
_CV_LEVELS = ("1%", "5%", "10%")


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    p_value: float
    used_lags: int
    n_obs: int
    critical_values: dict[str, float]
    reject_unit_root: bool
    regression: str
    level: float

    def __post_init__(self):
        cvs = [self.critical_values[k] for k in _CV_LEVELS]
        if not (cvs[0] < cvs[1] < cvs[2]):
            raise RangeError("critical values must increase from 1% to 10%")


def mackinnon_pvalue(stat: float, regression: str) -> float:
    reg = _REGRESSION_ALIASES[regression]
    if stat > _TAU_MAX[reg]:
        return 1.0
    if stat < _TAU_MIN[reg]:
        return 0.0
    coeffs = _TAU_SMALLP[reg] if stat <= _TAU_STAR[reg] else _TAU_LARGEP[reg]
    return float(norm.cdf(np.polyval(coeffs[::-1], stat)))


def mackinnon_critical_values(regression: str, n_obs: int) -> dict[str, float]:
    reg = _REGRESSION_ALIASES[regression]
    out = {}
    for level, (b0, b1, b2, b3) in zip(_CV_LEVELS, _CV_SURFACE[reg]):
        t = float(n_obs)
        out[level] = b0 + b1 / t + b2 / t**2 + b3 / t**3
    return out


def _ols(y: np.ndarray, X: np.ndarray):
    """OLS via QR; returns (beta, se, ssr).  Raises on a singular design."""
    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    if diag.min() < 1e-12 * max(diag.max(), 1.0):
        raise DegenerateInputError("singular regression matrix in ADF test")
    beta = solve_triangular(R, Q.T @ y)
    resid = y - X @ beta
    ssr = float(resid @ resid)
    dof = y.size - X.shape[1]
    if dof <= 0:
        raise InsufficientDataError("no residual degrees of freedom in ADF regression")
    Rinv = solve_triangular(R, np.eye(R.shape[0]))
    se = np.sqrt(ssr / dof * np.sum(Rinv**2, axis=1))
    return beta, se, ssr


def _best_lag_by_aic(y: np.ndarray, X_full: np.ndarray, base: int) -> int:
    """AIC-minimizing lag count over nested designs X_full[:, :base + k].

    Candidate designs share a common column prefix, so a single QR of the
    full design yields every candidate's SSR: for the first k columns,
    SSR_k = y'y - sum_{i<k} (Q'y)_i^2.
    """
    Q, R = np.linalg.qr(X_full)
    diag = np.abs(np.diag(R))
    if diag.min() < 1e-12 * max(diag.max(), 1.0):
        raise DegenerateInputError("singular regression matrix in ADF lag search")
    qty = Q.T @ y
    yty = float(y @ y)
    n = y.size
    max_k = X_full.shape[1] - base
    best_lag, best_aic = 0, math.inf
    for k in range(max_k + 1):
        ssr = yty - float(qty[: base + k] @ qty[: base + k])
        if ssr <= 0:
            raise DegenerateInputError("perfect fit in ADF lag search (degenerate input)")
        llf = -0.5 * n * (math.log(2.0 * math.pi) + math.log(ssr / n) + 1.0)
        aic = -2.0 * llf + 2.0 * (base + k)
        if aic < best_aic:
            best_aic, best_lag = aic, k
    return best_lag


def _design(x: np.ndarray, k: int, reg: str):
    """Response dx_t and columns [const?, trend?, x_{t-1}, dx_{t-1}..dx_{t-k}]."""
    dx = np.diff(x)
    nobs = dx.size - k
    y = dx[k:]
    cols = []
    if reg in ("c", "ct"):
        cols.append(np.ones(nobs))
    if reg == "ct":
        cols.append(np.arange(1.0, nobs + 1.0))
    level_col = len(cols)
    cols.append(x[k:-1])
    for i in range(1, k + 1):
        cols.append(dx[k - i : k - i + nobs])
    return y, np.column_stack(cols), level_col


def adf_test(
    series: TimeSeries,
    max_lag: int | None = None,
    regression: str = "constant",
    autolag: bool = True,
    level: float = 0.05,
) -> AdfResult:
    """Augmented Dickey-Fuller test (null: unit root / non-stationary).

    ``max_lag=None`` applies the Schwert bound floor(12*(n/100)^0.25).  With
    ``autolag`` (default) the lag count minimizing AIC over 0..max_lag is
    used, all candidates evaluated on the same trimmed sample; otherwise
    exactly ``max_lag`` lags are used.  ``reject_unit_root`` compares the
    statistic against the critical value at ``level`` (one of 1%/5%/10%).
    """
    reg = _REGRESSION_ALIASES.get(regression)
    if reg is None:
        raise RangeError(f"unknown regression spec {regression!r}")
    level_key = {0.01: "1%", 0.05: "5%", 0.10: "10%"}.get(round(level, 10))
    if level_key is None:
        raise RangeError(f"level must be one of 0.01/0.05/0.10, got {level}")
    x = series.to_array()
    n = x.size
    if max_lag is None:
        max_lag = int(12.0 * (n / 100.0) ** 0.25)
        ntrend = {"n": 0, "c": 1, "ct": 2}[reg]
        max_lag = min(max_lag, n // 2 - ntrend - 1)
    if max_lag < 0:
        raise RangeError(f"max_lag must be >= 0, got {max_lag}")
    if n < max_lag + 10:
        raise InsufficientDataError(
            f"need n >= max_lag + 10 observations (n={n}, max_lag={max_lag})"
        )

    if autolag and max_lag > 0:
        # common trimmed sample: all candidates lose max_lag leading rows
        y_full, X_full, level_col = _design(x, max_lag, reg)
        used_lag = _best_lag_by_aic(y_full, X_full, base=level_col + 1)
    else:
        used_lag = max_lag

    y, X, level_col = _design(x, used_lag, reg)
    beta, se, _ = _ols(y, X)
    stat = float(beta[level_col] / se[level_col])
    n_obs = y.size
    crit = mackinnon_critical_values(reg, n_obs)
    return AdfResult(
        statistic=stat,
        p_value=mackinnon_pvalue(stat, reg),
        used_lags=used_lag,
        n_obs=n_obs,
        critical_values=crit,
        reject_unit_root=bool(stat < crit[level_key]),
        regression=reg,
        level=level,
    )
