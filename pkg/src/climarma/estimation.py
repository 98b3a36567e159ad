"""Maximum-likelihood ARIMA fitting and automatic order selection.

Fitting maximizes the exact Gaussian log-likelihood (see :mod:`.arma`) with
Nelder-Mead restarts.  Coefficients are optimized in an unconstrained space:
each AR/MA coefficient vector is represented by partial autocorrelations
mapped through tanh (a monotone bijection onto (-1, 1) per coordinate), so
every candidate the optimizer visits is stationary and invertible.  The
innovation variance is concentrated out of the likelihood.

Restart schedule: the truncated conditional-sum-of-squares (CSS) estimate
seeds the first exact-likelihood run, with further runs from a small
deterministic perturbation grid around it.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter

from .arma import (
    LOG_2PI,
    ArmaParameters,
    ModelOrder,
    check_admissible,
    filter_demeaned,
    log_likelihood,
)
from .exceptions import (
    AdmissibilityError,
    DegenerateInputError,
    InsufficientDataError,
    NonConvergenceError,
    NumericalDegeneracyError,
    RangeError,
)
from .series import TimeSeries, difference
from .stationarity import adf_test

__all__ = ["FittedModel", "FitReport", "CandidateFit", "SelectionResult", "fit", "auto_select"]

logger = logging.getLogger(__name__)

# keeps every visited coefficient vector a safe margin inside the admissible
# region (polynomial roots >= ~1e-6 outside the unit circle, comfortably past
# the 1e-8 admissibility tolerance)
_PACF_CLIP = 1.0 - 1e-6
# a fitted optimum whose polynomial roots sit this close to the unit circle
# is pinned at the clip: the unconstrained optimum diverges, so the fit is
# reported as non-convergent (typical for overdifferenced data, where the MA
# root heads to -1)
_BOUNDARY_MARGIN = 1e-4
_PENALTY = 1e12
_SIMPLEX_TOL = 1e-8


# ---------------------------------------------------------------------------
# unconstrained reparameterization (partial autocorrelations <-> coefficients)

def pacf_to_ar(r: np.ndarray) -> np.ndarray:
    """Map partial autocorrelations in (-1,1)^p to stationary AR coefficients."""
    a = np.array(r, dtype=float)
    for j in range(1, a.size):
        a[:j] = a[:j] - r[j] * a[j - 1 :: -1]
    return a


def ar_to_pacf(a: np.ndarray) -> np.ndarray:
    """Inverse of :func:`pacf_to_ar` (exact for stationary coefficient vectors)."""
    a = np.array(a, dtype=float)
    p = a.size
    r = np.empty(p)
    for j in range(p - 1, 0, -1):
        rj = a[j]
        r[j] = rj
        den = 1.0 - rj * rj
        if den <= 0 or not math.isfinite(den):
            raise NumericalDegeneracyError("coefficient vector is not stationary")
        a[:j] = (a[:j] + rj * a[j - 1 :: -1]) / den
    if p:
        r[0] = a[0]
    return r


def _unconstrained_to_coeffs(u: np.ndarray, p: int, q: int):
    """(u_ar, u_ma) in R^(p+q) -> admissible (phi, theta)."""
    r_ar = np.clip(np.tanh(u[:p]), -_PACF_CLIP, _PACF_CLIP)
    r_ma = np.clip(np.tanh(u[p : p + q]), -_PACF_CLIP, _PACF_CLIP)
    phi = pacf_to_ar(r_ar) if p else np.empty(0)
    # theta(z) = 1 + sum theta_i z^i is invertible iff 1 - sum(-theta_i) z^i
    # is stationary, so the MA vector rides the same transform with a sign flip
    theta = -pacf_to_ar(r_ma) if q else np.empty(0)
    return phi, theta


def _coeffs_to_unconstrained(phi: np.ndarray, theta: np.ndarray) -> np.ndarray:
    def safe_pacf(vec):
        try:
            r = ar_to_pacf(np.asarray(vec, dtype=float))
        except NumericalDegeneracyError:
            r = np.zeros(len(vec))
        r = np.nan_to_num(r, nan=0.0, posinf=0.0, neginf=0.0)
        return np.clip(r, -0.95, 0.95)

    parts = []
    if len(phi):
        parts.append(np.arctanh(safe_pacf(phi)))
    if len(theta):
        parts.append(np.arctanh(safe_pacf(-np.asarray(theta))))
    return np.concatenate(parts) if parts else np.empty(0)


# ---------------------------------------------------------------------------
# initializers

def _lagmat(x: np.ndarray, k: int) -> np.ndarray:
    """Columns x_{t-1}..x_{t-k} for t = k..n-1."""
    n = x.size
    return np.column_stack([x[k - j - 1 : n - j - 1] for j in range(k)])


def _hannan_rissanen(z: np.ndarray, p: int, q: int):
    """Closed-form two-stage start values for (phi, theta) on demeaned data."""
    n = z.size
    if p + q == 0:
        return np.empty(0), np.empty(0)
    try:
        if q == 0:
            X = _lagmat(z, p)
            phi, *_ = np.linalg.lstsq(X, z[p:], rcond=None)
            return phi, np.empty(0)
        k = int(min(n // 4, max(10, p + q + 5, 12 * (n / 100.0) ** 0.25)))
        k = max(k, p + q)
        Xk = _lagmat(z, k)
        a, *_ = np.linalg.lstsq(Xk, z[k:], rcond=None)
        e = np.concatenate((np.zeros(k), z[k:] - Xk @ a))
        t0 = k + q
        cols = [z[t0 - i - 1 : n - i - 1] for i in range(p)]
        cols += [e[t0 - j - 1 : n - j - 1] for j in range(q)]
        X2 = np.column_stack(cols)
        beta, *_ = np.linalg.lstsq(X2, z[t0:], rcond=None)
        return beta[:p], beta[p : p + q]
    except np.linalg.LinAlgError:
        return np.zeros(p), np.zeros(q)


# ---------------------------------------------------------------------------
# fit machinery

@dataclass(frozen=True)
class FitReport:
    """Optimizer trace summary for a single fit."""

    n_restarts: int
    n_evaluations: int
    simplex_diameter: float
    start_loglik: float
    messages: tuple[str, ...] = ()


@dataclass(frozen=True)
class FittedModel:
    order: ModelOrder
    params: ArmaParameters
    loglik: float
    aic: float
    bic: float
    n_used: int
    converged: bool
    fit_report: FitReport

    def n_free_parameters(self) -> int:
        return self.order.p + self.order.q + int(self.order.include_constant) + 1


def _simplex_diameter(res) -> float:
    verts = res.final_simplex[0]
    return float(
        max(
            np.max(np.abs(verts[i] - verts[j]))
            for i in range(len(verts))
            for j in range(i + 1, len(verts))
        )
        if len(verts) > 1
        else 0.0
    )


def _run_nelder_mead(fun, x0: np.ndarray):
    # xatol is vertex-to-best distance; 4e-9 keeps the full simplex diameter
    # under the 1e-8 convergence tolerance.  fatol is lax on purpose: the
    # objective is O(n) in magnitude, so the x-criterion is the binding one.
    res = minimize(
        fun,
        x0,
        method="Nelder-Mead",
        options={"xatol": 0.4 * _SIMPLEX_TOL, "fatol": 1e-6, "maxiter": 4000, "maxfev": 8000},
    )
    return res.x, float(res.fun), _simplex_diameter(res), int(res.nfev)


def fit(series: TimeSeries, order: ModelOrder) -> FittedModel:
    """Fit an ARIMA(p,d,q) model by exact maximum likelihood.

    The series is differenced d times and rescaled to unit variance
    internally (restored afterwards), which makes the fit scale-equivariant
    and keeps the simplex well conditioned.  Raises
    :class:`NonConvergenceError` (carrying the best fit found) only when no
    restart reaches the simplex-diameter tolerance.
    """
    p, q, d = order.p, order.q, order.d
    x = series.to_array()
    n = x.size
    if n - d <= p + q + 5:
        raise InsufficientDataError(
            f"need n - d > p + q + 5 (n={n}, d={d}, p+q={p + q})"
        )
    z = np.diff(x, n=d) if d else x
    scale = float(np.std(z))
    if scale == 0.0 or not math.isfinite(scale):
        raise DegenerateInputError("series has zero variance after differencing")
    zn = z / scale
    n_used = zn.size
    with_mean = bool(order.include_constant)
    zbar = float(np.mean(zn)) if with_mean else 0.0

    def unpack(psi):
        phi, theta = _unconstrained_to_coeffs(psi, p, q)
        m = psi[p + q] if with_mean else 0.0
        return phi, theta, m

    def css_objective(psi):
        phi, theta, m = unpack(psi)
        w = lfilter(np.concatenate(([1.0], -phi)), np.concatenate(([1.0], theta)), zn - m)
        s = float(w @ w)
        return s if math.isfinite(s) else _PENALTY

    def negloglik(psi):
        phi, theta, m = unpack(psi)
        try:
            resid, fvar = filter_demeaned(zn - m, phi, theta, 1.0)
        except NumericalDegeneracyError:
            return _PENALTY
        s2 = float(np.mean(resid**2 / fvar))
        if not math.isfinite(s2) or s2 <= 0:
            return _PENALTY
        val = 0.5 * (n_used * (LOG_2PI + 1.0 + math.log(s2)) + float(np.sum(np.log(fvar))))
        return val if math.isfinite(val) else _PENALTY

    # CSS initializer, seeded by Hannan-Rissanen closed forms
    phi0, theta0 = _hannan_rissanen(zn - zbar, p, q)
    u0 = _coeffs_to_unconstrained(phi0, theta0)
    psi0 = np.concatenate((u0, [zbar])) if with_mean else u0
    total_evals = 0
    if psi0.size:
        psi_css, _, _, nev = _run_nelder_mead(css_objective, psi0)
        total_evals += nev
    else:  # no free parameters beyond sigma2: nothing to optimize
        psi_css = psi0

    # exact-likelihood restarts: CSS point plus a deterministic perturbation grid
    starts = [psi_css]
    if psi_css.size:
        starts += [psi_css + 0.25, psi_css - 0.25, np.zeros_like(psi_css)]
    runs = []
    for s0 in starts:
        if any(np.max(np.abs(s0 - prev)) < 1e-9 for prev, *_ in runs):
            continue
        if s0.size == 0:
            runs.append((s0, negloglik(s0), 0.0, 1))
            total_evals += 1
            continue
        xb, fb, diam, nev = _run_nelder_mead(negloglik, s0)
        runs.append((xb, fb, diam, nev))
        total_evals += nev
    best_psi, best_fun, best_diam, _ = min(runs, key=lambda r: r[1])
    converged = best_diam < _SIMPLEX_TOL

    def build_model(psi, diam, conv, start_ll, messages=()):
        phi, theta, m = unpack(psi)
        resid, fvar = filter_demeaned(zn - m, phi, theta, 1.0)
        s2_norm = float(np.mean(resid**2 / fvar))
        sigma2 = s2_norm * scale * scale
        mu = m * scale
        constant = mu * (1.0 - float(np.sum(phi))) if with_mean else 0.0
        params = ArmaParameters(tuple(phi), tuple(theta), constant, sigma2)
        ll = log_likelihood(params, order, series).loglik
        k = p + q + int(with_mean) + 1
        report = FitReport(
            n_restarts=len(runs),
            n_evaluations=total_evals,
            simplex_diameter=diam,
            start_loglik=start_ll,
            messages=tuple(messages),
        )
        return FittedModel(
            order=order,
            params=params,
            loglik=ll,
            aic=-2.0 * ll + 2.0 * k,
            bic=-2.0 * ll + k * math.log(n_used),
            n_used=n_used,
            converged=conv,
            fit_report=report,
        )

    start_ll = -float("inf")
    if psi_css.size or with_mean:
        try:
            start_ll = build_model(psi_css, float("nan"), False, float("nan")).loglik
        except (NumericalDegeneracyError, RangeError, AdmissibilityError):
            pass

    model = build_model(best_psi, best_diam, converged, start_ll)
    root_report = check_admissible(model.params)
    moduli = root_report.ar_root_moduli + root_report.ma_root_moduli
    if moduli and min(moduli) <= 1.0 + _BOUNDARY_MARGIN:
        msg = (
            f"optimum pinned at the admissibility boundary (root modulus "
            f"{min(moduli):.8g}); the unconstrained optimum diverges"
        )
        model = build_model(best_psi, best_diam, False, start_ll, messages=(msg,))
        raise NonConvergenceError(msg, best=model)
    if not any(r[2] < _SIMPLEX_TOL for r in runs):
        raise NonConvergenceError(
            f"no Nelder-Mead restart reached simplex diameter < {_SIMPLEX_TOL}", best=model
        )
    return model


# ---------------------------------------------------------------------------
# automatic order selection

@dataclass(frozen=True)
class CandidateFit:
    order: ModelOrder | None
    fitted: FittedModel | None
    criterion_value: float
    error: str | None = None


@dataclass(frozen=True)
class SelectionResult:
    best: FittedModel
    ranking: tuple[CandidateFit, ...]
    criterion: str
    chosen_d: int


def auto_select(
    series: TimeSeries,
    max_p: int,
    max_d: int,
    max_q: int,
    criterion: str = "aic",
    min_d: int | None = None,
) -> SelectionResult:
    """Exhaustive (p,d,q) grid search ranked by an information criterion.

    Information criteria are only comparable between fits sharing a
    differencing level, so candidates are ranked per d.  When the grid spans
    several d values, the working level d* is the smallest d whose
    d-differenced series rejects the ADF unit-root null at 5% (falling back
    to max_d), and the winner is the criterion-best fit at d*.  Ties break
    by smaller p+q, then smaller q.  Pass ``min_d=max_d`` to pin d.
    """
    criterion = criterion.lower()
    if criterion not in ("aic", "bic"):
        raise RangeError(f"criterion must be 'aic' or 'bic', got {criterion!r}")
    if max_p < 0 or max_d < 0 or max_q < 0:
        raise RangeError("grid bounds must be >= 0")
    lo_d = 0 if min_d is None else min_d
    if not 0 <= lo_d <= max_d:
        raise RangeError(f"need 0 <= min_d <= max_d, got min_d={lo_d}, max_d={max_d}")

    ds = list(range(lo_d, max_d + 1))
    if len(ds) == 1:
        chosen_d = ds[0]
    else:
        chosen_d = ds[-1]
        for d in ds:
            try:
                if adf_test(difference(series, d)).reject_unit_root:
                    chosen_d = d
                    break
            except (InsufficientDataError, DegenerateInputError):
                continue

    candidates: list[CandidateFit] = []
    for d, p_, q_ in itertools.product(ds, range(max_p + 1), range(max_q + 1)):
        try:
            order = ModelOrder(p_, d, q_)
        except RangeError as exc:  # e.g. (0,d,0) with no constant
            candidates.append(CandidateFit(None, None, math.inf, str(exc)))
            continue
        try:
            fitted = fit(series, order)
        except NonConvergenceError as exc:
            logger.warning("skipping non-convergent candidate %s: %s", order.label(), exc)
            candidates.append(CandidateFit(order, None, math.inf, str(exc)))
            continue
        except (DegenerateInputError, InsufficientDataError, NumericalDegeneracyError) as exc:
            logger.warning("skipping candidate %s: %s", order.label(), exc)
            candidates.append(CandidateFit(order, None, math.inf, str(exc)))
            continue
        value = fitted.aic if criterion == "aic" else fitted.bic
        candidates.append(CandidateFit(order, fitted, value))

    def sort_key(c: CandidateFit):
        if c.order is None or c.fitted is None:
            return (2, 0, math.inf, 0, 0)
        od = c.order
        return (0 if od.d == chosen_d else 1, od.d, c.criterion_value, od.p + od.q, od.q)

    ranking = tuple(sorted(candidates, key=sort_key))
    winners = [c for c in ranking if c.fitted is not None and c.order.d == chosen_d]
    if not winners:
        winners = [c for c in ranking if c.fitted is not None]
    if not winners:
        raise NonConvergenceError("every candidate in the grid failed to fit")
    return SelectionResult(winners[0].fitted, ranking, criterion, chosen_d)
