"""ARMA/ARIMA model representation, admissibility, simulation, exact likelihood.

The model convention is

    x_t = c + phi_1 x_{t-1} + ... + phi_p x_{t-p}
            + w_t + theta_1 w_{t-1} + ... + theta_q w_{t-q},
    w_t ~ N(0, sigma2),

i.e. the MA polynomial is theta(z) = 1 + theta_1 z + ... + theta_q z^q
(additive sign convention) and ``constant`` is the recursion intercept, so
the process mean is c / (1 - sum(phi)).  ARIMA(p,d,q) applies this model to
the d-th difference of the data; the first d observations are dropped from
the likelihood.

The exact Gaussian log-likelihood uses the Harvey state-space form with the
filter initialized at the stationary distribution (direct discrete-Lyapunov
solve; the state dimension max(p, q+1) is tiny).  The per-step filtering
recursion is JIT-compiled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.signal import lfilter

from .exceptions import (
    AdmissibilityError,
    InsufficientDataError,
    NumericalDegeneracyError,
    RangeError,
)
from .series import TimeSeries

__all__ = [
    "ModelOrder",
    "ArmaParameters",
    "AdmissibilityReport",
    "LikelihoodResult",
    "check_admissible",
    "simulate",
    "log_likelihood",
]

ROOT_TOLERANCE = 1e-8
LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class ModelOrder:
    """ARIMA order (p, d, q) plus the constant/intercept flag.

    ``include_constant=None`` resolves to the usual convention: a constant
    for d = 0, none for d >= 1.
    """

    p: int
    d: int
    q: int
    include_constant: bool | None = None

    def __post_init__(self):
        if self.p < 0 or self.d < 0 or self.q < 0:
            raise RangeError(f"orders must be >= 0, got ({self.p},{self.d},{self.q})")
        if self.d > 2:
            raise RangeError(f"differencing order d <= 2 supported, got {self.d}")
        if self.include_constant is None:
            object.__setattr__(self, "include_constant", self.d == 0)
        if self.p + self.q == 0 and not self.include_constant:
            raise RangeError("degenerate model: p + q = 0 with no constant")

    def label(self) -> str:
        return f"ARIMA({self.p},{self.d},{self.q})" if self.d else (
            f"ARMA({self.p},{self.q})" if self.q else f"AR({self.p})"
        )


@dataclass(frozen=True)
class ArmaParameters:
    """Coefficients of the recursion above.

    Construction validates shapes and sigma2 > 0 only; the stationarity /
    invertibility root conditions are checked by :func:`check_admissible`
    (and enforced by the operations that require them), so inadmissible
    candidates can still be represented and diagnosed.
    """

    ar: tuple[float, ...]
    ma: tuple[float, ...]
    constant: float = 0.0
    sigma2: float = 1.0

    def __post_init__(self):
        ar = tuple(float(v) for v in self.ar)
        ma = tuple(float(v) for v in self.ma)
        if not all(math.isfinite(v) for v in ar + ma + (self.constant, self.sigma2)):
            raise RangeError("parameters must be finite")
        if self.sigma2 <= 0:
            raise RangeError(f"innovation variance must be > 0, got {self.sigma2}")
        object.__setattr__(self, "ar", ar)
        object.__setattr__(self, "ma", ma)
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "sigma2", float(self.sigma2))

    @property
    def p(self) -> int:
        return len(self.ar)

    @property
    def q(self) -> int:
        return len(self.ma)

    def mean(self) -> float:
        """Process mean c / (1 - sum(phi)); requires a stationary AR part."""
        denom = 1.0 - sum(self.ar)
        if denom == 0.0:
            raise AdmissibilityError("AR polynomial has a unit root; mean undefined")
        return self.constant / denom


@dataclass(frozen=True)
class AdmissibilityReport:
    ok: bool
    violations: tuple[str, ...]
    ar_root_moduli: tuple[float, ...]
    ma_root_moduli: tuple[float, ...]


def _poly_root_moduli(coeffs: tuple[float, ...], sign: float) -> tuple[float, ...]:
    """Moduli of the roots of 1 + sign*c_1 z + ... + sign*c_k z^k."""
    c = np.asarray(coeffs, dtype=float) * sign
    # trim trailing near-zero coefficients: their roots sit out near infinity
    # (way outside the unit circle) and a subnormal leading coefficient would
    # overflow the companion-matrix balancing inside np.roots
    tiny = 1e-12 * max(1.0, float(np.max(np.abs(c))) if c.size else 1.0)
    nz = np.nonzero(np.abs(c) > tiny)[0]
    if nz.size == 0:
        return ()
    c = c[: nz[-1] + 1]
    poly = np.concatenate(([1.0], c))[::-1]  # highest degree first for np.roots
    return tuple(float(m) for m in np.abs(np.roots(poly)))


def check_admissible(params: ArmaParameters) -> AdmissibilityReport:
    """Stationarity/invertibility diagnosis via polynomial root moduli.

    The AR polynomial 1 - phi_1 z - ... - phi_p z^p and MA polynomial
    1 + theta_1 z + ... + theta_q z^q must both have all roots with modulus
    > 1 + 1e-8.
    """
    ar_moduli = _poly_root_moduli(params.ar, -1.0)
    ma_moduli = _poly_root_moduli(params.ma, +1.0)
    violations = []
    if any(m <= 1.0 + ROOT_TOLERANCE for m in ar_moduli):
        worst = min(ar_moduli)
        violations.append(f"stationarity: AR root modulus {worst:.8g} <= 1")
    if any(m <= 1.0 + ROOT_TOLERANCE for m in ma_moduli):
        worst = min(ma_moduli)
        violations.append(f"invertibility: MA root modulus {worst:.8g} <= 1")
    return AdmissibilityReport(not violations, tuple(violations), ar_moduli, ma_moduli)


def require_admissible(params: ArmaParameters) -> None:
    report = check_admissible(params)
    if not report.ok:
        raise AdmissibilityError("; ".join(report.violations))


def simulate(params: ArmaParameters, order: ModelOrder, n: int, seed: int) -> TimeSeries:
    """Seeded ARMA/ARIMA path of length n.

    Gaussian innovations come from ``numpy.random.default_rng(seed)``; the
    stationary recursion discards a burn-in of max(500, 10*(p+q)) samples
    before d-fold integration.  Identical seed implies identical output.
    """
    if n < 1:
        raise RangeError(f"n must be >= 1, got {n}")
    if len(params.ar) != order.p or len(params.ma) != order.q:
        raise RangeError("parameter lengths do not match the model order")
    require_admissible(params)
    burn = max(500, 10 * (order.p + order.q))
    rng = np.random.default_rng(seed)
    w = rng.normal(0.0, math.sqrt(params.sigma2), size=burn + n)
    ma_poly = np.concatenate(([1.0], params.ma))
    ar_poly = np.concatenate(([1.0], -np.asarray(params.ar)))
    z = lfilter(ma_poly, ar_poly, w)[burn:]
    x = z + params.mean()
    for _ in range(order.d):
        x = np.cumsum(x)
    return TimeSeries.from_values(x)


@dataclass(frozen=True)
class LikelihoodResult:
    loglik: float
    residuals: tuple[float, ...]
    residual_variances: tuple[float, ...]


def harvey_system(ar, ma, sigma2: float):
    """Transition matrix T, shock loading R and stationary covariance P0.

    P0 solves the discrete Lyapunov equation P = T P T' + sigma2 R R'
    directly via the Kronecker-vectorized linear system; the state dimension
    max(p, q+1) is tiny, so the dense solve is exact and cheap.
    """
    p, q = len(ar), len(ma)
    r = max(p, q + 1)
    T = np.zeros((r, r))
    T[:p, 0] = ar
    for i in range(r - 1):
        T[i, i + 1] = 1.0
    R = np.zeros(r)
    R[0] = 1.0
    R[1 : q + 1] = ma
    RRt = sigma2 * np.outer(R, R)
    vec = np.linalg.solve(np.eye(r * r) - np.kron(T, T), RRt.reshape(-1))
    P0 = vec.reshape(r, r)
    return T, RRt, 0.5 * (P0 + P0.T)


@njit(cache=True)
def _filter_pass(x, T, RRt, P0):  # pragma: no cover - exercised via wrapper
    # hand-rolled small-matrix arithmetic: the state dimension is <= max(p,q+1),
    # so BLAS dispatch per step would dominate the runtime
    n = x.shape[0]
    r = T.shape[0]
    a = np.zeros(r)
    P = P0.copy()
    K = np.empty(r)
    Ta = np.empty(r)
    TP = np.empty((r, r))
    resid = np.empty(n)
    fvar = np.empty(n)
    for t in range(n):
        F = P[0, 0]
        if not np.isfinite(F) or F <= 0.0:
            return False, resid, fvar
        v = x[t] - a[0]
        resid[t] = v
        fvar[t] = F
        for i in range(r):
            s = 0.0
            for j in range(r):
                s += T[i, j] * P[j, 0]
            K[i] = s / F
        for i in range(r):
            s = 0.0
            for j in range(r):
                s += T[i, j] * a[j]
            Ta[i] = s + K[i] * v
        for i in range(r):
            a[i] = Ta[i]
        for i in range(r):
            for j in range(r):
                s = 0.0
                for k in range(r):
                    s += T[i, k] * P[k, j]
                TP[i, j] = s
        for i in range(r):
            for j in range(r):
                s = 0.0
                for k in range(r):
                    s += TP[i, k] * T[j, k]
                P[i, j] = s - F * K[i] * K[j] + RRt[i, j]
        for i in range(r):
            for j in range(i + 1, r):
                m = 0.5 * (P[i, j] + P[j, i])
                P[i, j] = m
                P[j, i] = m
    return True, resid, fvar


def filter_demeaned(x: np.ndarray, ar, ma, sigma2: float):
    """Innovations v_t and their variances F_t for a zero-mean ARMA model.

    Raises on loss of positive-definiteness in the filter covariance.
    """
    T, RRt, P0 = harvey_system(np.asarray(ar, float), np.asarray(ma, float), sigma2)
    ok, resid, fvar = _filter_pass(np.ascontiguousarray(x, dtype=float), T, RRt, P0)
    if not ok:
        raise NumericalDegeneracyError("filter covariance lost positive-definiteness")
    return resid, fvar


def log_likelihood(params: ArmaParameters, order: ModelOrder, series: TimeSeries) -> LikelihoodResult:
    """Exact Gaussian log-likelihood of the d-differenced series.

    Returns the one-step-ahead prediction errors (innovations) and their
    variances as by-products; both have length n - d.
    """
    require_admissible(params)
    if len(params.ar) != order.p or len(params.ma) != order.q:
        raise RangeError("parameter lengths do not match the model order")
    x = series.to_array()
    if order.d:
        if len(x) <= order.d:
            raise InsufficientDataError(
                f"need more than d={order.d} observations, have {len(x)}"
            )
        x = np.diff(x, n=order.d)
    if x.size <= order.p + order.q:
        raise InsufficientDataError(
            f"need n - d > p + q observations (n-d={x.size}, p+q={order.p + order.q})"
        )
    resid, fvar = filter_demeaned(x - params.mean(), params.ar, params.ma, params.sigma2)
    ll = -0.5 * (x.size * LOG_2PI + np.sum(np.log(fvar)) + np.sum(resid**2 / fvar))
    return LikelihoodResult(float(ll), tuple(resid), tuple(fvar))
