"""Land/sea temperature-uncertainty decomposition and its generative model.

The observed anomaly is modeled as a latent truth plus Gaussian measurement
noise whose variance splits additively into land and sea components.  With
systematic additive bias alpha and multiplicative bias beta the reduced
anomaly follows the recursion

    x(t) = alpha + beta * x(t-1) + w_land(t) + w_sea(t-1)

whose composite noise u(t) = w_land(t) + w_sea(t-1) is, in the general
correlated-noise case, an MA(1); matching autocovariances therefore reduces
the recursion to an exact ARMA(1,1) parameterization (AR coefficient beta).
With independent noise streams the lag-1 autocovariance of u vanishes and
the reduction degenerates to AR(1) with innovation variance
sigma2_land + sigma2_sea.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .arma import ArmaParameters, ModelOrder
from .exceptions import AdmissibilityError, AlignmentError, DegenerateInputError, RangeError
from .series import TimeSeries

__all__ = [
    "UncertaintyDecomposition",
    "BiasedAnomalyConfig",
    "decompose",
    "simulate_biased_anomaly",
    "difference_series",
    "reduce_to_arma",
]

BURN_IN = 500


@dataclass(frozen=True)
class UncertaintyDecomposition:
    sigma2_total: float
    sigma2_land: float
    sigma2_sea: float


@dataclass(frozen=True)
class BiasedAnomalyConfig:
    """Configuration of the biased-anomaly recursion.

    ``label`` is an opaque tag (e.g. a decade identifier) carried through
    unchanged.  Both noise variances may be zero, in which case simulation
    degenerates to the deterministic fixed point alpha / (1 - beta);
    :func:`reduce_to_arma` requires positive total variance.
    """

    alpha: float
    beta: float
    sigma2_land: float
    sigma2_sea: float
    n: int
    seed: int
    cross_covariance: float = 0.0
    label: str = ""

    def __post_init__(self):
        if abs(self.beta) >= 1.0:
            raise AdmissibilityError(f"requires |beta| < 1, got {self.beta}")
        if self.sigma2_land < 0 or self.sigma2_sea < 0:
            raise RangeError("noise variances must be >= 0")
        if self.n < 1:
            raise RangeError(f"n must be >= 1, got {self.n}")
        limit = math.sqrt(self.sigma2_land * self.sigma2_sea)
        if abs(self.cross_covariance) > limit + 1e-15:
            raise RangeError(
                f"|cross_covariance| must be <= sqrt(sigma2_land*sigma2_sea)={limit:.6g}"
            )


def decompose(sigma2_land: float, sigma2_sea: float) -> UncertaintyDecomposition:
    """Total uncertainty as the exact sum of the land and sea variances."""
    if sigma2_land < 0 or sigma2_sea < 0:
        raise RangeError("variance components must be >= 0")
    return UncertaintyDecomposition(sigma2_land + sigma2_sea, sigma2_land, sigma2_sea)


def _noise_streams(config: BiasedAnomalyConfig, total: int):
    """Correlated (w_land(t), w_sea(t-1)) samples of length ``total``."""
    rng = np.random.default_rng(config.seed)
    # one leading sea sample supplies the t-1 term at the first step
    g = rng.standard_normal((2, total + 1))
    s_l = math.sqrt(config.sigma2_land)
    s_s = math.sqrt(config.sigma2_sea)
    w_land = s_l * g[0, 1:]
    if config.cross_covariance and s_l > 0 and s_s > 0:
        rho = config.cross_covariance / (s_l * s_s)
        rho = max(-1.0, min(1.0, rho))
        sea_core = rho * g[0] + math.sqrt(1.0 - rho * rho) * g[1]
    else:
        sea_core = g[1]
    w_sea = s_s * sea_core
    return w_land, w_sea[:-1]


def simulate_biased_anomaly(config: BiasedAnomalyConfig) -> TimeSeries:
    """Seeded path of the biased-anomaly recursion (burn-in discarded)."""
    total = BURN_IN + config.n
    w_land, w_sea_lag = _noise_streams(config, total)
    u = w_land + w_sea_lag
    z = lfilter([1.0], [1.0, -config.beta], u)
    x = z + config.alpha / (1.0 - config.beta)
    return TimeSeries.from_values(x[BURN_IN:])


def difference_series(truth: TimeSeries, reduced: TimeSeries) -> TimeSeries:
    """Elementwise difference truth - reduced on an identical time index."""
    if truth.times != reduced.times:
        raise AlignmentError("series are not aligned on the same time index")
    vals = truth.to_array() - reduced.to_array()
    return TimeSeries(truth.times, tuple(vals))


def reduce_to_arma(config: BiasedAnomalyConfig) -> tuple[ArmaParameters, ModelOrder]:
    """Exact ARMA parameterization equivalent to the biased-anomaly recursion.

    The composite noise has gamma_u(0) = sigma2_land + sigma2_sea and
    gamma_u(1) = cross_covariance; matching an MA(1) gives the invertible
    theta and innovation variance.  Independent noises give theta = 0 (pure
    AR(1)), so the returned order is (1,0,0) then and (1,0,1) otherwise.
    """
    g0 = config.sigma2_land + config.sigma2_sea
    if g0 <= 0:
        raise DegenerateInputError("total noise variance must be > 0 to reduce")
    g1 = config.cross_covariance
    r = g1 / g0
    if abs(r) >= 0.5:
        raise RangeError(
            f"|gamma_1/gamma_0| = {abs(r):.6g} >= 1/2: no invertible MA(1) matches"
        )
    if r == 0.0:
        theta, sigma2 = 0.0, g0
    else:
        theta = (1.0 - math.sqrt(1.0 - 4.0 * r * r)) / (2.0 * r)
        sigma2 = g0 / (1.0 + theta * theta)
    params = ArmaParameters(
        ar=(config.beta,),
        ma=(theta,) if theta != 0.0 else (),
        constant=config.alpha,
        sigma2=sigma2,
    )
    order = ModelOrder(1, 0, 1 if theta != 0.0 else 0, include_constant=config.alpha != 0.0)
    return params, order
