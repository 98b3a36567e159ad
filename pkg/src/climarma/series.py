"""Core time-series container, differencing/integration, and moment statistics.

The :class:`TimeSeries` type carries annually indexed anomaly observations and
is consumed by every other module.  All operations here are pure functions
over immutable inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError, InsufficientDataError, RangeError

__all__ = ["TimeSeries", "MomentSummary", "difference", "integrate", "moments"]


@dataclass(frozen=True)
class TimeSeries:
    """Annually indexed series of real observations.

    Invariants enforced at construction: equal lengths, strictly increasing
    integer times with uniform step 1, all values finite.
    """

    times: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        times = tuple(int(t) for t in self.times)
        values = tuple(float(v) for v in self.values)
        if len(times) != len(values):
            raise DimensionError(
                f"times ({len(times)}) and values ({len(values)}) differ in length"
            )
        if len(times) == 0:
            raise InsufficientDataError("series must contain at least one observation")
        steps = np.diff(times)
        if steps.size and not np.all(steps == 1):
            bad = int(np.flatnonzero(steps != 1)[0])
            raise RangeError(
                f"times must increase with uniform step 1; offending step at "
                f"index {bad} ({times[bad]} -> {times[bad + 1]})"
            )
        if not all(math.isfinite(v) for v in values):
            bad = next(i for i, v in enumerate(values) if not math.isfinite(v))
            raise RangeError(f"non-finite value at index {bad} (time {times[bad]})")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values, start_time: int = 0) -> "TimeSeries":
        """Build a series from bare values with times start_time, start_time+1, ..."""
        values = tuple(float(v) for v in values)
        return cls(tuple(range(start_time, start_time + len(values))), values)

    def __len__(self) -> int:
        return len(self.values)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class MomentSummary:
    """First four moment statistics of a series.

    Central moments use denominator n (population convention); kurtosis is
    Pearson (normal = 3), not excess.  For a constant series the variance is
    exactly 0 and skewness/kurtosis are undefined (``defined`` is False and
    both are NaN).
    """

    mean: float
    variance: float
    skewness: float
    kurtosis: float
    defined: bool = field(default=True)


def difference(series: TimeSeries, d: int) -> TimeSeries:
    """Apply the d-th order finite difference.

    Returns a series of length n - d whose time index starts at times[d];
    d = 0 returns the input unchanged.
    """
    if d < 0:
        raise RangeError(f"differencing order must be >= 0, got {d}")
    if d == 0:
        return series
    if len(series) <= d:
        raise InsufficientDataError(
            f"need more than {d} observations to difference {d} times, have {len(series)}"
        )
    vals = np.diff(series.to_array(), n=d)
    return TimeSeries(series.times[d:], tuple(vals))


def integrate(diffed: TimeSeries | None, initial_values, start_time: int | None = None) -> TimeSeries:
    """Invert :func:`difference`.

    ``initial_values`` are the first d values of the original series (oldest
    first).  ``integrate(difference(s, d), s.values[:d])`` reproduces ``s``
    up to floating round-off.  An original of length exactly d differences
    to nothing; pass ``diffed=None`` (with ``start_time`` to anchor the time
    index) for that degenerate case.
    """
    init = [float(v) for v in initial_values]
    d = len(init)
    if d < 1:
        raise DimensionError("initial_values must contain at least one value")
    if diffed is None:
        vals = np.empty(0)
        start = 0 if start_time is None else start_time
    else:
        vals = diffed.to_array()
        start = diffed.times[0] - d
    out = integrate_values(vals, init)
    return TimeSeries(tuple(range(start, start + len(out))), tuple(out))


def integrate_values(diffed_values, initial_values) -> np.ndarray:
    """Array-level inverse differencing used by integrate() and the forecaster.

    Rebuilds the level series from the innermost difference outwards: one
    cumulative-sum pass per differencing order, each anchored at the first
    value of the corresponding partially differenced series (derivable from
    ``initial_values`` alone).
    """
    init = np.asarray([float(v) for v in initial_values])
    d = init.size
    if d < 1:
        raise DimensionError("initial_values must contain at least one value")
    out = np.asarray(diffed_values, dtype=float)
    for k in range(d - 1, -1, -1):
        head = np.diff(init, n=k)[0] if k else init[0]
        if out.size:
            out = np.concatenate(([head], head + np.cumsum(out)))
        else:
            out = np.asarray([head])
    return out


def moments(series: TimeSeries) -> MomentSummary:
    """Mean, variance, skewness and Pearson kurtosis with denominator n.

    Requires n >= 2 for variance, n >= 3 for skewness, n >= 4 for kurtosis.
    A zero-variance series yields variance 0 with skewness/kurtosis flagged
    undefined.
    """
    x = series.to_array()
    n = x.size
    if n < 4:
        raise InsufficientDataError(
            f"need at least 4 observations for a full moment summary, have {n}"
        )
    mean = float(np.mean(x))
    c = x - mean
    m2 = float(np.mean(c**2))
    if m2 == 0.0:
        return MomentSummary(mean, 0.0, float("nan"), float("nan"), defined=False)
    m3 = float(np.mean(c**3))
    m4 = float(np.mean(c**4))
    return MomentSummary(mean, m2, m3 / m2**1.5, m4 / m2**2)
