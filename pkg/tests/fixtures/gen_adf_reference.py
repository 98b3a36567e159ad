"""Generate frozen ADF reference statistics for the oracle fixture.

This is an INDEPENDENT implementation of the ADF regression, kept separate
from the production code on purpose: it builds the design matrix in its own
way and solves the normal equations through a pseudo-inverse instead of QR.
The three canned series are fully deterministic (fixed seeds / closed
forms).  Run from the repository root:

    python3 tests/fixtures/gen_adf_reference.py

and commit the refreshed adf_reference.json.
"""

import json
from pathlib import Path

import numpy as np


def canned_series() -> dict[str, np.ndarray]:
    rng = np.random.default_rng(20230401)
    white = rng.normal(0.0, 1.0, 400)
    walk = np.cumsum(np.random.default_rng(20230402).normal(0.0, 1.0, 400))
    t = np.arange(300)
    ar1 = np.empty(300)
    shocks = np.random.default_rng(20230403).normal(0.0, 1.0, 300)
    ar1[0] = shocks[0]
    for i in range(1, 300):
        ar1[i] = 0.6 * ar1[i - 1] + shocks[i]
    trending = 0.01 * t + ar1
    return {"white_noise": white, "random_walk": walk, "trend_plus_ar1": trending}


def adf_stat_pinv(x: np.ndarray, lags: int, regression: str) -> float:
    """tau statistic for a FIXED lag count via pinv-based OLS."""
    dx = np.diff(x)
    n = dx.size - lags
    y = dx[lags:]
    cols = [x[lags:-1]]
    for i in range(1, lags + 1):
        cols.append(dx[lags - i : lags - i + n])
    if regression in ("c", "ct"):
        cols.append(np.ones(n))
    if regression == "ct":
        cols.append(np.arange(1.0, n + 1.0))
    X = np.column_stack(cols)
    xtx_inv = np.linalg.pinv(X.T @ X)
    beta = xtx_inv @ X.T @ y
    resid = y - X @ beta
    sigma2 = (resid @ resid) / (n - X.shape[1])
    se = np.sqrt(sigma2 * np.diag(xtx_inv))
    return float(beta[0] / se[0])


def main() -> None:
    cases = []
    for name, x in canned_series().items():
        for lags in (0, 2):
            for regression in ("c", "ct", "n"):
                cases.append(
                    {
                        "series": name,
                        "lags": lags,
                        "regression": regression,
                        "statistic": adf_stat_pinv(x, lags, regression),
                    }
                )
    out = Path(__file__).with_name("adf_reference.json")
    out.write_text(json.dumps({"cases": cases}, indent=2) + "\n")
    print(f"wrote {len(cases)} reference statistics to {out}")


if __name__ == "__main__":
    main()
