"""Independent oracles shared by the test modules.

Each oracle deliberately takes a different computational route than the
production code it checks (full covariance solves, psi-weight sums, direct
density evaluation), so agreement is evidence rather than tautology.
"""

import numpy as np
from scipy.linalg import toeplitz
from scipy.stats import multivariate_normal


def arma11_autocov(phi: float, theta: float, sigma2: float, nlags: int) -> np.ndarray:
    """Closed-form ARMA(1,1) autocovariances gamma(0..nlags-1)."""
    g = np.empty(nlags)
    g[0] = sigma2 * (1.0 + 2.0 * phi * theta + theta**2) / (1.0 - phi**2)
    if nlags > 1:
        g[1] = sigma2 * (1.0 + phi * theta) * (phi + theta) / (1.0 - phi**2)
    for h in range(2, nlags):
        g[h] = phi * g[h - 1]
    return g


def arma_autocov_psi(ar, ma, sigma2: float, nlags: int, nterms: int = 5000) -> np.ndarray:
    """Brute-force ARMA autocovariances from a long psi-weight expansion."""
    ar = np.asarray(ar, dtype=float)
    ma = np.asarray(ma, dtype=float)
    psi = np.zeros(nterms + nlags)
    psi[0] = 1.0
    for j in range(1, psi.size):
        acc = ma[j - 1] if j - 1 < ma.size else 0.0
        for i in range(1, min(j, ar.size) + 1):
            acc += ar[i - 1] * psi[j - i]
        psi[j] = acc
    return np.array(
        [sigma2 * float(psi[: nterms] @ psi[h : nterms + h]) for h in range(nlags)]
    )


def mvn_loglik(x: np.ndarray, autocov: np.ndarray) -> float:
    """Gaussian log-density of x under a Toeplitz covariance."""
    cov = toeplitz(autocov[: x.size])
    return float(multivariate_normal(mean=np.zeros(x.size), cov=cov).logpdf(x))


def pacf_normal_equations(x: np.ndarray, max_lag: int) -> np.ndarray:
    """PACF via direct Toeplitz solves of the Yule-Walker normal equations.

    Uses the same biased autocovariance estimator as production but a full
    linear solve per lag instead of the Durbin-Levinson recursion.
    """
    n = x.size
    c = x - x.mean()
    gamma = np.array([c[: n - h] @ c[h:] / n for h in range(max_lag + 1)])
    out = np.empty(max_lag)
    for h in range(1, max_lag + 1):
        G = toeplitz(gamma[:h])
        coef = np.linalg.solve(G, gamma[1 : h + 1])
        out[h - 1] = coef[-1]
    return out
