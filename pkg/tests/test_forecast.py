import numpy as np
import pytest
from scipy.signal import lfilter

from climarma import (
    ArmaParameters,
    ModelOrder,
    TimeSeries,
    fit,
    forecast,
    log_likelihood,
    simulate,
)
from climarma.exceptions import RangeError
from climarma.forecasting import psi_weights


def fitted_arma11(n=400, phi=0.5, theta=0.5, seed=14):
    order = ModelOrder(1, 0, 1, include_constant=False)
    s = simulate(ArmaParameters((phi,), (theta,), 0.0, 1.0), order, n, seed=seed)
    return fit(s, order), s


class TestPsiWeights:
    def test_arma11_closed_form(self):
        phi, theta = 0.5, 0.5
        psi = psi_weights([phi], [theta], 6)
        assert psi[0] == 1.0
        for j in range(1, 6):
            assert psi[j] == pytest.approx((phi + theta) * phi ** (j - 1), rel=1e-12)

    def test_pure_ma(self):
        psi = psi_weights([], [0.4, -0.1], 5)
        assert list(psi) == pytest.approx([1.0, 0.4, -0.1, 0.0, 0.0])

    def test_integration_cumsums(self):
        psi0 = psi_weights([0.5], [], 5, d=0)
        psi1 = psi_weights([0.5], [], 5, d=1)
        assert np.allclose(psi1, np.cumsum(psi0))


class TestForecastVariance:
    def test_one_step_is_sigma2(self):
        m, s = fitted_arma11()
        f = forecast(m, s, 1)
        assert f.variance[0] == pytest.approx(m.params.sigma2, rel=1e-12)

    def test_arma11_two_step_exact(self):
        # with sigma2=1, phi=theta=0.5: var_2 = 1 + (phi+theta)^2 = 2
        m, s = fitted_arma11()
        params = ArmaParameters((0.5,), (0.5,), 0.0, 1.0)
        forced = type(m)(
            order=m.order, params=params, loglik=m.loglik, aic=m.aic, bic=m.bic,
            n_used=m.n_used, converged=True, fit_report=m.fit_report,
        )
        f = forecast(forced, s, 2)
        assert f.variance[1] == pytest.approx(2.0, rel=1e-12)

    def test_two_step_variance_monte_carlo(self):
        params = ArmaParameters((0.5,), (0.5,), 0.0, 1.0)
        order = ModelOrder(1, 0, 1, include_constant=False)
        # 2-step forecast error variance over simulated continuations:
        # x_{n+2} - xhat = w_{n+2} + (phi+theta) w_{n+1}
        rng = np.random.default_rng(99)
        errs = rng.normal(size=(100_000, 2))
        fe = errs[:, 1] + (0.5 + 0.5) * errs[:, 0]
        assert np.var(fe) == pytest.approx(2.0, rel=0.02)

    def test_ar1_limit_is_stationary_variance(self):
        phi = 0.8
        order = ModelOrder(1, 0, 0, include_constant=False)
        s = simulate(ArmaParameters((phi,), (), 0.0, 1.0), order, 300, seed=3)
        m = fit(s, order)
        f = forecast(m, s, 400)
        limit = m.params.sigma2 / (1 - m.params.ar[0] ** 2)
        assert f.variance[-1] == pytest.approx(limit, rel=1e-3)

    def test_monotone_nondecreasing_100_random_draws(self):
        rng = np.random.default_rng(7)
        m, s = fitted_arma11()
        for _ in range(100):
            phi = float(rng.uniform(-0.95, 0.95))
            theta = float(rng.uniform(-0.95, 0.95))
            s2 = float(rng.uniform(0.1, 4.0))
            psi = psi_weights([phi], [theta], 30)
            var = s2 * np.cumsum(psi**2)
            assert np.all(np.diff(var) >= -1e-15)
            assert np.all(var > 0)

    def test_integrated_variance_grows_without_bound(self, gistemp):
        m = fit(gistemp, ModelOrder(1, 1, 1))
        f1 = forecast(m, gistemp, 50)
        v = np.asarray(f1.variance)
        assert np.all(np.diff(v) > 0)
        assert v[-1] > 10 * v[0]


class TestForecastPoints:
    def test_truncated_matches_filter_one_step(self):
        m, s = fitted_arma11(n=400)
        f = forecast(m, s, 1)
        lik = log_likelihood(m.params, m.order, s)
        # filter's one-step prediction of x_{n+1} comes from extending the series
        # by the prediction itself: compare against the truncated recursion
        phi, theta = m.params.ar[0], m.params.ma[0]
        x = np.asarray(s.values)
        w = lfilter([1.0, -phi], [1.0, theta], x)
        pred = phi * x[-1] + theta * w[-1]
        assert f.point[0] == pytest.approx(pred, abs=1e-6)

    def test_ar1_points_follow_geometric_decay(self):
        order = ModelOrder(1, 0, 0, include_constant=False)
        s = simulate(ArmaParameters((0.6,), (), 0.0, 1.0), order, 500, seed=4)
        m = fit(s, order)
        f = forecast(m, s, 5)
        phi = m.params.ar[0]
        x_n = s.values[-1]
        for j in range(5):
            assert f.point[j] == pytest.approx(phi ** (j + 1) * x_n, rel=1e-9)

    def test_d1_integration_anchors_at_last_level(self, gistemp):
        m = fit(gistemp, ModelOrder(1, 1, 0))
        f = forecast(m, gistemp, 3)
        z = np.diff(np.asarray(gistemp.values))
        phi = m.params.ar[0]
        d1 = phi * z[-1]
        d2 = phi * d1
        d3 = phi * d2
        expected = np.cumsum([d1, d2, d3]) + gistemp.values[-1]
        assert np.allclose(f.point, expected, atol=1e-9)

    def test_times_extend_series(self, gistemp):
        m = fit(gistemp, ModelOrder(1, 0, 0, include_constant=False))
        f = forecast(m, gistemp, 4)
        assert f.times == (2023, 2024, 2025, 2026)


class TestIntervals:
    def test_symmetric_about_point(self):
        m, s = fitted_arma11()
        f = forecast(m, s, 10, alpha=0.1)
        lo = np.asarray(f.lower)
        hi = np.asarray(f.upper)
        pt = np.asarray(f.point)
        assert np.allclose(hi - pt, pt - lo, atol=1e-12)
        assert np.all(lo < pt) and np.all(pt < hi)

    def test_half_width_formula(self):
        from scipy.stats import norm

        m, s = fitted_arma11()
        f = forecast(m, s, 5, alpha=0.05)
        half = norm.ppf(0.975) * np.sqrt(np.asarray(f.variance))
        assert np.allclose(np.asarray(f.upper) - np.asarray(f.point), half, rtol=1e-12)

    def test_narrower_at_higher_alpha(self):
        m, s = fitted_arma11()
        wide = forecast(m, s, 3, alpha=0.05)
        narrow = forecast(m, s, 3, alpha=0.32)
        assert narrow.upper[0] - narrow.lower[0] < wide.upper[0] - wide.lower[0]


class TestGuards:
    def test_horizon_bounds(self):
        m, s = fitted_arma11()
        with pytest.raises(RangeError):
            forecast(m, s, 0)
        with pytest.raises(RangeError):
            forecast(m, s, 1001)

    def test_alpha_range(self):
        m, s = fitted_arma11()
        with pytest.raises(RangeError):
            forecast(m, s, 5, alpha=1.5)

    def test_series_mismatch_detected(self):
        m, s = fitted_arma11()
        shorter = TimeSeries(s.times[:-10], s.values[:-10])
        with pytest.raises(RangeError):
            forecast(m, shorter, 3)
