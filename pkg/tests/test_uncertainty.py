import numpy as np
import pytest

from climarma import (
    BiasedAnomalyConfig,
    ModelOrder,
    TimeSeries,
    decompose,
    difference_series,
    fit,
    reduce_to_arma,
    sample_acf,
    simulate_biased_anomaly,
    theoretical_acf_ar1,
    theoretical_acf_arma11,
)
from climarma.exceptions import (
    AdmissibilityError,
    AlignmentError,
    DegenerateInputError,
    RangeError,
)
from helpers import arma_autocov_psi


class TestDecompose:
    def test_zero_case(self):
        assert decompose(0.0, 0.0).sigma2_total == 0.0

    def test_additivity(self):
        d = decompose(0.004, 0.007)
        assert d.sigma2_total == pytest.approx(0.011, abs=1e-15)

    def test_symmetry(self):
        assert decompose(0.3, 0.8).sigma2_total == decompose(0.8, 0.3).sigma2_total

    def test_associativity_under_splitting(self):
        a, b, c = 0.2, 0.5, 0.3
        assert decompose(a, b + c).sigma2_total == pytest.approx(
            decompose(a + b, c).sigma2_total, rel=1e-15
        )

    def test_negative_rejected(self):
        with pytest.raises(RangeError):
            decompose(-0.1, 0.2)


class TestSimulateBiasedAnomaly:
    def test_noiseless_fixed_point(self):
        cfg = BiasedAnomalyConfig(alpha=1.0, beta=0.5, sigma2_land=0.0, sigma2_sea=0.0,
                                  n=40, seed=0)
        s = simulate_biased_anomaly(cfg)
        assert np.allclose(s.values, 1.0 / (1.0 - 0.5), atol=1e-12)

    def test_seed_determinism(self):
        cfg = BiasedAnomalyConfig(alpha=0.0, beta=0.7, sigma2_land=0.4, sigma2_sea=0.6,
                                  n=100, seed=42)
        assert simulate_biased_anomaly(cfg).values == simulate_biased_anomaly(cfg).values

    def test_zero_mean_within_standard_errors(self):
        beta, n = 0.9, 100_000
        cfg = BiasedAnomalyConfig(alpha=0.0, beta=beta, sigma2_land=0.5, sigma2_sea=0.5,
                                  n=n, seed=7)
        x = np.asarray(simulate_biased_anomaly(cfg).values)
        se = np.sqrt(1.0 / (1.0 - beta) ** 2 / n)  # long-run variance of the mean
        assert abs(x.mean()) < 3 * se

    def test_acf_matches_reduced_model(self):
        beta, n = 0.9, 100_000
        cfg = BiasedAnomalyConfig(alpha=0.0, beta=beta, sigma2_land=0.5, sigma2_sea=0.5,
                                  n=n, seed=11)
        s = simulate_biased_anomaly(cfg)
        emp = sample_acf(s, 5)
        params, order = reduce_to_arma(cfg)
        for h in range(1, 6):
            theo = (
                theoretical_acf_ar1(params.ar[0], h)
                if order.q == 0
                else theoretical_acf_arma11(params.ar[0], params.ma[0], h)
            )
            assert abs(emp.value(h) - theo) <= 3.0 / np.sqrt(n)

    def test_beta_bound_enforced(self):
        with pytest.raises(AdmissibilityError):
            BiasedAnomalyConfig(alpha=0.0, beta=1.0, sigma2_land=0.1, sigma2_sea=0.1,
                                n=10, seed=0)

    def test_cross_covariance_bound(self):
        with pytest.raises(RangeError):
            BiasedAnomalyConfig(alpha=0.0, beta=0.5, sigma2_land=0.1, sigma2_sea=0.1,
                                n=10, seed=0, cross_covariance=0.5)


class TestDifferenceSeries:
    def test_identical_series_zero(self):
        s = TimeSeries.from_values([1.0, 2.0, 3.0], start_time=2000)
        assert difference_series(s, s).values == (0.0, 0.0, 0.0)

    def test_constant_shift(self):
        truth = TimeSeries.from_values([1.0, 2.0, 3.0])
        reduced = TimeSeries.from_values([1.5, 2.5, 3.5])
        assert difference_series(truth, reduced).values == (-0.5, -0.5, -0.5)

    def test_misaligned_rejected(self):
        a = TimeSeries.from_values([1.0, 2.0], start_time=2000)
        b = TimeSeries.from_values([1.0, 2.0], start_time=2001)
        with pytest.raises(AlignmentError):
            difference_series(a, b)

    def test_addition_roundtrip(self):
        rng = np.random.default_rng(0)
        truth = TimeSeries.from_values(rng.normal(size=50))
        reduced = TimeSeries.from_values(rng.normal(size=50))
        d = difference_series(truth, reduced)
        assert np.allclose(
            np.asarray(d.values) + np.asarray(reduced.values), np.asarray(truth.values)
        )

    def test_noise_difference_variance(self):
        # truth = latent + nothing; reduced = latent shifted by the two noises
        rng = np.random.default_rng(1)
        n = 200_000
        s2l, s2s = 0.4, 0.6
        latent = rng.normal(size=n)
        noise = rng.normal(0, np.sqrt(s2l), n) + rng.normal(0, np.sqrt(s2s), n)
        truth = TimeSeries.from_values(latent)
        reduced = TimeSeries.from_values(latent + noise)
        d = np.asarray(difference_series(truth, reduced).values)
        assert np.var(d) == pytest.approx(s2l + s2s, rel=0.05)


class TestReduceToArma:
    def test_independent_noises_pure_ar1(self):
        cfg = BiasedAnomalyConfig(alpha=0.3, beta=0.6, sigma2_land=0.5, sigma2_sea=0.5,
                                  n=100, seed=0)
        params, order = reduce_to_arma(cfg)
        assert (order.p, order.d, order.q) == (1, 0, 0)
        assert params.ar == (0.6,)
        assert params.ma == ()
        assert params.sigma2 == pytest.approx(1.0, rel=1e-15)
        assert params.constant == 0.3

    def test_sea_only_variance(self):
        cfg = BiasedAnomalyConfig(alpha=0.0, beta=0.4, sigma2_land=0.0, sigma2_sea=0.8,
                                  n=100, seed=0)
        params, order = reduce_to_arma(cfg)
        assert params.sigma2 == pytest.approx(0.8)
        assert order.q == 0

    def test_land_only_variance(self):
        cfg = BiasedAnomalyConfig(alpha=0.0, beta=0.4, sigma2_land=0.7, sigma2_sea=0.0,
                                  n=100, seed=0)
        params, _ = reduce_to_arma(cfg)
        assert params.sigma2 == pytest.approx(0.7)

    def test_correlated_noises_give_ma1(self):
        cfg = BiasedAnomalyConfig(alpha=0.0, beta=0.5, sigma2_land=1.0, sigma2_sea=1.0,
                                  n=100, seed=0, cross_covariance=0.6)
        params, order = reduce_to_arma(cfg)
        assert order.q == 1
        theta, s2 = params.ma[0], params.sigma2
        # autocovariance matching: s2(1+theta^2) = 2.0, s2*theta = 0.6
        assert s2 * (1 + theta**2) == pytest.approx(2.0, rel=1e-12)
        assert s2 * theta == pytest.approx(0.6, rel=1e-12)
        assert abs(theta) < 1  # invertible branch chosen

    def test_correlated_reduction_matches_simulated_autocovariance(self):
        cfg = BiasedAnomalyConfig(alpha=0.0, beta=0.5, sigma2_land=1.0, sigma2_sea=1.0,
                                  n=400_000, seed=5, cross_covariance=0.6)
        params, order = reduce_to_arma(cfg)
        x = np.asarray(simulate_biased_anomaly(cfg).values)
        x = x - x.mean()
        emp = np.array([x[: x.size - h] @ x[h:] / x.size for h in range(4)])
        theo = arma_autocov_psi(params.ar, params.ma, params.sigma2, 4)
        assert np.allclose(emp, theo, rtol=0.03, atol=0.01)

    def test_zero_total_variance_rejected(self):
        cfg = BiasedAnomalyConfig(alpha=0.0, beta=0.5, sigma2_land=0.0, sigma2_sea=0.0,
                                  n=10, seed=0)
        with pytest.raises(DegenerateInputError):
            reduce_to_arma(cfg)


class TestFitRecovery:
    @pytest.mark.parametrize("beta", [0.3, 0.6, 0.9])
    def test_ar_coefficient_recovered(self, beta):
        cfg = BiasedAnomalyConfig(alpha=0.0, beta=beta, sigma2_land=0.5, sigma2_sea=0.5,
                                  n=10_000, seed=17)
        s = simulate_biased_anomaly(cfg)
        m = fit(s, ModelOrder(1, 0, 1, include_constant=False))
        assert m.params.ar[0] == pytest.approx(beta, abs=0.05)
