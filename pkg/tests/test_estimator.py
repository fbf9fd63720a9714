"""
Unit tests for the comparator_mimo.estimator module.

The analytic MSE of the linear estimator is exact under the Bussgang
model, so the empirical checks use tight tolerances.
"""

import numpy as np
import pytest

from comparator_mimo.channel import (
    orthogonal_pilots,
    rayleigh_channel,
    sigma_n2_for_snr,
    transmit_pilots,
)
from comparator_mimo.domain.system import ComparatorNetwork, SystemConfig
from comparator_mimo.estimator import (
    EstimatorSolution,
    analytic_mse,
    approx_sum_mse,
    default_channel_correlation,
    design_estimator,
    error_correlation,
    estimate_channel,
    estimate_correlation,
    kappa,
    lra_lmmse_filter,
    unquantized_lmmse_estimate,
)
from comparator_mimo.exceptions import (
    EstimatorFailure,
    InvalidInputError,
    SingularCovarianceError,
)
from comparator_mimo.model import (
    all_pairs,
    build_b_eff,
    empty_network,
    fully_connected_network,
    quantize,
)


@pytest.fixture
def cfg_4x16() -> SystemConfig:
    cfg = SystemConfig(n_users=4, n_antennas=16, pilot_len=4)
    return cfg.with_noise(sigma_n2_for_snr(cfg, 30.0))


def _prefix_network(n_antennas: int, count: int) -> ComparatorNetwork:
    return ComparatorNetwork(n_antennas=n_antennas, pairs=tuple(all_pairs(n_antennas)[:count]))


# ============================================================================
# TEST SUITE 1: Analytic MSE
# ============================================================================


class TestAnalyticMse:
    """Test suite for the closed-form estimator statistics."""

    def test_no_network_value(self, cfg_4x16):
        """Test the 4x16, 30 dB value without comparators (about 23.27)."""
        pilots = orthogonal_pilots(cfg_4x16)
        err = error_correlation(
            pilots,
            build_b_eff(empty_network(16), 4),
            default_channel_correlation(cfg_4x16),
            cfg_4x16.sigma_n2,
        )
        expected = 64.0 - (128.0 / np.pi) * (4.0 / 4.001)
        assert analytic_mse(err) == pytest.approx(expected, rel=1e-6)

    def test_closed_form_kappa_matches_without_network(self, cfg_4x16):
        """Test N_r N_t (1 - 2 kappa) is exact when there are no comparators."""
        solution = design_estimator(
            orthogonal_pilots(cfg_4x16),
            build_b_eff(empty_network(16), 4),
            default_channel_correlation(cfg_4x16),
            cfg_4x16.sigma_n2,
        )
        assert approx_sum_mse(cfg_4x16, 0) == pytest.approx(solution.analytic_mse, rel=1e-6)

    def test_kappa_grows_with_comparators(self, cfg_4x16):
        """Test kappa increases with alpha and stays below 1/2."""
        values = [kappa(cfg_4x16, alpha) for alpha in (0, 32, 496)]
        assert values[0] < values[1] < values[2] < 0.5

    def test_nested_networks_do_not_increase_mse(self, small_cfg):
        """Test adding comparators never raises the analytic MSE."""
        pilots = orthogonal_pilots(small_cfg)
        r_h = default_channel_correlation(small_cfg)
        mses = []
        for count in (0, 4, 10, 28):
            b_eff = build_b_eff(_prefix_network(4, count), small_cfg.pilot_len)
            mses.append(analytic_mse(error_correlation(pilots, b_eff, r_h, small_cfg.sigma_n2)))
        assert all(later <= earlier + 1e-9 for earlier, later in zip(mses, mses[1:]))
        assert mses[-1] < mses[0]

    def test_error_and_estimate_correlation_split_r_h(self, small_cfg):
        """Test E[eps eps^T] + E[h_hat h_hat^T] = R_h."""
        pilots = orthogonal_pilots(small_cfg)
        r_h = default_channel_correlation(small_cfg)
        b_eff = build_b_eff(_prefix_network(4, 6), 2)
        err = error_correlation(pilots, b_eff, r_h, 0.1)
        est = estimate_correlation(pilots, b_eff, r_h, 0.1)
        assert np.allclose(err + est, r_h)

    def test_error_correlation_psd(self, small_cfg):
        """Test the error correlation is positive semidefinite."""
        pilots = orthogonal_pilots(small_cfg)
        b_eff = build_b_eff(fully_connected_network(4), 2)
        err = error_correlation(pilots, b_eff, default_channel_correlation(small_cfg), 0.1)
        assert np.min(np.linalg.eigvalsh(err)) > -1e-10

    def test_design_matches_separate_calls(self, small_cfg):
        """Test design_estimator bundles W and the error statistics."""
        pilots = orthogonal_pilots(small_cfg)
        r_h = default_channel_correlation(small_cfg)
        b_eff = build_b_eff(_prefix_network(4, 3), 2)
        solution = design_estimator(pilots, b_eff, r_h, 0.1)
        assert np.allclose(solution.w, lra_lmmse_filter(pilots, b_eff, r_h, 0.1))
        assert solution.analytic_mse == pytest.approx(
            analytic_mse(error_correlation(pilots, b_eff, r_h, 0.1))
        )

    def test_approximate_path_runs(self, small_cfg):
        """Test the first-order arcsine path yields a filter of the same shape."""
        pilots = orthogonal_pilots(small_cfg)
        r_h = default_channel_correlation(small_cfg)
        b_eff = build_b_eff(_prefix_network(4, 3), 2)
        exact = lra_lmmse_filter(pilots, b_eff, r_h, 0.1)
        approx = lra_lmmse_filter(pilots, b_eff, r_h, 0.1, approximate=True)
        assert approx.shape == exact.shape
        assert np.all(np.isfinite(approx))

    def test_bad_r_h_rejected(self, small_cfg):
        """Test a mis-sized channel correlation is an input error."""
        pilots = orthogonal_pilots(small_cfg)
        with pytest.raises(InvalidInputError):
            lra_lmmse_filter(pilots, build_b_eff(empty_network(4), 2), np.eye(4), 0.1)


# ============================================================================
# TEST SUITE 2: Empirical Estimation
# ============================================================================


class TestEmpiricalEstimation:
    """Test suite comparing simulated estimates with the analytic MSE."""

    @pytest.mark.parametrize("count", [0, 5])
    def test_empirical_mse_matches_analytic(self, small_cfg, rng, count):
        """Test the simulated MSE agrees with trace(E[eps eps^T])."""
        pilots = orthogonal_pilots(small_cfg)
        r_h = default_channel_correlation(small_cfg)
        b_eff = build_b_eff(_prefix_network(4, count), 2)
        solution = design_estimator(pilots, b_eff, r_h, small_cfg.sigma_n2)

        errors = []
        for _ in range(3000):
            realization = rayleigh_channel(small_cfg, rng)
            y_rp = transmit_pilots(realization.h_complex, pilots, small_cfg.sigma_n2, rng)
            h_hat = estimate_channel(quantize(b_eff @ y_rp), solution.w).h_hat_real
            errors.append(np.sum((realization.h_vec_real - h_hat) ** 2))
        assert np.mean(errors) == pytest.approx(solution.analytic_mse, rel=0.05)

    def test_estimate_shapes(self, small_cfg, rng):
        """Test the complex estimate unvecs into an (N_r, N_t) matrix."""
        pilots = orthogonal_pilots(small_cfg)
        b_eff = build_b_eff(empty_network(4), 2)
        w = lra_lmmse_filter(pilots, b_eff, default_channel_correlation(small_cfg), 0.1)
        realization = rayleigh_channel(small_cfg, rng)
        z = quantize(b_eff @ transmit_pilots(realization.h_complex, pilots, 0.1, rng))
        solution = estimate_channel(z, w)
        assert solution.h_hat_real.shape == (16,)
        assert solution.channel_matrix(4).shape == (4, 2)
        assert solution.channel_matrix_real(4).shape == (8, 4)

    def test_channel_matrix_requires_estimate(self):
        """Test a filter-only solution has no channel matrix."""
        with pytest.raises(EstimatorFailure):
            EstimatorSolution(w=np.zeros((2, 2))).channel_matrix(1)

    def test_unquantized_estimate_recovers_channel(self, small_cfg, rng):
        """Test the high-resolution baseline is near exact without noise."""
        pilots = orthogonal_pilots(small_cfg)
        r_h = default_channel_correlation(small_cfg)
        realization = rayleigh_channel(small_cfg, rng)
        y_rp = transmit_pilots(realization.h_complex, pilots, 1e-10, rng)
        solution = unquantized_lmmse_estimate(y_rp, pilots, r_h, 1e-10)
        assert np.allclose(solution.h_hat_real, realization.h_vec_real, atol=1e-3)

    def test_estimator_failure_is_singular_covariance(self):
        """Test estimator failures are caught as singular covariances."""
        assert issubclass(EstimatorFailure, SingularCovarianceError)
