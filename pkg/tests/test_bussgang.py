"""
Unit tests for the comparator_mimo.bussgang module.

The Monte Carlo checks compare the closed forms against sign-quantized
Gaussian samples.
"""

import numpy as np
import pytest

from comparator_mimo.bussgang import (
    approx_arcsine_correlation,
    arcsine_correlation,
    bussgang_gain,
    closed_form_pilot_gain,
    covariance_set,
    data_covariance,
    normalization,
    pilot_covariance,
    quantization_noise_covariance,
)
from comparator_mimo.channel import orthogonal_pilots, rayleigh_channel
from comparator_mimo.domain.system import SystemConfig
from comparator_mimo.estimator import default_channel_correlation
from comparator_mimo.exceptions import InvalidInputError, SingularCovarianceError
from comparator_mimo.model import build_b, build_b_eff, empty_network, fully_connected_network, quantize


def _covariance(rng, size):
    a = rng.standard_normal((size, size))
    return a @ a.T + 0.5 * np.eye(size)


# ============================================================================
# TEST SUITE 1: Arcsine Law
# ============================================================================


class TestArcsineLaw:
    """Test suite for the quantized correlation."""

    def test_known_value(self):
        """Test rho = 1/2 gives (2/pi) asin(1/2) = 1/3."""
        c = np.array([[4.0, 1.0], [1.0, 1.0]])
        c_zq = arcsine_correlation(c)
        assert c_zq[0, 1] == pytest.approx(1.0 / 3.0)

    def test_unit_diagonal_and_symmetry(self, rng):
        """Test diag(C_zQ) = 1 and C_zQ = C_zQ^T."""
        c_zq = arcsine_correlation(_covariance(rng, 6))
        assert np.allclose(np.diag(c_zq), 1.0, atol=1e-10)
        assert np.allclose(c_zq, c_zq.T)

    def test_matches_monte_carlo(self, rng):
        """Test the arcsine law against sign-quantized samples."""
        c = _covariance(rng, 4)
        samples = rng.multivariate_normal(np.zeros(4), c, size=200_000)
        q = quantize(samples.T)
        empirical = q @ q.T / samples.shape[0]
        assert np.allclose(arcsine_correlation(c), empirical, atol=0.01)

    def test_clipping_keeps_values_real(self):
        """Test perfectly correlated inputs stay inside asin's domain."""
        c = np.ones((3, 3))
        c_zq = arcsine_correlation(c)
        assert np.all(np.isfinite(c_zq))
        assert np.allclose(c_zq, 1.0)

    def test_approximation(self):
        """Test the first-order form keeps unit diagonal and scales off-diagonals by 2/pi."""
        c = np.array([[1.0, 0.3], [0.3, 1.0]])
        approx = approx_arcsine_correlation(c)
        assert np.allclose(np.diag(approx), 1.0)
        assert approx[0, 1] == pytest.approx(2.0 / np.pi * 0.3)

    def test_non_positive_diagonal(self):
        """Test a zero variance is reported as singular."""
        with pytest.raises(SingularCovarianceError):
            normalization(np.diag([1.0, 0.0]))


# ============================================================================
# TEST SUITE 2: Bussgang Decomposition
# ============================================================================


class TestBussgang:
    """Test suite for the Bussgang gain and quantization noise."""

    def test_gain_matches_cross_correlation(self, rng):
        """Test E[sign(z) z^T] = A C."""
        c = _covariance(rng, 3)
        samples = rng.multivariate_normal(np.zeros(3), c, size=200_000).T
        cross = quantize(samples) @ samples.T / samples.shape[1]
        expected = bussgang_gain(c) @ c
        assert np.allclose(cross, expected, atol=0.03 * np.max(np.abs(expected)))

    def test_quantization_noise_diagonal(self, rng):
        """Test diag(C_nq) = 1 - 2/pi."""
        cov = covariance_set(_covariance(rng, 5))
        c_nq = quantization_noise_covariance(cov.c_zq, cov.a_r, cov.c_zr)
        assert np.allclose(np.diag(c_nq), 1.0 - 2.0 / np.pi)

    def test_quantization_noise_uncorrelated_with_input(self, rng):
        """Test E[n_q z^T] vanishes for n_q = sign(z) - A z."""
        c = _covariance(rng, 3)
        samples = rng.multivariate_normal(np.zeros(3), c, size=200_000).T
        n_q = quantize(samples) - bussgang_gain(c) @ samples
        cross = n_q @ samples.T / samples.shape[1]
        assert np.allclose(cross, 0.0, atol=0.03 * np.sqrt(np.max(np.diag(c))))

    def test_covariance_set_fields(self, rng):
        """Test K, A and C_zQ are consistent."""
        c = _covariance(rng, 4)
        cov = covariance_set(c)
        assert np.allclose(cov.k_diag, 1.0 / np.sqrt(np.diag(c)))
        assert np.allclose(cov.a_r, bussgang_gain(c))
        assert np.allclose(cov.c_zq, arcsine_correlation(c))


# ============================================================================
# TEST SUITE 3: Pilot and Data Covariances
# ============================================================================


class TestCovariances:
    """Test suite for the covariances feeding the estimator and detector."""

    def test_pilot_covariance_shape(self, small_cfg):
        """Test C_zRp is square in the number of pilot outputs."""
        pilots = orthogonal_pilots(small_cfg)
        b_eff = build_b_eff(fully_connected_network(4), 2)
        c = pilot_covariance(pilots, b_eff, default_channel_correlation(small_cfg), 0.1)
        assert c.shape == (b_eff.shape[0], b_eff.shape[0])
        assert np.allclose(c, c.T)

    def test_closed_form_pilot_gain(self):
        """Test the scalar gain for tau = N_t, R_h = I/2 and no comparators."""
        cfg = SystemConfig(n_users=3, n_antennas=4, sigma_x2=1.0, sigma_n2=0.2, pilot_len=3)
        pilots = orthogonal_pilots(cfg)
        c = pilot_covariance(
            pilots, build_b_eff(empty_network(4), 3), default_channel_correlation(cfg), 0.2
        )
        assert np.allclose(np.diag(bussgang_gain(c)), closed_form_pilot_gain(cfg))

    def test_pilot_covariance_rejects_bad_r_h(self, small_cfg):
        """Test R_h must match the channel vector length."""
        pilots = orthogonal_pilots(small_cfg)
        b_eff = build_b_eff(empty_network(4), 2)
        with pytest.raises(InvalidInputError):
            pilot_covariance(pilots, b_eff, np.eye(3), 0.1)

    def test_data_covariance(self, small_cfg, rng):
        """Test C_zR for the identity network."""
        h_real = rayleigh_channel(small_cfg, rng).h_real
        b = build_b(empty_network(4))
        expected = 0.5 * h_real @ h_real.T + 0.05 * np.eye(8)
        assert np.allclose(data_covariance(h_real, b, small_cfg), expected)

    def test_data_covariance_dimension_mismatch(self, small_cfg, rng):
        """Test B must have 2 N_r columns."""
        h_real = rayleigh_channel(small_cfg, rng).h_real
        with pytest.raises(InvalidInputError):
            data_covariance(h_real, np.eye(6), small_cfg)
