"""
Unit tests for the comparator_mimo.receiver module.

Trials use 2 users and 4 antennas so the exhaustive Gamma sum stays small.
"""

import numpy as np
import pytest

from comparator_mimo.channel import rayleigh_channel
from comparator_mimo.domain.scenario import (
    CsiMode,
    DetectorMode,
    Metric,
    NetworkMode,
    Scenario,
)
from comparator_mimo.domain.system import ChannelMode
from comparator_mimo.model import empty_network
from comparator_mimo.receiver import ReceiverChain, TrialRecord
from comparator_mimo.utils import trial_generator


def _chain(**overrides) -> ReceiverChain:
    fields = dict(n_users=2, n_antennas=4, metric=Metric.BER, snr_grid_db=[10.0])
    fields.update(overrides)
    return ReceiverChain(Scenario(**fields))


def _run(chain: ReceiverChain, snr_db: float = 10.0, n_noise: int = 20, trial: int = 0):
    return chain.run_channel(
        snr_db, trial_generator(5, trial, 0), trial_generator(5, trial, 1), n_noise
    )


# ============================================================================
# TEST SUITE 1: Building Blocks
# ============================================================================


class TestBuildingBlocks:
    """Test suite for channel, network and CSI acquisition."""

    def test_noise_variance(self):
        """Test the Rayleigh noise level at 10 dB."""
        assert _chain().noise_variance(10.0) == pytest.approx(0.1)

    def test_channel_shared_across_snr(self):
        """Test the channel stream does not depend on the SNR point."""
        chain = _chain()
        low = chain.draw_link(chain.config_at(0.0), trial_generator(1, 0, 0))
        high = chain.draw_link(chain.config_at(20.0), trial_generator(1, 0, 0))
        assert np.array_equal(low.true.h_complex, high.true.h_complex)

    def test_outdated_link(self):
        """Test h = sqrt(lam) h1 + sqrt(1 - lam) h2 with h1 known."""
        chain = _chain(csi_mode=CsiMode.OUTDATED_LAMBDA, lambda_=0.4)
        cfg = chain.config_at(10.0)
        link = chain.draw_link(cfg, trial_generator(1, 0, 0))
        replay = trial_generator(1, 0, 0)
        known = rayleigh_channel(cfg, replay)
        unknown = rayleigh_channel(cfg, replay)
        expected = np.sqrt(0.4) * known.h_complex + np.sqrt(0.6) * unknown.h_complex
        assert np.allclose(link.true.h_complex, expected)
        assert np.allclose(link.known_real, known.h_real)

    @pytest.mark.parametrize(
        "mode, alpha_p, expected",
        [
            (NetworkMode.NONE, 0, 0),
            (NetworkMode.FULL, 0, 28),
            (NetworkMode.RANDOM, 5, 5),
            (NetworkMode.GREEDY, 3, 3),
            (NetworkMode.SEQ_SINR, 4, 4),
        ],
    )
    def test_network_modes(self, mode, alpha_p, expected):
        """Test every network mode yields the configured comparator count."""
        chain = _chain(network_mode=mode, alpha_p=alpha_p)
        cfg = chain.config_at(10.0)
        rng = trial_generator(1, 0, 0)
        link = chain.draw_link(cfg, rng)
        assert chain.design_network(cfg, link.true.h_real, rng).alpha == expected

    def test_estimator_cache(self):
        """Test channel-independent networks reuse the estimator design."""
        chain = _chain(csi_mode=CsiMode.ESTIMATED)
        cfg = chain.config_at(10.0)
        first = chain.estimator_for(cfg, empty_network(4))
        assert chain.estimator_for(cfg, empty_network(4)) is first
        assert chain.estimator_for(chain.config_at(0.0), empty_network(4)) is not first

    def test_random_networks_not_cached(self):
        """Test channel-dependent networks design a fresh estimator."""
        chain = _chain(csi_mode=CsiMode.ESTIMATED, network_mode=NetworkMode.RANDOM, alpha_p=3)
        cfg = chain.config_at(10.0)
        first = chain.estimator_for(cfg, empty_network(4))
        assert chain.estimator_for(cfg, empty_network(4)) is not first

    def test_robust_estimator_carries_gamma(self):
        """Test the robust detector gets Gamma of the error correlation."""
        chain = _chain(csi_mode=CsiMode.ESTIMATED, detector_mode=DetectorMode.ROBUST)
        entry = chain.estimator_for(chain.config_at(10.0), empty_network(4))
        assert entry.gamma is not None
        assert entry.gamma.gamma.shape == (8, 8)

    def test_unquantized_pilot_stage(self):
        """Test the unquantized receiver estimates from raw pilots."""
        chain = _chain(csi_mode=CsiMode.ESTIMATED, detector_mode=DetectorMode.UNQUANTIZED)
        stage = chain.pilot_stage(chain.config_at(10.0), empty_network(4))
        assert not stage.quantized
        assert stage.entry is None
        assert stage.w.shape == (16, 16)

    def test_path_loss_prior_ignores_large_scale_gains(self):
        """Test the estimator prior stays I/2 under log-distance path loss."""
        chain = _chain(
            channel_mode=ChannelMode.LOG_DISTANCE,
            csi_mode=CsiMode.ESTIMATED,
            path_loss_exponent=3.0,
        )
        assert np.array_equal(chain.r_h, 0.5 * np.eye(16))
        cfg = chain.config_at(10.0)
        link = chain.draw_link(cfg, trial_generator(1, 0, 0))
        assert not np.allclose(link.true.betas, 1.0)
        stage = chain.pilot_stage(cfg, empty_network(4))
        assert chain.estimate(cfg, link, stage, trial_generator(1, 0, 1)).shape == (16,)


# ============================================================================
# TEST SUITE 2: Trials
# ============================================================================


class TestTrials:
    """Test suite for single-channel trials of every metric."""

    def test_ber_trial(self):
        """Test bit counts of a BER trial."""
        record = _run(_chain(network_mode=NetworkMode.FULL), n_noise=30)
        assert record.n_bits == 2 * 2 * 30
        assert 0 <= record.bit_errors <= record.n_bits

    def test_trial_is_reproducible(self):
        """Test equal generators give equal records."""
        chain = _chain(network_mode=NetworkMode.RANDOM, alpha_p=6)
        assert _run(chain) == _run(chain)

    def test_symbol_mse_trial(self):
        """Test one squared error per transmission."""
        record = _run(_chain(metric=Metric.SYMBOL_MSE), n_noise=7)
        assert len(record.values) == 7
        assert all(v >= 0.0 for v in record.values)

    def test_mse_trial(self):
        """Test pilot-phase errors and the analytic MSE."""
        chain = _chain(metric=Metric.MSE, csi_mode=CsiMode.ESTIMATED)
        record = _run(chain, n_noise=5)
        assert len(record.values) == 5
        assert record.analytic is not None
        assert 0.0 < record.analytic < 8.0

    @pytest.mark.parametrize(
        "overrides",
        [
            dict(csi_mode=CsiMode.ESTIMATED, detector_mode=DetectorMode.ROBUST),
            dict(csi_mode=CsiMode.OUTDATED_LAMBDA, lambda_=0.8, detector_mode=DetectorMode.ROBUST),
            dict(csi_mode=CsiMode.OUTDATED_LAMBDA, lambda_=0.8),
            dict(detector_mode=DetectorMode.MATCHED, network_mode=NetworkMode.FULL),
            dict(csi_mode=CsiMode.ESTIMATED, detector_mode=DetectorMode.UNQUANTIZED),
        ],
    )
    def test_detector_combinations(self, overrides):
        """Test CSI and detector combinations run end to end."""
        record = _run(_chain(**overrides), n_noise=10)
        assert record.n_bits == 40

    def test_unquantized_high_snr(self):
        """Test the unquantized receiver decodes cleanly at 40 dB."""
        chain = _chain(detector_mode=DetectorMode.UNQUANTIZED)
        record = _run(chain, snr_db=40.0, n_noise=50)
        assert record.bit_errors == 0

    def test_sum_rate_trial(self):
        """Test the per-channel sum rate."""
        chain = _chain(metric=Metric.SUM_RATE, network_mode=NetworkMode.FULL)
        rate = chain.sum_rate_trial(10.0, trial_generator(5, 0, 0), n_noise=1)
        assert rate > 0.0

    def test_channel_value(self):
        """Test the per-channel value of BER and sample records."""
        assert TrialRecord(bit_errors=3, n_bits=12).channel_value == 0.25
        assert TrialRecord(values=(1.0, 3.0)).channel_value == 2.0
        assert TrialRecord().channel_value == 0.0
