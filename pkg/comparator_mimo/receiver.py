"""
Receiver chain of one Monte Carlo trial.

A trial draws a channel, designs the comparator network, acquires CSI,
builds the detector and runs the data (or pilot) transmissions of one SNR
point. Channel-level draws come from one generator and noise-level draws
from another, so the same channel is reused across the SNR grid.
"""

import threading
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from comparator_mimo.channel import (
    ChannelRealization,
    channel_vector_to_matrix,
    draw_channel,
    mean_channel_trace,
    orthogonal_pilots,
    qpsk_source,
    rayleigh_channel,
    sigma_n2_for_snr,
    transmit_data,
    transmit_pilots,
)
from comparator_mimo.detector import (
    GammaMatrix,
    default_gamma_mode,
    detect_and_slice,
    gamma_matrix,
    lmmse_detector,
    matched_filter,
    robust_estimation_detector,
    robust_lambda_detector,
    unquantized_lmmse_detector,
)
from comparator_mimo.domain.scenario import (
    CsiMode,
    DetectorMode,
    Metric,
    NetworkMode,
    Scenario,
)
from comparator_mimo.domain.system import ComparatorNetwork, SystemConfig
from comparator_mimo.estimator import (
    EstimatorSolution,
    default_channel_correlation,
    design_estimator,
    estimate_channel,
    unquantized_lmmse_filter,
)
from comparator_mimo.model import (
    build_b,
    build_b_eff,
    complex_to_real_channel,
    complex_to_real_vector,
    empty_network,
    fully_connected_network,
    quantize,
    random_network,
    real_to_complex_vector,
)
from comparator_mimo.netdesign import greedy_mse_search, sequential_sinr_search
from comparator_mimo.rates import channel_sum_rate
from comparator_mimo.utils import ENSEMBLE_KEY, generator_for


@dataclass(frozen=True)
class TrialRecord:
    """Raw outcome of one channel at one SNR point."""

    bit_errors: int = 0
    n_bits: int = 0
    values: Tuple[float, ...] = ()
    analytic: Optional[float] = None

    @property
    def channel_value(self) -> float:
        """Per-channel metric used for the spread across channels."""
        if self.n_bits:
            return self.bit_errors / self.n_bits
        return float(np.mean(self.values)) if self.values else 0.0


@dataclass(frozen=True)
class Link:
    """True channel and the part of it the receiver is told about."""

    true: ChannelRealization
    known_real: np.ndarray


@dataclass(frozen=True)
class Csi:
    """Channel state available to the detector."""

    h_real: np.ndarray
    err_corr: Optional[np.ndarray] = None
    gamma: Optional[GammaMatrix] = None


@dataclass(frozen=True)
class _EstimatorEntry:
    solution: EstimatorSolution
    gamma: Optional[GammaMatrix]


@dataclass(frozen=True)
class PilotStage:
    """Everything the pilot phase of one channel needs, built once per channel."""

    b_eff: np.ndarray
    w: np.ndarray
    entry: Optional[_EstimatorEntry] = None
    quantized: bool = True


class ReceiverChain:
    """Builds and runs trials of a scenario. Safe to share across threads."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.system = scenario.system
        self.profile = scenario.profile
        self.pilots = orthogonal_pilots(self.system)
        self.r_h = default_channel_correlation(self.system)
        self._mean_trace = mean_channel_trace(
            self.system, self.profile, generator_for(scenario.master_seed, ENSEMBLE_KEY)
        )
        self._lock = threading.Lock()
        self._estimators: Dict[Tuple[Tuple[Tuple[int, int], ...], float], _EstimatorEntry] = {}
        self._outdated_gamma: Optional[GammaMatrix] = None

    # ------------------------------------------------------------------
    # building blocks
    # ------------------------------------------------------------------

    def noise_variance(self, snr_db: float) -> float:
        return sigma_n2_for_snr(self.system, snr_db, self._mean_trace)

    def config_at(self, snr_db: float) -> SystemConfig:
        return self.system.with_noise(self.noise_variance(snr_db))

    def draw_link(self, cfg: SystemConfig, rng: np.random.Generator) -> Link:
        """Draw the channel; outdated CSI mixes a known and an unknown part."""
        if self.scenario.csi_mode != CsiMode.OUTDATED_LAMBDA:
            realization = draw_channel(cfg, self.profile, rng)
            return Link(true=realization, known_real=realization.h_real)
        lam = float(self.scenario.lambda_)
        known = draw_channel(cfg, self.profile, rng)
        unknown = rayleigh_channel(cfg, rng)
        h = np.sqrt(lam) * known.h_complex + np.sqrt(1.0 - lam) * unknown.h_complex
        return Link(
            true=ChannelRealization.from_complex(h, known.betas),
            known_real=known.h_real,
        )

    def design_network(
        self, cfg: SystemConfig, h_design: np.ndarray, rng: np.random.Generator
    ) -> ComparatorNetwork:
        mode = self.scenario.network_mode
        alpha_p = self.scenario.alpha_p
        if mode == NetworkMode.FULL:
            return fully_connected_network(cfg.n_antennas)
        if mode == NetworkMode.RANDOM:
            return random_network(cfg.n_antennas, alpha_p, rng)
        if mode == NetworkMode.GREEDY:
            return greedy_mse_search(h_design, alpha_p, cfg)
        if mode == NetworkMode.SEQ_SINR:
            return sequential_sinr_search(h_design, alpha_p, cfg)
        return empty_network(cfg.n_antennas)

    def _channel_independent(self) -> bool:
        return self.scenario.network_mode in (NetworkMode.NONE, NetworkMode.FULL)

    def estimator_for(
        self, cfg: SystemConfig, network: ComparatorNetwork
    ) -> _EstimatorEntry:
        """Estimator design, cached for networks that do not depend on the channel."""
        key = (network.pairs, cfg.sigma_n2)
        if self._channel_independent():
            with self._lock:
                cached = self._estimators.get(key)
            if cached is not None:
                return cached
        b_eff = build_b_eff(network, cfg.pilot_len)
        solution = design_estimator(
            self.pilots,
            b_eff,
            self.r_h,
            cfg.sigma_n2,
            approximate=self.scenario.approximate_pilot_correlation,
        )
        gamma = None
        if self.scenario.detector_mode == DetectorMode.ROBUST:
            gamma = gamma_matrix(
                solution.err_corr,
                cfg,
                default_gamma_mode(cfg),
                rng=generator_for(self.scenario.master_seed, ENSEMBLE_KEY),
            )
        entry = _EstimatorEntry(solution=solution, gamma=gamma)
        if self._channel_independent():
            with self._lock:
                self._estimators[key] = entry
        return entry

    def outdated_gamma(self, cfg: SystemConfig) -> GammaMatrix:
        """Gamma of the unknown channel part, R_h2 = I/2; independent of SNR."""
        with self._lock:
            cached = self._outdated_gamma
        if cached is not None:
            return cached
        gamma = gamma_matrix(
            default_channel_correlation(cfg),
            cfg,
            default_gamma_mode(cfg),
            rng=generator_for(self.scenario.master_seed, ENSEMBLE_KEY),
        )
        with self._lock:
            self._outdated_gamma = gamma
        return gamma

    def pilot_stage(self, cfg: SystemConfig, network: ComparatorNetwork) -> PilotStage:
        """Pilot-phase comparator matrix and estimator of one network."""
        b_eff = build_b_eff(network, cfg.pilot_len)
        if self.scenario.detector_mode == DetectorMode.UNQUANTIZED:
            w = unquantized_lmmse_filter(self.pilots, self.r_h, cfg.sigma_n2)
            return PilotStage(b_eff=b_eff, w=w, quantized=False)
        entry = self.estimator_for(cfg, network)
        return PilotStage(b_eff=b_eff, w=entry.solution.w, entry=entry)

    def estimate(
        self,
        cfg: SystemConfig,
        link: Link,
        stage: PilotStage,
        rng: np.random.Generator,
    ) -> np.ndarray:
        """One pilot transmission; returns the estimated real channel vector."""
        y_rp = transmit_pilots(link.true.h_complex, self.pilots, cfg.sigma_n2, rng)
        if not stage.quantized:
            return stage.w @ y_rp
        return estimate_channel(quantize(stage.b_eff @ y_rp), stage.w).h_hat_real

    def _estimated_csi(
        self,
        cfg: SystemConfig,
        link: Link,
        stage: PilotStage,
        rng: np.random.Generator,
    ) -> Csi:
        h_hat = real_to_complex_vector(self.estimate(cfg, link, stage, rng))
        h_hat_real = complex_to_real_channel(
            channel_vector_to_matrix(h_hat, cfg.n_antennas)
        )
        if stage.entry is None:
            return Csi(h_real=h_hat_real)
        return Csi(
            h_real=h_hat_real,
            err_corr=stage.entry.solution.err_corr,
            gamma=stage.entry.gamma,
        )

    def acquire_csi(
        self,
        cfg: SystemConfig,
        link: Link,
        network: ComparatorNetwork,
        rng: np.random.Generator,
    ) -> Csi:
        if self.scenario.csi_mode == CsiMode.ESTIMATED:
            return self._estimated_csi(cfg, link, self.pilot_stage(cfg, network), rng)
        return Csi(h_real=link.known_real)

    def detector(self, cfg: SystemConfig, csi: Csi, b: np.ndarray) -> np.ndarray:
        """Receive filter G for the configured detector and CSI."""
        mode = self.scenario.detector_mode
        if mode == DetectorMode.MATCHED:
            return matched_filter(csi.h_real, b).g
        if mode == DetectorMode.UNQUANTIZED:
            return unquantized_lmmse_detector(csi.h_real, cfg).g
        if mode == DetectorMode.ROBUST:
            if self.scenario.csi_mode == CsiMode.OUTDATED_LAMBDA:
                return robust_lambda_detector(
                    csi.h_real,
                    float(self.scenario.lambda_),
                    default_channel_correlation(cfg),
                    b,
                    cfg,
                    gamma=self.outdated_gamma(cfg),
                ).g
            if self.scenario.csi_mode == CsiMode.ESTIMATED and csi.err_corr is not None:
                return robust_estimation_detector(
                    csi.h_real, csi.err_corr, b, cfg, gamma=csi.gamma
                ).g
        return lmmse_detector(csi.h_real, b, cfg).g

    # ------------------------------------------------------------------
    # trials
    # ------------------------------------------------------------------

    def run_channel(
        self,
        snr_db: float,
        channel_rng: np.random.Generator,
        noise_rng: np.random.Generator,
        n_noise: int,
    ) -> TrialRecord:
        """Run every transmission of one channel at one SNR point."""
        cfg = self.config_at(snr_db)
        link = self.draw_link(cfg, channel_rng)
        design_real = (
            link.known_real
            if self.scenario.csi_mode == CsiMode.OUTDATED_LAMBDA
            else link.true.h_real
        )
        network = self.design_network(cfg, design_real, channel_rng)
        metric = self.scenario.metric

        if metric == Metric.MSE:
            return self._mse_trial(cfg, link, network, noise_rng, n_noise)
        b = build_b(network)
        if metric == Metric.SUM_RATE:
            return self._rate_trial(cfg, link, network, b, noise_rng, n_noise)

        csi = self.acquire_csi(cfg, link, network, noise_rng)
        g = self.detector(cfg, csi, b)
        return self._data_trial(cfg, link, b, g, noise_rng, n_noise)

    def _data_trial(
        self,
        cfg: SystemConfig,
        link: Link,
        b: np.ndarray,
        g: np.ndarray,
        rng: np.random.Generator,
        n_noise: int,
    ) -> TrialRecord:
        x, bits = qpsk_source(cfg, rng, n_vectors=n_noise)
        x_real = complex_to_real_vector(x)
        y = transmit_data(link.true.h_real, x_real, cfg.sigma_n2, rng)
        observed = y if self.scenario.detector_mode == DetectorMode.UNQUANTIZED else quantize(b @ y)
        sliced = detect_and_slice(observed, g, cfg.sigma_x2)
        if self.scenario.metric == Metric.SYMBOL_MSE:
            errors = np.sum((x_real - sliced.soft) ** 2, axis=0)
            return TrialRecord(values=tuple(float(e) for e in errors))
        return TrialRecord(
            bit_errors=int(np.count_nonzero(sliced.bits != bits)),
            n_bits=int(bits.size),
        )

    def _mse_trial(
        self,
        cfg: SystemConfig,
        link: Link,
        network: ComparatorNetwork,
        rng: np.random.Generator,
        n_noise: int,
    ) -> TrialRecord:
        h_vec = link.true.h_vec_real
        stage = self.pilot_stage(cfg, network)
        errors = []
        for _ in range(n_noise):
            h_hat_vec = self.estimate(cfg, link, stage, rng)
            errors.append(float(np.sum((h_vec - h_hat_vec) ** 2)))
        analytic = stage.entry.solution.analytic_mse if stage.entry is not None else None
        return TrialRecord(values=tuple(errors), analytic=analytic)

    def _rate_trial(
        self,
        cfg: SystemConfig,
        link: Link,
        network: ComparatorNetwork,
        b: np.ndarray,
        rng: np.random.Generator,
        n_noise: int,
    ) -> TrialRecord:
        h_real = link.true.h_real
        if self.scenario.csi_mode == CsiMode.PERFECT:
            g = self.detector(cfg, Csi(h_real=h_real), b)
            return TrialRecord(values=(channel_sum_rate(h_real, h_real, g, b, cfg),))
        stage = self.pilot_stage(cfg, network)
        rates = []
        for _ in range(n_noise):
            csi = self._estimated_csi(cfg, link, stage, rng)
            g = self.detector(cfg, csi, b)
            rates.append(channel_sum_rate(h_real, csi.h_real, g, b, cfg))
        return TrialRecord(values=tuple(rates))

    def sum_rate_trial(self, snr_db: float, rng: np.random.Generator, n_noise: int) -> float:
        """Mean sum rate of one channel drawn from ``rng``."""
        record = self.run_channel(snr_db, rng, rng, n_noise)
        return record.channel_value
