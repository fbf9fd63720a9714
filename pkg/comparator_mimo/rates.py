"""
Achievable-rate analysis.

The sum-rate lower bound treats the Bussgang quantization noise as Gaussian
with matching covariance. Each real stream k sees the filter row g_k, the
effective combiner ``d_k = g_k^T A_Rd B`` and the estimated channel columns.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from comparator_mimo.bussgang import (
    covariance_set,
    data_covariance,
    quantization_noise_covariance,
)
from comparator_mimo.domain.scenario import CsiMode, Metric, Scenario
from comparator_mimo.domain.system import SystemConfig
from comparator_mimo.exceptions import ConfigurationError, SingularCovarianceError
from comparator_mimo.utils import SampleSummary, summarize


@dataclass(frozen=True)
class RateDecomposition:
    """Second moments of the terms of one filtered stream and its rate."""

    d_rk: np.ndarray
    desired: float
    interference: np.ndarray
    estimation_error: np.ndarray
    awgn: float
    quantization: float
    sinr_k: float
    rate_k: float

    @property
    def impairment(self) -> float:
        return float(
            np.sum(self.interference)
            + np.sum(self.estimation_error)
            + self.awgn
            + self.quantization
        )


@dataclass(frozen=True)
class MfRateParams:
    """Constants of the closed-form matched-filter rate."""

    zeta: float
    delta_b: float
    kappa: float


@dataclass(frozen=True)
class RateEstimate:
    """Monte Carlo sum rate with a normal-approximation confidence interval."""

    mean: float
    stderr: float
    ci_low: float
    ci_high: float
    n_channels: int

    @classmethod
    def from_summary(cls, summary: SampleSummary) -> "RateEstimate":
        low, high = summary.confidence_interval()
        return cls(
            mean=summary.mean,
            stderr=summary.stderr,
            ci_low=low,
            ci_high=high,
            n_channels=summary.n,
        )


def data_quantization_noise(h_real: np.ndarray, b: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    """Quantization-noise covariance of the data phase."""
    cov = covariance_set(data_covariance(h_real, b, cfg))
    return quantization_noise_covariance(cov.c_zq, cov.a_r, cov.c_zr)


def stream_rate(
    k: int,
    h_hat: np.ndarray,
    err: Optional[np.ndarray],
    g: np.ndarray,
    b: np.ndarray,
    a_rd: np.ndarray,
    c_nq: np.ndarray,
    cfg: SystemConfig,
) -> RateDecomposition:
    """
    Rate lower bound of real stream ``k``.

    Args:
        k: Stream index in [0, 2 N_t)
        h_hat: Channel (estimate) columns, shape (2N_r, 2N_t)
        err: Estimation error columns of the same shape, None for perfect CSI
        g: Receive filter (2N_r + alpha, 2N_t)
        b: Comparator matrix B
        a_rd: Data-phase Bussgang gain
        c_nq: Data-phase quantization noise covariance
        cfg: System configuration

    Returns:
        RateDecomposition; an all-zero filter column yields rate 0
    """
    g_k = g[:, k]
    d = g_k @ a_rd @ b
    half_x = 0.5 * cfg.sigma_x2
    projections = d @ h_hat
    desired = float(half_x * projections[k] ** 2)
    interference = half_x * projections**2
    interference[k] = 0.0
    if err is None:
        estimation_error = np.zeros(h_hat.shape[1])
    else:
        estimation_error = half_x * (d @ err) ** 2
    awgn = float(0.5 * cfg.sigma_n2 * d @ d)
    quantization = float(g_k @ c_nq @ g_k)

    impairment = float(np.sum(interference) + np.sum(estimation_error) + awgn + quantization)
    if impairment <= 0.0:
        sinr_k = 0.0
    else:
        sinr_k = desired / impairment
    return RateDecomposition(
        d_rk=d,
        desired=desired,
        interference=interference,
        estimation_error=estimation_error,
        awgn=awgn,
        quantization=quantization,
        sinr_k=sinr_k,
        rate_k=float(0.5 * np.log2(1.0 + sinr_k)),
    )


def channel_sum_rate(
    h_real: np.ndarray,
    h_hat_real: np.ndarray,
    g: np.ndarray,
    b: np.ndarray,
    cfg: SystemConfig,
) -> float:
    """Sum over the 2N_t real streams for one channel and one estimate."""
    cov = covariance_set(data_covariance(h_real, b, cfg))
    a_rd = cov.a_r
    c_nq = quantization_noise_covariance(cov.c_zq, a_rd, cov.c_zr)
    err = h_real - h_hat_real
    err_cols = None if not np.any(err) else err
    return float(
        sum(
            stream_rate(k, h_hat_real, err_cols, g, b, a_rd, c_nq, cfg).rate_k
            for k in range(h_real.shape[1])
        )
    )


def sum_rate_monte_carlo(
    scenario: Scenario,
    n_channels: int,
    n_noise: int,
    rng: np.random.Generator,
    snr_db: Optional[float] = None,
) -> RateEstimate:
    """
    Average sum-rate lower bound over channel (and estimate) realizations.

    Evaluates at ``snr_db`` or at the first SNR of the scenario grid. With
    estimated CSI, ``n_noise`` pilot transmissions are drawn per channel.
    Channels whose covariances are singular are skipped.
    """
    # imported here: the receiver chain itself depends on this module's helpers
    from comparator_mimo.receiver import ReceiverChain

    if scenario.csi_mode == CsiMode.OUTDATED_LAMBDA:
        raise ConfigurationError("Sum rate is defined for perfect or estimated CSI")
    snr = scenario.snr_grid_db[0] if snr_db is None else snr_db
    chain = ReceiverChain(scenario.model_copy(update={"metric": Metric.SUM_RATE}))
    values = []
    for _ in range(n_channels):
        try:
            values.append(chain.sum_rate_trial(snr, rng, n_noise))
        except SingularCovarianceError:
            continue
    return RateEstimate.from_summary(summarize(values))


def mf_rate_params(cfg: SystemConfig, alpha: int, kappa: float) -> MfRateParams:
    """zeta from the average data gain, delta_B from the moments of B^T B."""
    zeta = float(np.sqrt((2.0 / np.pi) * 2.0 / (cfg.n_users * cfg.sigma_x2 + cfg.sigma_n2)))
    ratio = alpha / (2.0 * cfg.n_antennas)
    delta_b = (1.0 + ratio) ** 2 + alpha * (cfg.n_antennas - 1) / (4.0 * cfg.n_antennas**2)
    return MfRateParams(zeta=zeta, delta_b=float(delta_b), kappa=float(kappa))


def analytic_mf_rate(
    cfg: SystemConfig, alpha: int, kappa: float, perfect_csi: bool = False
) -> float:
    """
    Closed-form per-stream rate of the matched-filter receiver.

    With ``perfect_csi`` the prefactor is fixed to 1/2 and the estimate
    variance term vanishes. The sum rate is 2 N_t times this value.
    """
    params = mf_rate_params(cfg, alpha, 0.5 if perfect_csi else kappa)
    growth = 1.0 + alpha / (2.0 * cfg.n_antennas)
    n_streams = 2 * cfg.n_users
    zeta_inv2 = params.zeta**-2
    numerator = cfg.sigma_x2 * growth**2 * 2.0 * cfg.n_antennas * params.kappa
    denominator = (
        0.5 * cfg.sigma_x2 * params.delta_b * (n_streams - 1)
        + cfg.sigma_n2 * params.delta_b
        + 2.0 * (np.pi - 2.0) / np.pi * zeta_inv2 * growth
        + 2.0
        * zeta_inv2
        * params.delta_b
        * (2.0 / np.pi - params.zeta**2 * (cfg.n_users * cfg.sigma_x2 + cfg.sigma_n2) / 2.0)
    )
    if not perfect_csi:
        denominator += 0.5 * cfg.sigma_x2 * growth**2 * (2.0 * params.kappa + 1.0)
    return float(0.5 * np.log2(1.0 + numerator / denominator))


def analytic_mf_sum_rate(
    cfg: SystemConfig, alpha: int, kappa: float, perfect_csi: bool = False
) -> float:
    return 2 * cfg.n_users * analytic_mf_rate(cfg, alpha, kappa, perfect_csi)
