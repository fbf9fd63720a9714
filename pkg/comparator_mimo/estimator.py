"""
LRA-LMMSE channel estimation from 1-bit pilot observations.

The pilot observation after comparators and quantization is linearized as
``z_Qp = Phi_hat_R h_R + noise`` with ``Phi_hat_R = A_Rp B_eff Phi_tilde_R``.
The filter ``W = R_h Phi_hat_R^T C_zQp^(-1)`` minimizes the linear-model MSE.
"""

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from comparator_mimo.bussgang import covariance_set, pilot_covariance
from comparator_mimo.channel import PilotMatrix, channel_vector_to_matrix
from comparator_mimo.domain.system import SystemConfig
from comparator_mimo.exceptions import EstimatorFailure, SingularCovarianceError
from comparator_mimo.model import complex_to_real_channel, real_to_complex_vector
from comparator_mimo.utils import solve_symmetric, symmetrize


@dataclass(frozen=True)
class EstimatorSolution:
    """
    Filter, estimate and error statistics of the channel estimator.

    Fields that a given operation does not produce are left as None.
    """

    w: np.ndarray
    h_hat_real: Optional[np.ndarray] = None
    h_hat_complex: Optional[np.ndarray] = None
    err_corr: Optional[np.ndarray] = None
    analytic_mse: Optional[float] = None

    def with_statistics(self, err_corr: np.ndarray) -> "EstimatorSolution":
        return replace(self, err_corr=err_corr, analytic_mse=analytic_mse(err_corr))

    def channel_matrix(self, n_antennas: int) -> np.ndarray:
        """Complex (N_r, N_t) channel estimate."""
        if self.h_hat_complex is None:
            raise EstimatorFailure("No channel estimate has been computed")
        return channel_vector_to_matrix(self.h_hat_complex, n_antennas)

    def channel_matrix_real(self, n_antennas: int) -> np.ndarray:
        """Real expansion of the channel estimate."""
        return complex_to_real_channel(self.channel_matrix(n_antennas))


def default_channel_correlation(cfg: SystemConfig) -> np.ndarray:
    """
    R_h = I/2 for unit-variance Rayleigh entries.

    This is also the prior under log-distance path loss: the estimator does
    not know the per-user large-scale gains, so they are left out of R_h.
    """
    return 0.5 * np.eye(2 * cfg.n_antennas * cfg.n_users)


def _pilot_statistics(
    pilots: PilotMatrix,
    b_eff: np.ndarray,
    r_h: np.ndarray,
    sigma_n2: float,
    approximate: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """Return (Phi_hat_R, C_zQp)."""
    try:
        cov = covariance_set(pilot_covariance(pilots, b_eff, r_h, sigma_n2), approximate)
    except SingularCovarianceError as e:
        raise EstimatorFailure(f"Pilot covariance is singular: {e}") from e
    phi_hat = np.sqrt(2.0 / np.pi) * cov.k_diag[:, None] * (b_eff @ pilots.phi_tilde_real)
    return phi_hat, cov.c_zq


def _solve_pilot_system(
    pilots: PilotMatrix,
    b_eff: np.ndarray,
    r_h: np.ndarray,
    sigma_n2: float,
    approximate: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """Return (W, R Phi_hat^T C^-1 Phi_hat R)."""
    phi_hat, c_zq = _pilot_statistics(pilots, b_eff, r_h, sigma_n2, approximate)
    phi_hat_r = phi_hat @ r_h
    solved = solve_symmetric(c_zq, phi_hat_r, error_cls=EstimatorFailure)
    w = solved.T
    return w, symmetrize(phi_hat_r.T @ solved)


def lra_lmmse_filter(
    pilots: PilotMatrix,
    b_eff: np.ndarray,
    r_h: np.ndarray,
    sigma_n2: float,
    approximate: bool = False,
) -> np.ndarray:
    """
    LRA-LMMSE filter W of shape (2 N_r N_t, tau(2N_r + alpha)).

    Args:
        pilots: Pilot matrix
        b_eff: Pilot-phase comparator matrix
        r_h: Channel correlation R_h
        sigma_n2: Complex noise variance
        approximate: Use the first-order arcsine approximation for C_zQp

    Raises:
        EstimatorFailure: if C_zQp stays singular after jitter
    """
    w, _ = _solve_pilot_system(pilots, b_eff, r_h, sigma_n2, approximate)
    return w


def estimate_channel(z_qp: np.ndarray, w: np.ndarray) -> EstimatorSolution:
    """Apply the filter: h_hat_R = W z_Qp, then h_hat = h_hat_a + j h_hat_b."""
    h_hat_real = w @ z_qp
    return EstimatorSolution(
        w=w, h_hat_real=h_hat_real, h_hat_complex=real_to_complex_vector(h_hat_real)
    )


def error_correlation(
    pilots: PilotMatrix,
    b_eff: np.ndarray,
    r_h: np.ndarray,
    sigma_n2: float,
    approximate: bool = False,
) -> np.ndarray:
    """E[eps eps^T] = R_h - R_h Phi_hat^T C_zQp^(-1) Phi_hat R_h."""
    _, explained = _solve_pilot_system(pilots, b_eff, r_h, sigma_n2, approximate)
    return symmetrize(r_h - explained)


def estimate_correlation(
    pilots: PilotMatrix,
    b_eff: np.ndarray,
    r_h: np.ndarray,
    sigma_n2: float,
    approximate: bool = False,
) -> np.ndarray:
    """E[h_hat h_hat^T] = R_h Phi_hat^T C_zQp^(-1) Phi_hat R_h."""
    _, explained = _solve_pilot_system(pilots, b_eff, r_h, sigma_n2, approximate)
    return explained


def design_estimator(
    pilots: PilotMatrix,
    b_eff: np.ndarray,
    r_h: np.ndarray,
    sigma_n2: float,
    approximate: bool = False,
) -> EstimatorSolution:
    """Filter and error statistics from a single factorization."""
    w, explained = _solve_pilot_system(pilots, b_eff, r_h, sigma_n2, approximate)
    err_corr = symmetrize(r_h - explained)
    logger.debug(
        f"Estimator designed: {b_eff.shape[0]} pilot outputs, "
        f"analytic MSE {np.trace(err_corr):.4f}"
    )
    return EstimatorSolution(w=w).with_statistics(err_corr)


def analytic_mse(err_corr: np.ndarray) -> float:
    """Sum MSE: trace of the error correlation."""
    return float(np.trace(err_corr))


def unquantized_lmmse_filter(
    pilots: PilotMatrix, r_h: np.ndarray, sigma_n2: float
) -> np.ndarray:
    """High-resolution reference: R_h Phi_R^T (Phi_R R_h Phi_R^T + sigma_n2/2 I)^(-1)."""
    phi_r = pilots.phi_tilde_real
    c_y = symmetrize(phi_r @ r_h @ phi_r.T + 0.5 * sigma_n2 * np.eye(phi_r.shape[0]))
    return solve_symmetric(c_y, phi_r @ r_h, error_cls=EstimatorFailure).T


def unquantized_lmmse_estimate(
    y_rp: np.ndarray, pilots: PilotMatrix, r_h: np.ndarray, sigma_n2: float
) -> EstimatorSolution:
    """Estimate the channel from unquantized pilot observations."""
    return estimate_channel(y_rp, unquantized_lmmse_filter(pilots, r_h, sigma_n2))


def kappa(cfg: SystemConfig, alpha: int) -> float:
    """
    Prefactor of the estimate correlation under Rayleigh fading.

    Replaces the per-input comparator count by its expectation, so it is an
    analysis approximation and not used by the estimator itself.
    """
    snr_factor = cfg.n_users * cfg.sigma_x2 / (cfg.n_users * cfg.sigma_x2 + cfg.sigma_n2)
    spread = (np.pi - 2.0) / (2.0 * (1.0 + alpha / (2.0 * cfg.n_antennas)) + np.pi - 2.0)
    return float(0.5 * snr_factor * (1.0 - spread))


def approx_sum_mse(cfg: SystemConfig, alpha: int) -> float:
    """N_r N_t (1 - 2 kappa)."""
    return float(cfg.n_antennas * cfg.n_users * (1.0 - 2.0 * kappa(cfg, alpha)))
