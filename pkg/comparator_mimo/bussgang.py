"""
Bussgang decomposition building blocks.

For a zero-mean Gaussian vector z with covariance C, the sign quantizer
output satisfies ``sign(z) = A z + n_q`` with ``A = sqrt(2/pi) diag(C)^(-1/2)``
and ``n_q`` uncorrelated with ``z``. The correlation of ``sign(z)`` follows
the arcsine law.
"""

from dataclasses import dataclass

import numpy as np

from comparator_mimo.channel import PilotMatrix
from comparator_mimo.domain.system import SystemConfig
from comparator_mimo.exceptions import InvalidInputError, SingularCovarianceError
from comparator_mimo.utils import symmetrize

_TWO_OVER_PI = 2.0 / np.pi


@dataclass(frozen=True)
class CovarianceSet:
    """Unquantized covariance, its normalization, quantized correlation and gain."""

    c_zr: np.ndarray
    k_diag: np.ndarray
    c_zq: np.ndarray

    @property
    def k_r(self) -> np.ndarray:
        return np.diag(self.k_diag)

    @property
    def a_r(self) -> np.ndarray:
        return np.sqrt(_TWO_OVER_PI) * self.k_r


def normalization(c_zr: np.ndarray) -> np.ndarray:
    """Diagonal of K = diag(C)^(-1/2) as a vector."""
    diag = np.diag(c_zr)
    if np.any(diag <= 0.0):
        raise SingularCovarianceError("Covariance has a non-positive diagonal entry")
    return 1.0 / np.sqrt(diag)


def _normalized(c_zr: np.ndarray, k_diag: np.ndarray) -> np.ndarray:
    return np.clip(k_diag[:, None] * c_zr * k_diag[None, :], -1.0, 1.0)


def arcsine_correlation(c_zr: np.ndarray) -> np.ndarray:
    """C_zQ = (2/pi) asin(K C K), unit diagonal."""
    c_zq = _TWO_OVER_PI * np.arcsin(_normalized(c_zr, normalization(c_zr)))
    np.fill_diagonal(c_zq, 1.0)
    return symmetrize(c_zq)


def approx_arcsine_correlation(c_zr: np.ndarray) -> np.ndarray:
    """First-order approximation (2/pi)(K C K + (pi/2 - 1) I)."""
    norm = _normalized(c_zr, normalization(c_zr))
    c_zq = _TWO_OVER_PI * (norm + (np.pi / 2.0 - 1.0) * np.eye(norm.shape[0]))
    np.fill_diagonal(c_zq, 1.0)
    return symmetrize(c_zq)


def bussgang_gain(c_zr: np.ndarray) -> np.ndarray:
    """A = sqrt(2/pi) diag(C)^(-1/2) as a diagonal matrix."""
    return np.sqrt(_TWO_OVER_PI) * np.diag(normalization(c_zr))


def covariance_set(c_zr: np.ndarray, approximate: bool = False) -> CovarianceSet:
    """Bundle a covariance with its normalization and quantized correlation."""
    c_zq = approx_arcsine_correlation(c_zr) if approximate else arcsine_correlation(c_zr)
    return CovarianceSet(c_zr=c_zr, k_diag=normalization(c_zr), c_zq=c_zq)


def pilot_covariance(
    pilots: PilotMatrix, b_eff: np.ndarray, r_h: np.ndarray, sigma_n2: float
) -> np.ndarray:
    """C_zRp = B_eff (Phi_R R_h Phi_R^T + sigma_n2/2 I) B_eff^T."""
    phi_r = pilots.phi_tilde_real
    if r_h.shape != (phi_r.shape[1], phi_r.shape[1]):
        raise InvalidInputError(
            f"R_h has shape {r_h.shape}, expected {(phi_r.shape[1], phi_r.shape[1])}"
        )
    if b_eff.shape[1] != phi_r.shape[0]:
        raise InvalidInputError(
            f"B_eff has {b_eff.shape[1]} columns, pilot vector has {phi_r.shape[0]} entries"
        )
    inner = phi_r @ r_h @ phi_r.T + 0.5 * sigma_n2 * np.eye(phi_r.shape[0])
    return symmetrize(b_eff @ inner @ b_eff.T)


def closed_form_pilot_gain(cfg: SystemConfig) -> float:
    """Scalar pilot Bussgang gain for R_h = I/2, tau = N_t and orthogonal pilots."""
    return float(
        np.sqrt(_TWO_OVER_PI * 2.0 / (cfg.n_users * cfg.sigma_x2 + cfg.sigma_n2))
    )


def data_covariance(h_real: np.ndarray, b: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    """C_zR = sigma_x2/2 B H_R H_R^T B^T + sigma_n2/2 B B^T."""
    if b.shape[1] != h_real.shape[0]:
        raise InvalidInputError(
            f"B has {b.shape[1]} columns but H_R has {h_real.shape[0]} rows"
        )
    bh = b @ h_real
    return symmetrize(0.5 * cfg.sigma_x2 * bh @ bh.T + 0.5 * cfg.sigma_n2 * b @ b.T)


def quantization_noise_covariance(
    c_zq: np.ndarray, a_r: np.ndarray, c_zr: np.ndarray
) -> np.ndarray:
    """C_nq = C_zQ - A C_zR A^T."""
    return symmetrize(c_zq - a_r @ c_zr @ a_r.T)
