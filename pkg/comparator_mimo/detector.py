"""
Linear detection of QPSK streams from comparator-aided 1-bit observations.

All filters G have one column per real stream, and the symbol estimate is
``x_hat_R = G^T z``. Robust variants fold CSI mismatch into the covariance
of the unquantized signal through the symbol-matrix second moment Gamma_R.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Any, Dict, Optional, Tuple

import numpy as np
from loguru import logger

from comparator_mimo.bussgang import arcsine_correlation, data_covariance, normalization
from comparator_mimo.config import GAMMA_DEFAULT_SAMPLES, GAMMA_EXACT_LIMIT
from comparator_mimo.domain.system import SystemConfig
from comparator_mimo.exceptions import GammaModeError, InvalidInputError
from comparator_mimo.model import complex_to_real_channel
from comparator_mimo.utils import solve_symmetric, symmetrize

_SQRT_TWO_OVER_PI = np.sqrt(2.0 / np.pi)

# Symbol vectors per vectorized chunk of the Gamma sum
_GAMMA_CHUNK = 1024


class DetectorVariant(str, Enum):
    PERFECT = "perfect"
    ROBUST_LAMBDA = "robust_lambda"
    ROBUST_ESTIMATION = "robust_estimation"
    UNQUANTIZED = "unquantized"
    MATCHED = "matched"


class GammaMode(str, Enum):
    EXACT = "exact"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class DetectorFilter:
    """Receive filter G_R with the variant that produced it."""

    g: np.ndarray
    variant: DetectorVariant = DetectorVariant.PERFECT
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def n_streams(self) -> int:
        return self.g.shape[1]


@dataclass(frozen=True)
class GammaMatrix:
    """Gamma_R = E[X_R M X_R^T] for a kernel M."""

    gamma: np.ndarray
    mode: GammaMode
    n_samples: Optional[int] = None


@dataclass(frozen=True)
class SlicedSymbols:
    """Hard QPSK decisions, soft outputs and the decided bits."""

    soft: np.ndarray
    symbols: np.ndarray
    bits: np.ndarray


@dataclass(frozen=True)
class LinearModelMoments:
    """Second moments of (z_Q, x_R) under the Bussgang-linearized model."""

    c_zq: np.ndarray
    c_zqx: np.ndarray
    c_x: np.ndarray


# ============================================================================
# Symbol-matrix second moments
# ============================================================================


def symbol_matrix_real(x: np.ndarray, n_antennas: int) -> np.ndarray:
    """Real expansion of kron(x^T, I_Nr), so that X_R h_R = [Re(Hx); Im(Hx)]."""
    return complex_to_real_channel(np.kron(x.reshape(1, -1), np.eye(n_antennas)))


def _batched_symbol_matrices(xs: np.ndarray, n_antennas: int) -> np.ndarray:
    """Stack of real symbol matrices for symbol vectors in the rows of ``xs``."""
    eye = np.eye(n_antennas)
    # (batch, N_r, N_t N_r): entry [b, n, u*N_r + m] = x[b, u] * I[n, m]
    x_tilde = np.einsum("bu,nm->bnum", xs, eye).reshape(xs.shape[0], n_antennas, -1)
    re, im = np.real(x_tilde), np.imag(x_tilde)
    top = np.concatenate([re, -im], axis=2)
    bottom = np.concatenate([im, re], axis=2)
    return np.concatenate([top, bottom], axis=1)


def _gamma_sum(xs: np.ndarray, kernel: np.ndarray, n_antennas: int) -> np.ndarray:
    total = np.zeros((2 * n_antennas, 2 * n_antennas))
    for start in range(0, xs.shape[0], _GAMMA_CHUNK):
        mats = _batched_symbol_matrices(xs[start : start + _GAMMA_CHUNK], n_antennas)
        weighted = mats @ kernel
        total += np.tensordot(weighted, mats, axes=([0, 2], [0, 2]))
    return total


def gamma_matrix(
    kernel: np.ndarray,
    cfg: SystemConfig,
    mode: GammaMode = GammaMode.EXACT,
    n_samples: int = GAMMA_DEFAULT_SAMPLES,
    rng: Optional[np.random.Generator] = None,
) -> GammaMatrix:
    """
    Average of X_R M X_R^T over uniform QPSK symbol vectors.

    Exact mode enumerates all 4^N_t symbol vectors; Sampled mode averages
    ``n_samples`` uniform draws from ``rng``.

    Raises:
        GammaModeError: if Exact is requested with more than GAMMA_EXACT_LIMIT terms
        InvalidInputError: if the kernel shape does not match 2 N_r N_t
    """
    size = 2 * cfg.n_antennas * cfg.n_users
    if kernel.shape != (size, size):
        raise InvalidInputError(f"Kernel has shape {kernel.shape}, expected {(size, size)}")
    scale = np.sqrt(cfg.sigma_x2 / 2.0)
    points = scale * np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j])

    if mode == GammaMode.EXACT:
        n_terms = 4**cfg.n_users
        if n_terms > GAMMA_EXACT_LIMIT:
            raise GammaModeError(
                f"Exact Gamma needs {n_terms} terms (limit {GAMMA_EXACT_LIMIT}); "
                "use sampled mode"
            )
        logger.debug(f"Exact Gamma over {n_terms} symbol vectors")
        xs = np.array(list(product(points, repeat=cfg.n_users)))
        gamma = _gamma_sum(xs, kernel, cfg.n_antennas) / n_terms
        return GammaMatrix(gamma=symmetrize(gamma), mode=mode)

    if rng is None:
        raise InvalidInputError("Sampled Gamma requires a random generator")
    logger.debug(f"Sampled Gamma over {n_samples} symbol vectors")
    xs = points[rng.integers(0, 4, size=(n_samples, cfg.n_users))]
    gamma = _gamma_sum(xs, kernel, cfg.n_antennas) / n_samples
    return GammaMatrix(gamma=symmetrize(gamma), mode=mode, n_samples=n_samples)


def default_gamma_mode(cfg: SystemConfig) -> GammaMode:
    """Exact when the exhaustive sum fits the limit, otherwise sampled."""
    return GammaMode.EXACT if 4**cfg.n_users <= GAMMA_EXACT_LIMIT else GammaMode.SAMPLED


# ============================================================================
# Filters
# ============================================================================


def _lra_lmmse(
    c_zr: np.ndarray, b_h_known: np.ndarray, cfg: SystemConfig, gain: float = 1.0
) -> Tuple[np.ndarray, LinearModelMoments]:
    """G = C_zQ^-1 C_zQx with C_zQx = gain sqrt(2/pi) sigma_x2/2 K B H."""
    k_diag = normalization(c_zr)
    c_zq = arcsine_correlation(c_zr)
    c_zqx = gain * _SQRT_TWO_OVER_PI * 0.5 * cfg.sigma_x2 * k_diag[:, None] * b_h_known
    g = solve_symmetric(c_zq, c_zqx)
    c_x = 0.5 * cfg.sigma_x2 * np.eye(b_h_known.shape[1])
    return g, LinearModelMoments(c_zq=c_zq, c_zqx=c_zqx, c_x=c_x)


def linear_model_moments(
    h_real: np.ndarray, b: np.ndarray, cfg: SystemConfig
) -> LinearModelMoments:
    """Moments for a receiver that knows H_R exactly."""
    return _lra_lmmse(data_covariance(h_real, b, cfg), b @ h_real, cfg)[1]


def lmmse_detector(h_real: np.ndarray, b: np.ndarray, cfg: SystemConfig) -> DetectorFilter:
    """LRA-LMMSE filter for a receiver that treats H_R as the true channel."""
    g, _ = _lra_lmmse(data_covariance(h_real, b, cfg), b @ h_real, cfg)
    return DetectorFilter(g=g, variant=DetectorVariant.PERFECT)


def robust_lambda_detector(
    h_real_known: np.ndarray,
    lam: float,
    r_h2: np.ndarray,
    b: np.ndarray,
    cfg: SystemConfig,
    gamma: Optional[GammaMatrix] = None,
    rng: Optional[np.random.Generator] = None,
) -> DetectorFilter:
    """
    Robust filter for the outdated-channel model h = sqrt(lam) h1 + sqrt(1-lam) h2.

    ``h_real_known`` is the real expansion of the known part H_1 and ``r_h2``
    the correlation of the unknown part. A precomputed ``gamma`` for kernel
    ``r_h2`` may be passed to avoid repeating the symbol sum.
    """
    if not 0.0 < lam < 1.0:
        raise InvalidInputError(f"lambda must lie in (0, 1), got {lam}")
    if gamma is None:
        gamma = gamma_matrix(r_h2, cfg, default_gamma_mode(cfg), rng=rng)
    bh = b @ h_real_known
    c_zr = symmetrize(
        lam * 0.5 * cfg.sigma_x2 * bh @ bh.T
        + (1.0 - lam) * b @ gamma.gamma @ b.T
        + 0.5 * cfg.sigma_n2 * b @ b.T
    )
    g, _ = _lra_lmmse(c_zr, bh, cfg, gain=np.sqrt(lam))
    return DetectorFilter(
        g=g, variant=DetectorVariant.ROBUST_LAMBDA, params={"lambda": lam}
    )


def robust_estimation_detector(
    h_hat_real: np.ndarray,
    err_corr: np.ndarray,
    b: np.ndarray,
    cfg: SystemConfig,
    gamma: Optional[GammaMatrix] = None,
    rng: Optional[np.random.Generator] = None,
) -> DetectorFilter:
    """Robust filter that accounts for the channel estimation error correlation."""
    if gamma is None:
        gamma = gamma_matrix(err_corr, cfg, default_gamma_mode(cfg), rng=rng)
    bh = b @ h_hat_real
    c_zr = symmetrize(
        0.5 * cfg.sigma_x2 * bh @ bh.T
        + b @ gamma.gamma @ b.T
        + 0.5 * cfg.sigma_n2 * b @ b.T
    )
    g, _ = _lra_lmmse(c_zr, bh, cfg)
    return DetectorFilter(g=g, variant=DetectorVariant.ROBUST_ESTIMATION)


def unquantized_lmmse_detector(h_real: np.ndarray, cfg: SystemConfig) -> DetectorFilter:
    """High-resolution baseline applied to y_R directly."""
    c_y = symmetrize(
        0.5 * cfg.sigma_x2 * h_real @ h_real.T
        + 0.5 * cfg.sigma_n2 * np.eye(h_real.shape[0])
    )
    g = solve_symmetric(c_y, 0.5 * cfg.sigma_x2 * h_real)
    return DetectorFilter(g=g, variant=DetectorVariant.UNQUANTIZED)


def matched_filter(h_real: np.ndarray, b: np.ndarray) -> DetectorFilter:
    """G = B H_R."""
    return DetectorFilter(g=b @ h_real, variant=DetectorVariant.MATCHED)


# ============================================================================
# Application
# ============================================================================


def detect_and_slice(z_q: np.ndarray, g: np.ndarray, sigma_x2: float = 1.0) -> SlicedSymbols:
    """
    Filter and slice per stream.

    ``z_q`` may be a single observation or one observation per column. A
    non-negative real (imaginary) output decides bit 0 (bit 1) as 0.
    """
    soft = g.T @ z_q
    n_users = g.shape[1] // 2
    bits = np.stack([soft[:n_users] < 0.0, soft[n_users:] < 0.0], axis=-1).astype(np.int8)
    scale = np.sqrt(sigma_x2 / 2.0)
    symbols = scale * ((1 - 2 * bits[..., 0]) + 1j * (1 - 2 * bits[..., 1]))
    return SlicedSymbols(soft=soft, symbols=symbols, bits=bits)


def symbol_mse(g: np.ndarray, moments: LinearModelMoments) -> np.ndarray:
    """Per-stream diag(G^T C_zQ G - 2 G^T C_zQx + C_x)."""
    quad = g.T @ moments.c_zq @ g - 2.0 * g.T @ moments.c_zqx + moments.c_x
    return np.diag(quad).copy()


def total_symbol_mse(g: np.ndarray, moments: LinearModelMoments) -> float:
    """E||x_R - G^T z_Q||^2 under the linearized model."""
    return float(np.sum(symbol_mse(g, moments)))
