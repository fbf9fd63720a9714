"""
Channel and signal generation.

Channel vectors use ``h = vec(H)`` (column-major, one block of N_r entries
per user) and ``h_R = [Re(h); Im(h)]``. Pilot observations use
``y_Rp = [Re vec(Y_p); Im vec(Y_p)]`` with ``Y_p = H Phi^T + N_p``.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.linalg import dft

from comparator_mimo.domain.system import ChannelMode, LargeScaleProfile, SystemConfig
from comparator_mimo.exceptions import ConfigurationError, InvalidInputError
from comparator_mimo.model import complex_to_real_channel, complex_to_real_vector


@dataclass(frozen=True)
class ChannelRealization:
    """One channel draw: ``H = H_w diag(sqrt(beta))`` and its real expansion."""

    h_complex: np.ndarray
    h_real: np.ndarray
    betas: np.ndarray

    @property
    def n_antennas(self) -> int:
        return self.h_complex.shape[0]

    @property
    def n_users(self) -> int:
        return self.h_complex.shape[1]

    @property
    def h_vec_real(self) -> np.ndarray:
        """Stacked channel vector h_R of length 2 N_r N_t."""
        return complex_to_real_vector(self.h_complex.reshape(-1, order="F"))

    @classmethod
    def from_complex(cls, h: np.ndarray, betas: np.ndarray | None = None) -> "ChannelRealization":
        if betas is None:
            betas = np.ones(h.shape[1])
        return cls(h_complex=h, h_real=complex_to_real_channel(h), betas=betas)


@dataclass(frozen=True)
class PilotMatrix:
    """Pilot symbols Phi (tau, N_t) and the real expansion of kron(Phi, I_Nr)."""

    phi: np.ndarray
    phi_tilde_real: np.ndarray

    @property
    def tau(self) -> int:
        return self.phi.shape[0]


def channel_vector_to_matrix(h_vec: np.ndarray, n_antennas: int) -> np.ndarray:
    """Unvec a complex channel vector into its (N_r, N_t) matrix."""
    return h_vec.reshape(n_antennas, -1, order="F")


def _complex_gaussian(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def rayleigh_channel(cfg: SystemConfig, rng: np.random.Generator) -> ChannelRealization:
    """I.i.d. CN(0, 1) channel with unit large-scale gains."""
    h_w = _complex_gaussian(rng, (cfg.n_antennas, cfg.n_users))
    return ChannelRealization.from_complex(h_w)


def sample_user_distances(
    n_users: int, profile: LargeScaleProfile, rng: np.random.Generator
) -> np.ndarray:
    """Distances of users dropped uniformly on a disc around the base station."""
    return profile.cell_radius * np.sqrt(rng.random(n_users))


def large_scale_gains(distances: np.ndarray, profile: LargeScaleProfile) -> np.ndarray:
    """Log-distance gains (d_0 / d)^n_PL with distances clamped to d_0."""
    clamped = np.maximum(distances, profile.reference_distance)
    return (profile.reference_distance / clamped) ** profile.path_loss_exponent


def pathloss_channel(
    cfg: SystemConfig, profile: LargeScaleProfile, rng: np.random.Generator
) -> ChannelRealization:
    """Rayleigh small-scale fading scaled by log-distance path loss."""
    if profile.mode != ChannelMode.LOG_DISTANCE:
        raise ConfigurationError("pathloss_channel requires a log-distance profile")
    betas = large_scale_gains(sample_user_distances(cfg.n_users, profile, rng), profile)
    h_w = _complex_gaussian(rng, (cfg.n_antennas, cfg.n_users))
    return ChannelRealization.from_complex(h_w * np.sqrt(betas)[None, :], betas)


def draw_channel(
    cfg: SystemConfig, profile: LargeScaleProfile, rng: np.random.Generator
) -> ChannelRealization:
    """Dispatch on the profile mode."""
    if profile.mode == ChannelMode.LOG_DISTANCE:
        return pathloss_channel(cfg, profile, rng)
    return rayleigh_channel(cfg, rng)


def mean_channel_trace(
    cfg: SystemConfig,
    profile: LargeScaleProfile,
    rng: np.random.Generator,
    n_draws: int = 10_000,
) -> float:
    """Monte Carlo estimate of E[trace(H H^H)] for the profile."""
    if profile.mode == ChannelMode.RAYLEIGH:
        return float(cfg.n_antennas * cfg.n_users)
    total = 0.0
    for _ in range(n_draws):
        h = draw_channel(cfg, profile, rng).h_complex
        total += float(np.sum(np.abs(h) ** 2))
    return total / n_draws


def orthogonal_pilots(cfg: SystemConfig) -> PilotMatrix:
    """
    Column-orthogonal pilots built from the first N_t columns of a tau-point
    DFT matrix, every entry of modulus sqrt(sigma_x2).
    """
    if cfg.pilot_len < cfg.n_users:
        raise InvalidInputError(
            f"pilot_len ({cfg.pilot_len}) must be >= n_users ({cfg.n_users})"
        )
    phi = np.sqrt(cfg.sigma_x2) * dft(cfg.pilot_len)[:, : cfg.n_users]
    phi_tilde = np.kron(phi, np.eye(cfg.n_antennas))
    return PilotMatrix(phi=phi, phi_tilde_real=complex_to_real_channel(phi_tilde))


def sigma_n2_for_snr(
    cfg: SystemConfig, snr_db: float, channel_ensemble_mean_trace: float | None = None
) -> float:
    """
    Noise variance giving the requested average receive SNR per user and antenna.

    Defaults to the Rayleigh ensemble where E[trace(H H^H)] = N_r N_t.
    """
    mean_trace = channel_ensemble_mean_trace
    if mean_trace is None:
        mean_trace = float(cfg.n_antennas * cfg.n_users)
    return cfg.sigma_x2 * mean_trace / (
        cfg.n_users * cfg.n_antennas * 10.0 ** (snr_db / 10.0)
    )


def qpsk_symbols(bits: np.ndarray, sigma_x2: float) -> np.ndarray:
    """Gray-mapped QPSK: bit 0 sets the real sign, bit 1 the imaginary sign."""
    bits = np.asarray(bits)
    scale = np.sqrt(sigma_x2 / 2.0)
    return scale * ((1 - 2 * bits[..., 0]) + 1j * (1 - 2 * bits[..., 1]))


def qpsk_source(
    cfg: SystemConfig, rng: np.random.Generator, n_vectors: int | None = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw uniform QPSK symbols.

    Returns:
        ``(x, bits)``. With ``n_vectors=None`` x has shape (N_t,) and bits
        (N_t, 2); otherwise x is (N_t, n_vectors) and bits (N_t, n_vectors, 2).
    """
    shape = (cfg.n_users, 2) if n_vectors is None else (cfg.n_users, n_vectors, 2)
    bits = rng.integers(0, 2, size=shape, dtype=np.int8)
    return qpsk_symbols(bits, cfg.sigma_x2), bits


def transmit_pilots(
    h: np.ndarray, pilots: PilotMatrix, sigma_n2: float, rng: np.random.Generator
) -> np.ndarray:
    """Stacked real pilot observation y_Rp = Phi_tilde_R h_R + n_Rp."""
    n_antennas, n_users = h.shape
    expected = 2 * n_antennas * n_users
    if pilots.phi_tilde_real.shape[1] != expected:
        raise InvalidInputError(
            f"Pilot matrix expects {pilots.phi_tilde_real.shape[1]} channel entries, "
            f"got {expected}"
        )
    h_vec_real = complex_to_real_vector(h.reshape(-1, order="F"))
    noise = np.sqrt(sigma_n2 / 2.0) * rng.standard_normal(pilots.phi_tilde_real.shape[0])
    return pilots.phi_tilde_real @ h_vec_real + noise


def transmit_data(
    h_real: np.ndarray, x_real: np.ndarray, sigma_n2: float, rng: np.random.Generator
) -> np.ndarray:
    """Real received data y_R = H_R x_R + n_R; x_R may hold one symbol vector per column."""
    y = h_real @ x_real
    return y + np.sqrt(sigma_n2 / 2.0) * rng.standard_normal(y.shape)
