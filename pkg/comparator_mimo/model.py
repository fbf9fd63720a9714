"""
Real-valued system representation, the 1-bit quantizer and comparator
network matrices.

Real inputs are indexed ``0 .. N_r-1`` for the real parts of the antenna
signals and ``N_r .. 2N_r-1`` for the imaginary parts. Complex vectors are
stacked as ``[Re(v); Im(v)]`` and complex matrices expand to
``[[Re(H), -Im(H)], [Im(H), Re(H)]]``.
"""

from itertools import combinations
from typing import List, Tuple

import numpy as np

from comparator_mimo.domain.system import ComparatorNetwork
from comparator_mimo.exceptions import InvalidInputError

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def _require_finite(values: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(values)):
        raise InvalidInputError(f"{what} contains non-finite entries")


def complex_to_real_channel(h: np.ndarray) -> np.ndarray:
    """Expand a complex (m, n) matrix into its real (2m, 2n) block form."""
    h = np.asarray(h)
    if h.ndim != 2:
        raise InvalidInputError(f"Expected a 2-D matrix, got shape {h.shape}")
    _require_finite(h, "Channel matrix")
    re, im = np.real(h), np.imag(h)
    return np.block([[re, -im], [im, re]]).astype(float)


def real_to_complex_channel(h_real: np.ndarray) -> np.ndarray:
    """Inverse of complex_to_real_channel."""
    rows, cols = h_real.shape
    if rows % 2 or cols % 2:
        raise InvalidInputError(f"Real expansion must have even shape, got {h_real.shape}")
    m, n = rows // 2, cols // 2
    return h_real[:m, :n] + 1j * h_real[m:, :n]


def complex_to_real_vector(v: np.ndarray) -> np.ndarray:
    """Stack a complex vector as ``[Re(v); Im(v)]``."""
    v = np.asarray(v)
    _require_finite(v, "Vector")
    return np.concatenate([np.real(v), np.imag(v)]).astype(float)


def real_to_complex_vector(v_real: np.ndarray) -> np.ndarray:
    """Inverse of complex_to_real_vector."""
    half = v_real.shape[0] // 2
    return v_real[:half] + 1j * v_real[half:]


def quantize(v: np.ndarray) -> np.ndarray:
    """
    Element-wise 1-bit quantizer.

    Zero maps to +1. Works on vectors and on matrices whose columns are
    independent observations.
    """
    v = np.asarray(v, dtype=float)
    _require_finite(v, "Quantizer input")
    return np.where(v >= 0.0, 1.0, -1.0)


def all_pairs(n_antennas: int) -> List[Tuple[int, int]]:
    """All comparator pairs over ``2 * n_antennas`` inputs in lexicographic order."""
    return list(combinations(range(2 * n_antennas), 2))


def fully_connected_network(n_antennas: int) -> ComparatorNetwork:
    """Network comparing every two real inputs, N_r(2N_r - 1) comparators."""
    return ComparatorNetwork(n_antennas=n_antennas, pairs=tuple(all_pairs(n_antennas)))


def empty_network(n_antennas: int) -> ComparatorNetwork:
    return ComparatorNetwork(n_antennas=n_antennas, pairs=())


def random_network(
    n_antennas: int, alpha_p: int, rng: np.random.Generator
) -> ComparatorNetwork:
    """
    Draw ``alpha_p`` distinct pairs uniformly without replacement.

    Raises:
        InvalidInputError: if alpha_p is negative or exceeds the fully
            connected count
    """
    candidates = all_pairs(n_antennas)
    if alpha_p < 0 or alpha_p > len(candidates):
        raise InvalidInputError(
            f"alpha_p={alpha_p} outside [0, {len(candidates)}] for {n_antennas} antennas"
        )
    chosen = rng.choice(len(candidates), size=alpha_p, replace=False)
    return ComparatorNetwork(
        n_antennas=n_antennas, pairs=tuple(candidates[int(c)] for c in chosen)
    )


def build_b_prime(net: ComparatorNetwork) -> np.ndarray:
    """Comparator matrix B' of shape (alpha, 2N_r), rows of unit norm."""
    b_prime = np.zeros((net.alpha, 2 * net.n_antennas))
    for row, (i, j) in enumerate(net.pairs):
        b_prime[row, i] = _INV_SQRT2
        b_prime[row, j] = -_INV_SQRT2
    return b_prime


def build_b(net: ComparatorNetwork) -> np.ndarray:
    """Data-phase matrix B = [I; B'] of shape (2N_r + alpha, 2N_r)."""
    return np.vstack([np.eye(2 * net.n_antennas), build_b_prime(net)])


def build_b_eff(net: ComparatorNetwork, tau: int) -> np.ndarray:
    """
    Pilot-phase comparator matrix of shape (tau(2N_r + alpha), 2 tau N_r).

    Columns follow the stacked pilot vector ``[Re vec(Y_p); Im vec(Y_p)]``
    where ``vec`` stacks the tau pilot slots, each holding N_r antennas.
    Comparator rows are ordered comparator-major, slot-minor, and each row
    compares two inputs of the same pilot slot.
    """
    if tau < 1:
        raise InvalidInputError(f"tau must be at least 1, got {tau}")
    n_r = net.n_antennas
    n_inputs = 2 * tau * n_r
    b_eff = np.zeros((n_inputs + tau * net.alpha, n_inputs))
    b_eff[:n_inputs] = np.eye(n_inputs)

    def column(index: int, slot: int) -> int:
        part, antenna = divmod(index, n_r)
        return part * tau * n_r + slot * n_r + antenna

    for row, (i, j) in enumerate(net.pairs):
        for slot in range(tau):
            r = n_inputs + row * tau + slot
            b_eff[r, column(i, slot)] = _INV_SQRT2
            b_eff[r, column(j, slot)] = -_INV_SQRT2
    return b_eff
