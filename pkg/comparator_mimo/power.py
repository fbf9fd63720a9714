"""
Receiver power consumption of 1-bit, multi-bit and comparator-network
front ends.

Component figures are in milliwatts. The ADC term is FOM * sampling rate,
computed in watts and converted, so every function returns milliwatts.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

from loguru import logger

from comparator_mimo.domain.system import PowerParams
from comparator_mimo.exceptions import InvalidInputError

_WATTS_TO_MILLIWATTS = 1e3


@dataclass(frozen=True)
class PowerRow:
    """One architecture of the power table."""

    architecture: str
    milliwatts: float
    q_bits: Optional[int] = None
    alpha: Optional[int] = None


def _front_end(n_antennas: int, params: PowerParams) -> float:
    """Local oscillator plus per-antenna LNA, hybrid and two mixers."""
    if n_antennas < 0:
        raise InvalidInputError(f"n_antennas must be non-negative, got {n_antennas}")
    return params.p_lo + n_antennas * (params.p_lna + params.p_h + 2.0 * params.p_m)


def adc_power(q_bits: int, params: PowerParams) -> float:
    """Power of one q-bit ADC sampling at the Nyquist rate, in mW."""
    if q_bits < 1:
        raise InvalidInputError(f"q_bits must be at least 1, got {q_bits}")
    return params.fom * 2**q_bits * params.f_nyquist * _WATTS_TO_MILLIWATTS


def p_one_bit(n_antennas: int, params: Optional[PowerParams] = None) -> float:
    """1-bit receiver; no automatic gain control is needed."""
    params = params or PowerParams()
    return _front_end(n_antennas, params) + 2 * n_antennas * adc_power(1, params)


def p_traditional(n_antennas: int, q_bits: int, params: Optional[PowerParams] = None) -> float:
    """Receiver with q-bit ADCs and an AGC on every real branch."""
    params = params or PowerParams()
    per_branch = params.p_agc + adc_power(q_bits, params)
    return _front_end(n_antennas, params) + 2 * n_antennas * per_branch


def p_comparator_network(
    n_antennas: int, alpha: int, params: Optional[PowerParams] = None
) -> float:
    """1-bit receiver with ``alpha`` additional comparators."""
    if alpha < 0:
        raise InvalidInputError(f"alpha must be non-negative, got {alpha}")
    params = params or PowerParams()
    return _front_end(n_antennas, params) + (2 * n_antennas + alpha) * adc_power(1, params)


def power_table(
    n_antennas: int = 16,
    alpha: int = 32,
    q_bits: Sequence[int] = tuple(range(2, 11)),
    params: Optional[PowerParams] = None,
) -> List[PowerRow]:
    """1-bit, comparator-network and q-bit receivers side by side."""
    params = params or PowerParams()
    rows = [
        PowerRow(architecture="one_bit", milliwatts=p_one_bit(n_antennas, params)),
        PowerRow(
            architecture="comparator_network",
            milliwatts=p_comparator_network(n_antennas, alpha, params),
            alpha=alpha,
        ),
    ]
    rows.extend(
        PowerRow(
            architecture="traditional",
            milliwatts=p_traditional(n_antennas, q, params),
            q_bits=q,
        )
        for q in q_bits
    )
    logger.debug(f"Power table for N_r={n_antennas}: {len(rows)} architectures")
    return rows
