"""
Counter-based random streams.

Each Monte Carlo trial owns a Philox generator derived from the master seed
and a spawn key, so trials can run in any order on any number of threads
and still draw the same numbers.
"""

from typing import Tuple

import numpy as np

# Spawn key reserved for ensemble statistics computed once per sweep
ENSEMBLE_KEY: Tuple[int, int] = (0xFFFFFFFF, 0)


def generator_for(master_seed: int, spawn_key: Tuple[int, ...]) -> np.random.Generator:
    """Return a Philox generator for ``(master_seed, spawn_key)``."""
    sequence = np.random.SeedSequence(master_seed, spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(sequence))


def trial_generator(master_seed: int, trial_index: int, stream: int) -> np.random.Generator:
    """
    Generator of one trial.

    Stream 0 draws the channel and anything designed per channel; stream
    ``s + 1`` draws pilot noise, symbols and receiver noise of SNR point ``s``.
    """
    return generator_for(master_seed, (trial_index, stream))
