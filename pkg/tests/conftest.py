"""
Pytest configuration file.

This file ensures that the project root is in the Python path,
allowing tests to import from the api and comparator_mimo packages,
and provides the small systems most suites share.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add the project root to the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from comparator_mimo.domain.system import SystemConfig  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded Philox generator."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(1234)))


@pytest.fixture
def small_cfg() -> SystemConfig:
    """2 users, 4 antennas, tau = 2, 10 dB."""
    return SystemConfig(n_users=2, n_antennas=4, sigma_x2=1.0, sigma_n2=0.1, pilot_len=2)


@pytest.fixture
def tiny_cfg() -> SystemConfig:
    """1 user, 2 antennas, for exhaustive checks."""
    return SystemConfig(n_users=1, n_antennas=2, sigma_x2=1.0, sigma_n2=0.1, pilot_len=1)
