"""
Utility functions for comparator-mimo.
"""

from .linalg import solve_symmetric, symmetrize
from .rng import ENSEMBLE_KEY, generator_for, trial_generator
from .stats import SampleSummary, summarize

__all__ = [
    # Linear algebra
    "solve_symmetric",
    "symmetrize",
    # Random streams
    "ENSEMBLE_KEY",
    "generator_for",
    "trial_generator",
    # Statistics
    "SampleSummary",
    "summarize",
]
