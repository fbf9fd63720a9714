"""
Scenario files, Monte Carlo sweeps and presets.
"""

from .presets import list_presets, load_preset
from .scenario_io import (
    dump_scenario,
    emit_csv,
    load_scenario,
    parse_scenario,
    report_to_csv,
    save_scenario,
)
from .sweep import aggregate, run_sweep

__all__ = [
    # Scenario files
    "dump_scenario",
    "load_scenario",
    "parse_scenario",
    "save_scenario",
    # Output
    "emit_csv",
    "report_to_csv",
    # Sweeps
    "aggregate",
    "run_sweep",
    # Presets
    "list_presets",
    "load_preset",
]
