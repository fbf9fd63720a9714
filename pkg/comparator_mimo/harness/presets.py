"""Preset scenarios shipped with the repository, one file per figure."""

from pathlib import Path
from typing import List

from comparator_mimo.config import SCENARIOS_FOLDER
from comparator_mimo.domain.scenario import Scenario
from comparator_mimo.exceptions import InvalidInputError
from comparator_mimo.harness.scenario_io import load_scenario

PRESET_SUFFIX = ".txt"


def list_presets() -> List[str]:
    folder = Path(SCENARIOS_FOLDER)
    if not folder.is_dir():
        return []
    return sorted(p.stem for p in folder.glob(f"*{PRESET_SUFFIX}"))


def preset_path(name: str) -> Path:
    path = Path(SCENARIOS_FOLDER) / f"{name}{PRESET_SUFFIX}"
    if not path.is_file():
        available = ", ".join(list_presets()) or "none"
        raise InvalidInputError(f"Unknown preset '{name}'. Available: {available}")
    return path


def load_preset(name: str) -> Scenario:
    """Load a preset scenario by name, e.g. ``ber_4x16_greedy``."""
    return load_scenario(preset_path(name))
