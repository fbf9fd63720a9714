from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


# Power models
class PowerRowResponse(BaseModel):
    architecture: str = Field(..., description="one_bit, comparator_network or traditional")
    milliwatts: float
    q_bits: Optional[int] = Field(None, description="ADC resolution of traditional rows")
    alpha: Optional[int] = Field(None, description="Comparators of the network row")


class PowerTableResponse(BaseModel):
    n_antennas: int
    rows: List[PowerRowResponse]


# Sweep models
class SweepRequest(BaseModel):
    preset: Optional[str] = Field(None, description="Name of a preset scenario")
    scenario: Optional[Dict[str, Any]] = Field(
        None, description="Scenario fields, as in a scenario file"
    )
    overrides: Dict[str, Any] = Field(
        default_factory=dict, description="Fields replacing those of the preset"
    )
    threads: int = Field(1, description="Worker threads", ge=1, le=64)


class SweepRowResponse(BaseModel):
    snr_db: Optional[float]
    metric: str
    value: float
    stderr: float
    n_trials: int
    seed: int
    scenario_hash: str


class SweepResponse(BaseModel):
    name: str
    scenario_hash: str
    skipped_trials: int
    rows: List[SweepRowResponse]
    csv: str = Field(..., description="The rows in the CLI's CSV format")


class PresetListResponse(BaseModel):
    presets: List[str]


class ConfigResponse(BaseModel):
    version: str
    threads: int
    gamma_exact_limit: int
