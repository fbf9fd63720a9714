"""Sweep scenarios and their reports."""

import hashlib
import json
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from comparator_mimo.config import (
    DEFAULT_CELL_RADIUS,
    DEFAULT_PATH_LOSS_EXPONENT,
    DEFAULT_REFERENCE_DISTANCE,
    DESK_CHANNELS,
    DESK_NOISE,
    PUBLISHED_SCALE,
)
from comparator_mimo.domain.system import ChannelMode, LargeScaleProfile, SystemConfig
from comparator_mimo.exceptions import ConfigurationError, InvalidInputError


class NetworkMode(str, Enum):
    NONE = "none"
    RANDOM = "random"
    GREEDY = "greedy"
    SEQ_SINR = "seq_sinr"
    FULL = "full"


class CsiMode(str, Enum):
    PERFECT = "perfect"
    ESTIMATED = "estimated"
    OUTDATED_LAMBDA = "outdated_lambda"


class DetectorMode(str, Enum):
    LMMSE = "lmmse"
    ROBUST = "robust"
    UNQUANTIZED = "unquantized"
    MATCHED = "matched"


class Metric(str, Enum):
    BER = "ber"
    MSE = "mse"
    SYMBOL_MSE = "symbol_mse"
    SUM_RATE = "sum_rate"
    POWER = "power"


class Scenario(BaseModel):
    """
    One Monte Carlo experiment: system, channel, comparator network, CSI,
    detector, metric and SNR grid.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: str = Field("scenario", description="Free-form label")
    n_users: int = Field(..., description="Number of users (N_t)")
    n_antennas: int = Field(..., description="Number of receive antennas (N_r)")
    sigma_x2: float = Field(1.0, description="Per-user symbol power")
    pilot_len: Optional[int] = Field(None, description="Pilot length, defaults to n_users")

    channel_mode: ChannelMode = ChannelMode.RAYLEIGH
    path_loss_exponent: float = DEFAULT_PATH_LOSS_EXPONENT
    reference_distance: float = DEFAULT_REFERENCE_DISTANCE
    cell_radius: float = DEFAULT_CELL_RADIUS

    network_mode: NetworkMode = NetworkMode.NONE
    alpha_p: int = Field(0, description="Comparators for random/greedy/seq_sinr networks")

    csi_mode: CsiMode = CsiMode.PERFECT
    lambda_: Optional[float] = Field(
        None, alias="lambda", description="Reliability of the outdated channel"
    )

    detector_mode: DetectorMode = DetectorMode.LMMSE
    approximate_pilot_correlation: bool = False

    metric: Metric
    snr_grid_db: List[float]
    n_channels: int = DESK_CHANNELS
    n_noise: int = DESK_NOISE
    published_channels: Optional[int] = None
    published_noise: Optional[int] = None
    master_seed: int = 0

    # power-table parameters
    power_alpha: int = 32
    power_q_bits: List[int] = Field(default_factory=lambda: list(range(2, 11)))

    @field_validator("n_users", "n_antennas", "n_channels", "n_noise")
    @classmethod
    def count_must_be_positive(cls, v: int) -> int:
        if v < 1:
            raise InvalidInputError("Dimensions and trial counts must be at least 1")
        return v

    @field_validator("master_seed")
    @classmethod
    def seed_must_fit_64_bits(cls, v: int) -> int:
        if not 0 <= v < 2**64:
            raise InvalidInputError("master_seed must be a non-negative 64-bit integer")
        return v

    @field_validator("snr_grid_db")
    @classmethod
    def grid_must_not_be_empty(cls, v: List[float]) -> List[float]:
        if not v:
            raise InvalidInputError("snr_grid_db must contain at least one value")
        return v

    @model_validator(mode="after")
    def check_combination(self) -> "Scenario":
        alpha_full = self.n_antennas * (2 * self.n_antennas - 1)
        if not 0 <= self.alpha_p <= alpha_full:
            raise ConfigurationError(
                f"alpha_p={self.alpha_p} outside [0, {alpha_full}] for "
                f"{self.n_antennas} antennas"
            )
        if self.pilot_len is not None and self.pilot_len < self.n_users:
            raise ConfigurationError("pilot_len must be >= n_users")
        if self.csi_mode == CsiMode.OUTDATED_LAMBDA:
            if self.lambda_ is None or not 0.0 < self.lambda_ < 1.0:
                raise ConfigurationError("outdated_lambda CSI needs lambda in (0, 1)")
        if self.metric == Metric.MSE and self.csi_mode != CsiMode.ESTIMATED:
            raise ConfigurationError("metric 'mse' requires csi_mode 'estimated'")
        if self.metric == Metric.SUM_RATE:
            if self.csi_mode == CsiMode.OUTDATED_LAMBDA:
                raise ConfigurationError("metric 'sum_rate' needs perfect or estimated CSI")
            if self.detector_mode not in (DetectorMode.LMMSE, DetectorMode.MATCHED):
                raise ConfigurationError("metric 'sum_rate' needs the lmmse or matched detector")
        return self

    @property
    def system(self) -> SystemConfig:
        """System configuration at unit noise; the sweep rescales sigma_n2."""
        return SystemConfig(
            n_users=self.n_users,
            n_antennas=self.n_antennas,
            sigma_x2=self.sigma_x2,
            sigma_n2=1.0,
            pilot_len=self.pilot_len or self.n_users,
        )

    @property
    def profile(self) -> LargeScaleProfile:
        return LargeScaleProfile(
            mode=self.channel_mode,
            path_loss_exponent=self.path_loss_exponent,
            reference_distance=self.reference_distance,
            cell_radius=self.cell_radius,
        )

    def at_published_scale(self) -> "Scenario":
        """Copy with the published trial counts."""
        channels, noise = PUBLISHED_SCALE[self.metric.value]
        return self.model_copy(
            update={
                "n_channels": self.published_channels or channels,
                "n_noise": self.published_noise or noise,
            }
        )

    def scenario_hash(self) -> str:
        """Stable short hash of every field."""
        payload = json.dumps(self.model_dump(mode="json"), sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


class SweepRow(BaseModel):
    """One aggregated metric at one SNR point."""

    snr_db: Optional[float] = None
    metric: str
    value: float
    stderr: float = 0.0
    n_trials: int = 0
    seed: int = 0
    scenario_hash: str = ""

    @field_validator("stderr")
    @classmethod
    def stderr_must_be_nonnegative(cls, v: float) -> float:
        if v < 0:
            raise InvalidInputError("stderr must be non-negative")
        return v


class SweepReport(BaseModel):
    """Rows of a sweep in SNR order."""

    scenario_hash: str
    rows: List[SweepRow] = Field(default_factory=list)
    skipped_trials: int = 0
