"""Core configuration records shared by every simulation module."""

from enum import Enum
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from comparator_mimo.config import (
    DEFAULT_CELL_RADIUS,
    DEFAULT_PATH_LOSS_EXPONENT,
    DEFAULT_REFERENCE_DISTANCE,
)
from comparator_mimo.exceptions import ConfigurationError, InvalidInputError


class SystemConfig(BaseModel):
    """Dimensions and powers of the multiuser uplink.

    ``sigma_x2`` is the per-user complex symbol power, split evenly between
    the real and imaginary parts. ``sigma_n2`` is the complex noise variance.
    """

    model_config = ConfigDict(frozen=True)

    n_users: int = Field(..., description="Number of single-antenna users (N_t)")
    n_antennas: int = Field(..., description="Number of receive antennas (N_r)")
    sigma_x2: float = Field(1.0, description="Per-user symbol power")
    sigma_n2: float = Field(1.0, description="Complex noise variance")
    pilot_len: int = Field(..., description="Pilot sequence length (tau)")

    @field_validator("n_users", "n_antennas", "pilot_len")
    @classmethod
    def dimension_must_be_positive(cls, v: int) -> int:
        if v < 1:
            raise InvalidInputError("Dimensions must be at least 1")
        return v

    @field_validator("sigma_x2", "sigma_n2")
    @classmethod
    def power_must_be_positive(cls, v: float) -> float:
        if not v > 0 or v == float("inf"):
            raise InvalidInputError("Powers must be finite and strictly positive")
        return v

    @model_validator(mode="after")
    def pilot_must_cover_users(self) -> "SystemConfig":
        if self.pilot_len < self.n_users:
            raise ConfigurationError(
                f"pilot_len ({self.pilot_len}) must be >= n_users ({self.n_users})"
            )
        return self

    @property
    def n_real_inputs(self) -> int:
        return 2 * self.n_antennas

    @property
    def n_real_streams(self) -> int:
        return 2 * self.n_users

    @property
    def alpha_full(self) -> int:
        return self.n_antennas * (2 * self.n_antennas - 1)

    def with_noise(self, sigma_n2: float) -> "SystemConfig":
        """Return a copy with a different noise variance."""
        return self.model_copy(update={"sigma_n2": sigma_n2})


class ComparatorNetwork(BaseModel):
    """Ordered list of antenna-pair comparisons.

    Indices address the ``2 * n_antennas`` real inputs: ``0 .. N_r-1`` are the
    real parts and ``N_r .. 2N_r-1`` the imaginary parts.
    """

    model_config = ConfigDict(frozen=True)

    n_antennas: int
    pairs: Tuple[Tuple[int, int], ...] = ()

    @field_validator("n_antennas")
    @classmethod
    def antennas_must_be_positive(cls, v: int) -> int:
        if v < 1:
            raise InvalidInputError("n_antennas must be at least 1")
        return v

    @model_validator(mode="after")
    def pairs_must_be_valid(self) -> "ComparatorNetwork":
        n_inputs = 2 * self.n_antennas
        seen = set()
        for i, j in self.pairs:
            if not 0 <= i < j < n_inputs:
                raise InvalidInputError(
                    f"Pair ({i}, {j}) is invalid for {n_inputs} real inputs"
                )
            if (i, j) in seen:
                raise InvalidInputError(f"Duplicate comparator pair ({i}, {j})")
            seen.add((i, j))
        return self

    @property
    def alpha(self) -> int:
        return len(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


class ChannelMode(str, Enum):
    RAYLEIGH = "rayleigh"
    LOG_DISTANCE = "log_distance"


class LargeScaleProfile(BaseModel):
    """Large-scale fading setup: users dropped uniformly on a disc."""

    model_config = ConfigDict(frozen=True)

    mode: ChannelMode = ChannelMode.RAYLEIGH
    path_loss_exponent: float = Field(
        DEFAULT_PATH_LOSS_EXPONENT, description="Log-distance exponent n_PL"
    )
    reference_distance: float = Field(
        DEFAULT_REFERENCE_DISTANCE, description="Reference distance d_0 in meters"
    )
    cell_radius: float = Field(
        DEFAULT_CELL_RADIUS, description="Radius of the user disc in meters"
    )

    @field_validator("path_loss_exponent", "reference_distance", "cell_radius")
    @classmethod
    def must_be_positive(cls, v: float) -> float:
        if not v > 0:
            raise InvalidInputError("Path-loss parameters must be strictly positive")
        return v


class PowerParams(BaseModel):
    """Component power figures of the receiver front end.

    Milliwatt fields are in mW, ``fom`` is in joules per conversion step and
    ``f_nyquist`` in hertz.
    """

    model_config = ConfigDict(frozen=True)

    p_lo: float = 22.5
    p_lna: float = 5.4
    p_h: float = 3.0
    p_m: float = 0.3
    p_agc: float = 2.0
    fom: float = 15e-15
    f_nyquist: float = 2.5e9

    @field_validator("p_lo", "p_lna", "p_h", "p_m", "p_agc", "fom", "f_nyquist")
    @classmethod
    def must_be_positive(cls, v: float) -> float:
        if not v > 0:
            raise InvalidInputError("Power parameters must be strictly positive")
        return v
