"""Environment state, parameter and statistics models."""
import enum
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from argextract.errors import DataError
from argextract.models.agent import StateVector
from argextract.models.base import BaseModel

POSITION_RANGE = (-1.2, 0.6)
VELOCITY_RANGE = (-0.07, 0.07)
START_POSITION_RANGE = (-0.6, -0.4)


class InvalidActionError(DataError):
    """Raised for an action label the environment does not know."""
    pass


class Environment(enum.Enum):
    """Environments addressable from the command line."""
    MOUNTAIN_CAR = "mountain_car"
    TAKEAWAY = "takeaway_synth"


class MountainCarAction(enum.Enum):
    """Mountain Car action alphabet."""
    PUSH_LEFT = "push_left"
    NO_PUSH = "no_push"
    PUSH_RIGHT = "push_right"

    @property
    def direction(self) -> int:
        return {"push_left": -1, "no_push": 0, "push_right": 1}[self.value]

    @classmethod
    def parse(cls, label: "str | MountainCarAction") -> "MountainCarAction":
        if isinstance(label, cls):
            return label
        try:
            return cls(label)
        except ValueError:
            raise InvalidActionError(
                f"Unknown Mountain Car action '{label}'. "
                f"Expected one of {[a.value for a in cls]}"
            ) from None


@dataclass(frozen=True)
class MountainCarState(BaseModel):
    position: float
    velocity: float

    def __post_init__(self) -> None:
        if not POSITION_RANGE[0] <= self.position <= POSITION_RANGE[1]:
            raise DataError(f"Position {self.position} outside {POSITION_RANGE}")
        if not VELOCITY_RANGE[0] <= self.velocity <= VELOCITY_RANGE[1]:
            raise DataError(f"Velocity {self.velocity} outside {VELOCITY_RANGE}")

    def to_state_vector(self) -> StateVector:
        return StateVector({"position": self.position, "velocity": self.velocity})


@dataclass(frozen=True)
class MountainCarParams(BaseModel):
    force: float = 0.001
    gravity_scale: float = 0.0025
    goal_position: float = 0.5
    max_steps: int = 999

    def __post_init__(self) -> None:
        if min(self.force, self.gravity_scale, self.goal_position) <= 0 or self.max_steps < 1:
            raise DataError("Mountain Car parameters must all be positive")
        if self.goal_position > POSITION_RANGE[1]:
            raise DataError(f"Goal position {self.goal_position} beyond track end {POSITION_RANGE[1]}")

    @classmethod
    def from_config(cls, config: Any, overrides: Mapping[str, Any] | None = None) -> "MountainCarParams":
        """Build from toolkit configuration plus run-file overrides."""
        settings = {
            "force": config.MC_FORCE,
            "gravity_scale": config.MC_GRAVITY,
            "goal_position": config.MC_GOAL_POSITION,
            "max_steps": config.MC_MAX_STEPS,
        }
        settings.update({k: v for k, v in (overrides or {}).items() if k in settings})
        return cls(**settings)


@dataclass(frozen=True)
class GridSpec(BaseModel):
    position_bins: int = 20
    velocity_bins: int = 20

    def __post_init__(self) -> None:
        if self.position_bins < 1 or self.velocity_bins < 1:
            raise DataError("Grid needs at least one bin per axis")

    @property
    def cells(self) -> int:
        return self.position_bins * self.velocity_bins


@dataclass(frozen=True)
class TakeawayParams(BaseModel):
    field_size: float = 30.0
    open_threshold: float = 0.7
    far_threshold: float = 15.0
    episode_length: int = 10
    takers: int = 3
    keepers: int = 4
    step_scale: float = 1.5
    holder_change_probability: float = 0.1

    def __post_init__(self) -> None:
        if self.takers < 1 or self.keepers < 2:
            raise DataError("Takeaway needs at least one taker and two keepers")
        if self.field_size <= 0 or self.episode_length < 1:
            raise DataError("Takeaway field size and episode length must be positive")
        if not 0.0 <= self.open_threshold <= 1.0:
            raise DataError(f"Openness threshold {self.open_threshold} outside [0, 1]")

    @classmethod
    def from_config(cls, config: Any, overrides: Mapping[str, Any] | None = None) -> "TakeawayParams":
        settings: dict[str, Any] = {
            "field_size": config.TAKEAWAY_FIELD_SIZE,
            "open_threshold": config.TAKEAWAY_OPEN_THRESHOLD,
            "far_threshold": config.TAKEAWAY_FAR_THRESHOLD,
            "episode_length": config.TAKEAWAY_EPISODE_LENGTH,
        }
        settings.update(overrides or {})
        return cls(**settings)


@dataclass(frozen=True)
class TakeawayFeatureState(BaseModel):
    """One field configuration and the features derived from it.

    Keeper and taker indices are 1-based in feature names, matching the
    argument names (TackleBall_1, OpenKeeper_2_3, ...).
    """

    keepers: tuple[tuple[float, float], ...]
    takers: tuple[tuple[float, float], ...]
    holder: int
    features: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name, value in self.features.items():
            if math.isnan(value):
                raise DataError(f"Feature {name} is NaN")
            if name.endswith("_angle") and not 0.0 <= value <= 180.0:
                raise DataError(f"Angle feature {name}={value} outside [0, 180]")
            if name.endswith("_openness") and not 0.0 <= value <= 1.0:
                raise DataError(f"Openness feature {name}={value} outside [0, 1]")
            if "dist" in name and value < 0:
                raise DataError(f"Distance feature {name}={value} is negative")

    def to_state_vector(self) -> StateVector:
        return StateVector(dict(self.features))


@dataclass(frozen=True)
class EpisodeStats(BaseModel):
    episodes: int
    mean_steps: float
    std_steps: float
    mean_wall_time: float
    std_wall_time: float
    success_rate: float
    mean_decision_latency: float | None = None
    std_decision_latency: float | None = None

    def __post_init__(self) -> None:
        if self.episodes < 0:
            raise DataError("Episode count must be non-negative")
        if not 0.0 <= self.success_rate <= 1.0:
            raise DataError(f"Success rate {self.success_rate} outside [0, 1]")

    def deterministic_dict(self) -> dict[str, Any]:
        """Fields that depend only on (inputs, seed), never on the clock."""
        return {
            "episodes": self.episodes,
            "mean_steps": self.mean_steps,
            "std_steps": self.std_steps,
            "success_rate": self.success_rate,
        }

    def timing_dict(self) -> dict[str, Any]:
        return {
            "mean_wall_time": self.mean_wall_time,
            "std_wall_time": self.std_wall_time,
            "mean_decision_latency": self.mean_decision_latency,
            "std_decision_latency": self.std_decision_latency,
        }
