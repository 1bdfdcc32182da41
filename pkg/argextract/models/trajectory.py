"""Trajectory data: time steps grouped into episodes."""
from dataclasses import dataclass, field
from typing import Any, Mapping

from argextract.errors import DataError
from argextract.models.agent import StateVector
from argextract.models.arguments import AgentIndex
from argextract.models.base import BaseModel


class TrajectorySchemaError(DataError):
    """Raised when trajectory data does not match its declared schema."""
    pass


@dataclass(frozen=True)
class TimeStep(BaseModel):
    """Shared observation plus each agent's executed action."""

    state: StateVector
    actions: Mapping[AgentIndex, str]

    def to_dict(self) -> dict[str, Any]:
        return {
            "state": dict(self.state.features),
            "actions": {str(agent): action for agent, action in sorted(self.actions.items())},
        }


@dataclass(frozen=True)
class Episode(BaseModel):
    id: int
    steps: tuple[TimeStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class TrajectorySet(BaseModel):
    """Normalized trajectory data shared by extraction and evaluation."""

    episodes: tuple[Episode, ...] = ()
    feature_names: tuple[str, ...] = ()
    team_size: int = 0
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.validate:
            return
        if self.team_size < 0:
            raise TrajectorySchemaError(f"team_size must be non-negative, got {self.team_size}")
        for episode in self.episodes:
            if episode.id < 0:
                raise TrajectorySchemaError(f"Episode id must be non-negative, got {episode.id}")
            for index, step in enumerate(episode.steps):
                if not step.actions:
                    raise TrajectorySchemaError(
                        f"Episode {episode.id} step {index} has no actions"
                    )
                missing = [name for name in self.feature_names if name not in step.state]
                if missing:
                    raise TrajectorySchemaError(
                        f"Episode {episode.id} step {index} is missing feature(s) {missing}"
                    )
                bad_agents = [a for a in step.actions if not 0 <= a < self.team_size]
                if bad_agents:
                    raise TrajectorySchemaError(
                        f"Episode {episode.id} step {index} has action(s) for agent(s) "
                        f"{bad_agents} outside team of {self.team_size}"
                    )

    @property
    def step_count(self) -> int:
        return sum(len(episode) for episode in self.episodes)

    def __len__(self) -> int:
        return len(self.episodes)

    def action_labels(self) -> set[str]:
        """Every action label appearing in the data."""
        return {
            action
            for episode in self.episodes
            for step in episode.steps
            for action in step.actions.values()
        }

    def with_episodes(self, episodes: tuple[Episode, ...]) -> "TrajectorySet":
        return TrajectorySet(
            episodes=episodes,
            feature_names=self.feature_names,
            team_size=self.team_size,
            validate=False,
        )

    def split_holdout(self, fraction: float) -> tuple["TrajectorySet", "TrajectorySet"]:
        """Split by episode order: the last `fraction` of episodes is held out."""
        if not 0.0 <= fraction < 1.0:
            raise ValueError(f"Holdout fraction must be in [0, 1), got {fraction}")
        held = int(round(len(self.episodes) * fraction))
        cut = len(self.episodes) - held
        return self.with_episodes(self.episodes[:cut]), self.with_episodes(self.episodes[cut:])

    def to_dict(self) -> dict[str, Any]:
        return {
            "team_size": self.team_size,
            "feature_names": list(self.feature_names),
            "episodes": [episode.to_dict() for episode in self.episodes],
        }
