"""Agent and team models built on value-based argumentation."""
import enum
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

from argextract.models.arguments import (
    AgentIndex,
    ArgumentCatalog,
    CatalogError,
    ValueAssignment,
)
from argextract.models.base import BaseModel


@dataclass(frozen=True)
class StateVector(BaseModel):
    """Named real-valued features of one observation."""

    features: Mapping[str, float] = field(default_factory=dict)

    def __getitem__(self, name: str) -> float:
        return self.features[name]

    def __contains__(self, name: object) -> bool:
        return name in self.features

    def __iter__(self) -> Iterator[str]:
        return iter(self.features)

    def get(self, name: str, default: float | None = None) -> float | None:
        return self.features.get(name, default)


@dataclass(frozen=True)
class AAAgentModel(BaseModel):
    """An argumentation-based agent: shared catalog, its own valuation, its own index."""

    catalog: ArgumentCatalog
    values: ValueAssignment
    self_index: AgentIndex
    default_action: str

    def __post_init__(self) -> None:
        self.values.require(self.catalog.ids)
        if self.default_action not in self.catalog.action_alphabet:
            raise CatalogError(
                f"Default action '{self.default_action}' is not in the action alphabet"
            )
        if not 0 <= self.self_index < self.catalog.team_size:
            raise CatalogError(
                f"Agent index {self.self_index} outside team of {self.catalog.team_size}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "self": self.self_index,
            "default_action": self.default_action,
            "values": dict(sorted(self.values.values.items())),
        }


class TeamMode(enum.Enum):
    """How a team derives joint actions."""
    DECENTRALIZED = "decentralized"
    CENTRALIZED = "centralized"


@dataclass(frozen=True)
class TeamModel(BaseModel):
    """One member per agent index; centralized teams share a single valuation."""

    catalog: ArgumentCatalog
    members: tuple[AAAgentModel, ...]
    mode: TeamMode = TeamMode.DECENTRALIZED
    shared_values: ValueAssignment | None = None

    def __post_init__(self) -> None:
        if len(self.members) != self.catalog.team_size:
            raise CatalogError(
                f"Team has {len(self.members)} member(s) but the catalog "
                f"declares team_size {self.catalog.team_size}"
            )
        for index, member in enumerate(self.members):
            if member.self_index != index:
                raise CatalogError(f"Member {index} has self index {member.self_index}")
            if member.catalog.ids != self.catalog.ids:
                raise CatalogError(f"Member {index} uses a different argument catalog")
        if self.mode is TeamMode.CENTRALIZED:
            if self.shared_values is None:
                raise CatalogError("A centralized team needs shared values")
            self.shared_values.require(self.catalog.ids)

    @classmethod
    def single(cls, agent: AAAgentModel) -> "TeamModel":
        """Wrap a one-agent catalog's model as a team."""
        return cls(catalog=agent.catalog, members=(agent,))

    @property
    def size(self) -> int:
        return len(self.members)

    def to_dict(self) -> dict[str, Any]:
        document: dict[str, Any] = {
            "mode": self.mode.value,
            "members": [member.to_dict() for member in self.members],
        }
        if self.shared_values is not None:
            document["shared_values"] = dict(sorted(self.shared_values.values.items()))
        return document
