"""Action arguments, argument catalogs and value assignments."""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping

from argextract.errors import DataError
from argextract.models.argumentation import ArgumentId
from argextract.models.base import BaseModel

AgentIndex = int
ParamValue = float | int | str


class CatalogError(DataError):
    """Raised when an argument catalog violates its invariants."""
    pass


class InvalidValuesError(DataError):
    """Raised when a value assignment is not a strict valuation."""
    pass


class MissingValueError(DataError):
    """Raised when an argument has no value in a value assignment."""

    def __init__(self, missing: Iterable[ArgumentId]):
        self.missing = sorted(missing)
        preview = ", ".join(self.missing[:5])
        more = f" (+{len(self.missing) - 5} more)" if len(self.missing) > 5 else ""
        super().__init__(f"No value for argument(s): {preview}{more}")


@dataclass(frozen=True)
class ConditionSpec(BaseModel):
    """A predicate reference: a registered condition kind plus its parameters."""

    kind: str
    params: Mapping[str, ParamValue] = field(default_factory=dict)

    def param_key(self) -> tuple[str, tuple[tuple[str, ParamValue], ...]]:
        """Hashable identity of the condition."""
        return self.kind, tuple(sorted(self.params.items()))

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "params": dict(sorted(self.params.items()))}

    @classmethod
    def from_dict(cls, document: Mapping[str, Any]) -> "ConditionSpec":
        return cls(kind=str(document["kind"]), params=dict(document.get("params", {})))


@dataclass(frozen=True)
class ActionArgument(BaseModel):
    """'If condition holds then agent `target` should do `action`'."""

    id: ArgumentId
    target: AgentIndex
    action: str
    condition: ConditionSpec

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "target": self.target,
            "action": self.action,
            "condition": self.condition.to_dict(),
        }

    @classmethod
    def from_dict(cls, document: Mapping[str, Any]) -> "ActionArgument":
        return cls(
            id=str(document["id"]),
            target=int(document["target"]),
            action=str(document["action"]),
            condition=ConditionSpec.from_dict(document["condition"]),
        )


@dataclass(frozen=True)
class ArgumentCatalog(BaseModel):
    """Ordered argument list; list order is the canonical tie-break order."""

    arguments: tuple[ActionArgument, ...]
    action_alphabet: frozenset[str]
    team_size: int
    memo: dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.team_size < 1:
            raise CatalogError(f"team_size must be at least 1, got {self.team_size}")
        seen: set[ArgumentId] = set()
        for argument in self.arguments:
            if not argument.id:
                raise CatalogError("Argument ids must be non-empty")
            if argument.id in seen:
                raise CatalogError(f"Duplicate argument id '{argument.id}'")
            seen.add(argument.id)
            if not 0 <= argument.target < self.team_size:
                raise CatalogError(
                    f"Argument '{argument.id}' targets agent {argument.target} "
                    f"but the team has {self.team_size} member(s)"
                )
            if argument.action not in self.action_alphabet:
                raise CatalogError(
                    f"Argument '{argument.id}' recommends '{argument.action}' "
                    f"which is not in the action alphabet"
                )

    def __len__(self) -> int:
        return len(self.arguments)

    @cached_property
    def ids(self) -> tuple[ArgumentId, ...]:
        return tuple(argument.id for argument in self.arguments)

    @cached_property
    def by_id(self) -> dict[ArgumentId, ActionArgument]:
        return {argument.id: argument for argument in self.arguments}

    @cached_property
    def position(self) -> dict[ArgumentId, int]:
        return {argument.id: k for k, argument in enumerate(self.arguments)}

    def primary(self, target: AgentIndex) -> tuple[ActionArgument, ...]:
        """Arguments recommending actions to `target`, in catalog order."""
        return tuple(a for a in self.arguments if a.target == target)

    def to_dict(self) -> dict[str, Any]:
        return {
            "team_size": self.team_size,
            "actions": sorted(self.action_alphabet),
            "arguments": [argument.to_dict() for argument in self.arguments],
        }

    @classmethod
    def from_dict(cls, document: Mapping[str, Any]) -> "ArgumentCatalog":
        try:
            return cls(
                arguments=tuple(ActionArgument.from_dict(a) for a in document["arguments"]),
                action_alphabet=frozenset(document["actions"]),
                team_size=int(document["team_size"]),
            )
        except KeyError as e:
            raise CatalogError(f"Catalog document is missing key {e}") from e


@dataclass(frozen=True)
class ValueAssignment(BaseModel):
    """Distinct integer values per argument; higher value is preferred."""

    values: Mapping[ArgumentId, int]

    def __post_init__(self) -> None:
        seen: dict[int, ArgumentId] = {}
        for argument_id, value in self.values.items():
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidValuesError(f"Value of '{argument_id}' must be an integer, got {value!r}")
            if value in seen:
                raise InvalidValuesError(
                    f"Arguments '{seen[value]}' and '{argument_id}' share value {value}"
                )
            seen[value] = argument_id

    def __getitem__(self, argument_id: ArgumentId) -> int:
        return self.values[argument_id]

    def __contains__(self, argument_id: object) -> bool:
        return argument_id in self.values

    def __len__(self) -> int:
        return len(self.values)

    def require(self, argument_ids: Iterable[ArgumentId]) -> None:
        """Raise MissingValueError unless every id has a value."""
        missing = [a for a in argument_ids if a not in self.values]
        if missing:
            raise MissingValueError(missing)

    def ranked(self) -> list[ArgumentId]:
        """Argument ids by descending value."""
        return sorted(self.values, key=self.values.__getitem__, reverse=True)

    def to_dict(self) -> dict[str, Any]:
        return {"values": dict(sorted(self.values.items()))}
