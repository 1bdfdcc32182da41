"""Abstract argumentation frameworks and extensions."""
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Iterator

from argextract.errors import DataError
from argextract.models.base import BaseModel

ArgumentId = str
Attack = tuple[ArgumentId, ArgumentId]


class UnknownArgumentError(DataError):
    """Raised when an argument is not a member of the framework."""

    def __init__(self, unknown: Iterable[ArgumentId]):
        self.unknown = sorted(unknown)
        super().__init__(f"Unknown argument(s): {', '.join(self.unknown)}")


@dataclass(frozen=True)
class ArgumentationFramework(BaseModel):
    """A finite argument set with a binary attack relation."""

    arguments: frozenset[ArgumentId]
    attacks: frozenset[Attack]

    def __post_init__(self) -> None:
        empty = [a for a in self.arguments if not a]
        if empty:
            raise DataError("Argument ids must be non-empty strings")
        endpoints = {a for attack in self.attacks for a in attack}
        unknown = endpoints - self.arguments
        if unknown:
            raise UnknownArgumentError(unknown)

    @classmethod
    def build(
        cls,
        arguments: Iterable[ArgumentId],
        attacks: Iterable[Attack] = (),
    ) -> "ArgumentationFramework":
        """Create a framework from any iterables of ids and (attacker, attacked) pairs."""
        return cls(frozenset(arguments), frozenset((a, b) for a, b in attacks))

    @cached_property
    def attackers(self) -> dict[ArgumentId, frozenset[ArgumentId]]:
        """Map each argument to the arguments attacking it."""
        result: dict[ArgumentId, set[ArgumentId]] = {a: set() for a in self.arguments}
        for attacker, attacked in self.attacks:
            result[attacked].add(attacker)
        return {a: frozenset(s) for a, s in result.items()}

    @cached_property
    def targets(self) -> dict[ArgumentId, frozenset[ArgumentId]]:
        """Map each argument to the arguments it attacks."""
        result: dict[ArgumentId, set[ArgumentId]] = {a: set() for a in self.arguments}
        for attacker, attacked in self.attacks:
            result[attacker].add(attacked)
        return {a: frozenset(s) for a, s in result.items()}

    def sorted_arguments(self) -> list[ArgumentId]:
        return sorted(self.arguments)

    def to_dict(self) -> dict[str, Any]:
        """Debug document with lexicographically sorted arguments and attacks."""
        return {
            "arguments": sorted(self.arguments),
            "attacks": [list(attack) for attack in sorted(self.attacks)],
        }


@dataclass(frozen=True)
class ExtensionSet(BaseModel):
    """A set of arguments computed against some framework."""

    members: frozenset[ArgumentId] = frozenset()

    @classmethod
    def of(cls, *members: ArgumentId) -> "ExtensionSet":
        return cls(frozenset(members))

    def __contains__(self, argument: object) -> bool:
        return argument in self.members

    def __iter__(self) -> Iterator[ArgumentId]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def issubset(self, other: "ExtensionSet") -> bool:
        return self.members <= other.members

    def sorted_members(self) -> list[ArgumentId]:
        return sorted(self.members)
