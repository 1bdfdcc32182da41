"""Argument preference graphs, orderings and extraction settings."""
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

import networkx as nx

from argextract.errors import DataError
from argextract.models.argumentation import ArgumentId
from argextract.models.base import BaseModel

Edge = tuple[ArgumentId, ArgumentId]


class DuplicateIdError(DataError):
    """Raised when an ordering lists an argument more than once."""
    pass


@dataclass(frozen=True)
class ArgumentPreferenceGraph(BaseModel):
    """Weighted digraph of pairwise argument preferences.

    An absent edge has weight 0; zero weights are never stored.
    """

    nodes: frozenset[ArgumentId]
    weights: Mapping[Edge, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for (source, target), weight in self.weights.items():
            if source == target:
                raise DataError(f"Self-edge on '{source}' in preference graph")
            if source not in self.nodes or target not in self.nodes:
                raise DataError(f"Edge {source}->{target} leaves the argument catalog")
            if weight <= 0:
                raise DataError(f"Edge {source}->{target} has non-positive weight {weight}")

    @classmethod
    def empty(cls, nodes: Iterable[ArgumentId]) -> "ArgumentPreferenceGraph":
        return cls(frozenset(nodes), {})

    def weight(self, source: ArgumentId, target: ArgumentId) -> int:
        return self.weights.get((source, target), 0)

    def edges(self) -> list[tuple[ArgumentId, ArgumentId, int]]:
        """(from, to, weight) triples in lexicographic (from, to) order."""
        return [(s, t, self.weights[(s, t)]) for s, t in sorted(self.weights)]

    @property
    def edge_count(self) -> int:
        return len(self.weights)

    def max_weight(self) -> int:
        return max(self.weights.values(), default=0)

    def merge(self, other: "ArgumentPreferenceGraph") -> "ArgumentPreferenceGraph":
        """Pointwise weight sum; partial graphs from disjoint batches combine to the whole."""
        if self.nodes != other.nodes:
            raise DataError("Cannot merge preference graphs over different argument sets")
        merged = dict(self.weights)
        for edge, weight in other.weights.items():
            merged[edge] = merged.get(edge, 0) + weight
        return ArgumentPreferenceGraph(self.nodes, merged)

    def to_digraph(self) -> nx.DiGraph:
        """networkx view with nodes and edges inserted in lexicographic order."""
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(self.nodes))
        graph.add_weighted_edges_from(self.edges())
        return graph

    def to_dict(self) -> dict[str, Any]:
        return {
            "nodes": sorted(self.nodes),
            "edges": [[s, t, w] for s, t, w in self.edges()],
        }


@dataclass(frozen=True)
class Ordering(BaseModel):
    """Argument ids, most preferred first."""

    ranked: tuple[ArgumentId, ...]

    def __post_init__(self) -> None:
        seen: set[ArgumentId] = set()
        for argument_id in self.ranked:
            if argument_id in seen:
                raise DuplicateIdError(f"Argument '{argument_id}' appears twice in ordering")
            seen.add(argument_id)

    def __len__(self) -> int:
        return len(self.ranked)

    def rank(self) -> dict[ArgumentId, int]:
        return {argument_id: k for k, argument_id in enumerate(self.ranked)}

    def reversed(self) -> "Ordering":
        return Ordering(tuple(reversed(self.ranked)))


@dataclass(frozen=True)
class ExtractionConfig(BaseModel):
    """Pruning threshold p plus the user's default ordering.

    A `default_ordering` of None means catalog order.
    """

    pruning_threshold: int = 1
    default_ordering: Ordering | None = None
    joint: bool = False

    def __post_init__(self) -> None:
        if self.pruning_threshold < 0:
            raise DataError(f"Pruning threshold must be non-negative, got {self.pruning_threshold}")

    def to_dict(self) -> dict[str, Any]:
        document: dict[str, Any] = {"pruning_threshold": self.pruning_threshold}
        if self.default_ordering is not None:
            document["default_ordering"] = list(self.default_ordering.ranked)
        if self.joint:
            document["joint"] = True
        return document

    @classmethod
    def from_dict(cls, document: Mapping[str, Any]) -> "ExtractionConfig":
        default = document.get("default_ordering")
        return cls(
            pruning_threshold=int(document.get("pruning_threshold", 1)),
            default_ordering=Ordering(tuple(default)) if default is not None else None,
            joint=bool(document.get("joint", False)),
        )


@dataclass(frozen=True)
class AcyclicResult(BaseModel):
    """A pruned, cycle-free preference graph and the edges removed to get there."""

    dag: ArgumentPreferenceGraph
    removed: tuple[tuple[ArgumentId, ArgumentId, int], ...] = ()


@dataclass(frozen=True)
class ExtractionResult(BaseModel):
    """Output of one ordering extraction with its diagnostics.

    For a team member `ordering` is the merged team ordering its model uses;
    `extracted` keeps its own topological order from before the merge.
    """

    target: int | None
    ordering: Ordering
    apg: ArgumentPreferenceGraph
    removed: tuple[tuple[ArgumentId, ArgumentId, int], ...] = ()
    extracted: Ordering | None = None

    def to_dict(self) -> dict[str, Any]:
        total = len(self.ordering)
        values = {a: total - k for k, a in enumerate(self.ordering.ranked)}
        document: dict[str, Any] = {
            "ranked": list(self.ordering.ranked),
            "values": dict(sorted(values.items())),
            "cycle_edges_removed": [list(edge) for edge in self.removed],
        }
        if self.extracted is not None and self.extracted != self.ordering:
            document["extracted"] = list(self.extracted.ranked)
        return document
