"""Value-ordering extraction from trajectories.

Extraction builds an argument preference graph (APG) from (state, action)
pairs, prunes it to a DAG, and sorts it topologically. Ties are broken by a
user-supplied default ordering.
"""
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from functools import reduce
from typing import Mapping, Sequence

import networkx as nx

from argextract.config import get_config
from argextract.errors import DataError, InvariantViolation
from argextract.models.agent import AAAgentModel, TeamMode, TeamModel
from argextract.models.argumentation import ArgumentId, UnknownArgumentError
from argextract.models.arguments import AgentIndex, ArgumentCatalog, ValueAssignment
from argextract.models.extraction import (
    AcyclicResult,
    ArgumentPreferenceGraph,
    ExtractionConfig,
    ExtractionResult,
    Ordering,
)
from argextract.models.trajectory import TrajectorySet
from argextract.services.agents import applicable_arguments
from argextract.services.trajectories import iterate_batches, iterate_joint, iterate_pairs

logger = logging.getLogger(__name__)


class MissingNodeError(DataError):
    """Raised when a default ordering does not cover every argument."""

    def __init__(self, missing: Sequence[ArgumentId]):
        self.missing = sorted(missing)
        preview = ", ".join(self.missing[:5])
        more = f" (+{len(self.missing) - 5} more)" if len(self.missing) > 5 else ""
        super().__init__(f"Default ordering does not rank: {preview}{more}")


class CycleDetectedError(InvariantViolation):
    """Raised when a graph handed to the topological sort has a cycle."""
    pass


def build_apg(
    trajectories: TrajectorySet,
    catalog: ArgumentCatalog,
    target: AgentIndex,
) -> ArgumentPreferenceGraph:
    """Count, per argument pair, the steps where one agreed with the logged action and the other did not.

    Only arguments targeting `target` take part: on every step the applicable
    arguments recommending the executed action gain an edge to each applicable
    argument recommending something else.
    """
    weights: Counter = Counter()
    for state, action in iterate_pairs(trajectories, target):
        applicable = [a for a in applicable_arguments(catalog, state) if a.target == target]
        relevant = [a.id for a in applicable if a.action == action]
        irrelevant = [a.id for a in applicable if a.action != action]
        for winner in relevant:
            for loser in irrelevant:
                weights[(winner, loser)] += 1
    return ArgumentPreferenceGraph(frozenset(catalog.ids), dict(weights))


def build_joint_apg(trajectories: TrajectorySet, catalog: ArgumentCatalog) -> ArgumentPreferenceGraph:
    """APG over (state, joint action) pairs.

    An argument is relevant on a step iff the logged action of its target
    equals its recommendation.
    """
    weights: Counter = Counter()
    for state, actions in iterate_joint(trajectories):
        applicable = applicable_arguments(catalog, state)
        relevant = [a.id for a in applicable if actions[a.target] == a.action]
        irrelevant = [a.id for a in applicable if actions[a.target] != a.action]
        for winner in relevant:
            for loser in irrelevant:
                weights[(winner, loser)] += 1
    return ArgumentPreferenceGraph(frozenset(catalog.ids), dict(weights))


def prune(apg: ArgumentPreferenceGraph, p: int) -> ArgumentPreferenceGraph:
    """Keep only edges of weight at least `p`."""
    if p < 0:
        raise DataError(f"Pruning threshold must be non-negative, got {p}")
    return ArgumentPreferenceGraph(
        apg.nodes, {edge: w for edge, w in apg.weights.items() if w >= p}
    )


def convert_to_acyclic(apg: ArgumentPreferenceGraph, p: int) -> AcyclicResult:
    """Prune, then break remaining cycles one edge at a time.

    The cycle handled next is the first one depth-first search meets in
    lexicographic node order. Its lightest edge is removed; among equally
    light edges the lexicographically largest (from, to) pair goes.
    """
    pruned = prune(apg, p)
    graph = pruned.to_digraph()
    removed: list[tuple[ArgumentId, ArgumentId, int]] = []

    while True:
        try:
            cycle = nx.find_cycle(graph)
        except nx.NetworkXNoCycle:
            break
        lightest = min(graph.edges[u, v]["weight"] for u, v, *_ in cycle)
        source, target = max((u, v) for u, v, *_ in cycle if graph.edges[u, v]["weight"] == lightest)
        graph.remove_edge(source, target)
        removed.append((source, target, lightest))
        logger.info(f"Removed cycle edge {source}->{target} (weight {lightest})")

    if removed:
        logger.warning(f"Removed {len(removed)} edge(s) to make the preference graph acyclic")

    kept = {edge: w for edge, w in pruned.weights.items() if graph.has_edge(*edge)}
    return AcyclicResult(ArgumentPreferenceGraph(pruned.nodes, kept), tuple(removed))


def topological_sort_with_default(dag: ArgumentPreferenceGraph, default_ordering: Ordering) -> Ordering:
    """Kahn's algorithm taking the best-ranked ready node by `default_ordering`.

    Raises:
        MissingNodeError: If `default_ordering` leaves out a node
        CycleDetectedError: If the graph is not acyclic
    """
    rank = default_ordering.rank()
    missing = [node for node in dag.nodes if node not in rank]
    if missing:
        raise MissingNodeError(missing)
    try:
        ranked = tuple(nx.lexicographical_topological_sort(dag.to_digraph(), key=rank.__getitem__))
    except nx.NetworkXUnfeasible as e:
        raise CycleDetectedError("Preference graph still contains a cycle") from e
    return Ordering(ranked)


def ordering_to_values(ordering: Ordering) -> ValueAssignment:
    """Rank k of N becomes value N - k, so the first argument gets N and the last 1."""
    total = len(ordering)
    return ValueAssignment({argument_id: total - k for k, argument_id in enumerate(ordering.ranked)})


def resolve_default_ordering(config: ExtractionConfig, catalog: ArgumentCatalog) -> Ordering:
    """The configured default ordering, or catalog order when none is set.

    Raises:
        UnknownArgumentError: If the ordering names arguments outside the catalog
        MissingNodeError: If it leaves catalog arguments out
    """
    if config.default_ordering is None:
        return Ordering(catalog.ids)
    listed = set(config.default_ordering.ranked)
    unknown = listed - set(catalog.ids)
    if unknown:
        raise UnknownArgumentError(unknown)
    missing = [a for a in catalog.ids if a not in listed]
    if missing:
        raise MissingNodeError(missing)
    return config.default_ordering


def order_graph(
    apg: ArgumentPreferenceGraph,
    config: ExtractionConfig,
    default: Ordering,
    target: AgentIndex | None = None,
) -> ExtractionResult:
    acyclic = convert_to_acyclic(apg, config.pruning_threshold)
    ordering = topological_sort_with_default(acyclic.dag, default)
    return ExtractionResult(target=target, ordering=ordering, apg=apg, removed=acyclic.removed)


def extract_ordering(
    trajectories: TrajectorySet,
    catalog: ArgumentCatalog,
    target: AgentIndex,
    config: ExtractionConfig,
) -> Ordering:
    """Preference ordering over the catalog for one agent."""
    apg = build_apg(trajectories, catalog, target)
    return order_graph(apg, config, resolve_default_ordering(config, catalog), target).ordering


def merge_team_rankings(
    orderings: Mapping[AgentIndex, Ordering],
    catalog: ArgumentCatalog,
) -> dict[AgentIndex, Ordering]:
    """Per-agent orderings over the shared catalog.

    Agent i ranks its own primary arguments first, in its extracted order,
    followed by each teammate's primary arguments in that teammate's
    extracted order, teammates taken by index.
    """
    primaries: dict[AgentIndex, list[ArgumentId]] = {}
    for agent in range(catalog.team_size):
        own = {a.id for a in catalog.primary(agent)}
        ordering = orderings.get(agent)
        ranked = ordering.ranked if ordering is not None else catalog.ids
        primaries[agent] = [a for a in ranked if a in own]

    merged: dict[AgentIndex, Ordering] = {}
    for agent in range(catalog.team_size):
        ranked = list(primaries[agent])
        for teammate in range(catalog.team_size):
            if teammate != agent:
                ranked.extend(primaries[teammate])
        merged[agent] = Ordering(tuple(ranked))
    return merged


def merge_team_orderings(
    orderings: Mapping[AgentIndex, Ordering],
    catalog: ArgumentCatalog,
) -> dict[AgentIndex, ValueAssignment]:
    """Per-agent values of the merged team orderings."""
    return {
        agent: ordering_to_values(ordering)
        for agent, ordering in merge_team_rankings(orderings, catalog).items()
    }


class ExtractionService:
    """Extracts agent and team models from trajectories."""

    def __init__(self, workers: int | None = None, batch_size: int = 50):
        """Initialize extraction service with worker settings from configuration."""
        self.workers = workers if workers is not None else get_config().WORKERS
        self.batch_size = batch_size

    def accumulate_apg(
        self,
        trajectories: TrajectorySet,
        catalog: ArgumentCatalog,
        target: AgentIndex | None,
        workers: int | None = None,
    ) -> ArgumentPreferenceGraph:
        """Build an APG batch by batch, merging partial graphs in episode order.

        A `target` of None builds the joint graph. `workers` overrides the
        service setting for this call.
        """
        workers = self.workers if workers is None else workers
        def build(batch: TrajectorySet) -> ArgumentPreferenceGraph:
            if target is None:
                return build_joint_apg(batch, catalog)
            return build_apg(batch, catalog, target)

        batches = list(iterate_batches(trajectories, self.batch_size))
        empty = ArgumentPreferenceGraph.empty(catalog.ids)
        if workers <= 1 or len(batches) <= 1:
            partials = [build(batch) for batch in batches]
        else:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                partials = list(executor.map(build, batches))
        return reduce(ArgumentPreferenceGraph.merge, partials, empty)

    def extract_agent(
        self,
        trajectories: TrajectorySet,
        catalog: ArgumentCatalog,
        target: AgentIndex,
        config: ExtractionConfig,
        workers: int | None = None,
    ) -> ExtractionResult:
        """Extract one agent's ordering with diagnostics."""
        default = resolve_default_ordering(config, catalog)
        apg = self.accumulate_apg(trajectories, catalog, target, workers)
        logger.info(
            f"Agent {target}: preference graph has {apg.edge_count} edge(s), "
            f"max weight {apg.max_weight()}"
        )
        return order_graph(apg, config, default, target)

    def extract_team(
        self,
        trajectories: TrajectorySet,
        catalog: ArgumentCatalog,
        config: ExtractionConfig,
        default_actions: Mapping[AgentIndex, str],
        workers: int | None = None,
    ) -> tuple[TeamModel, list[ExtractionResult]]:
        """Extract a team model: one ordering per agent, or one joint ordering.

        Raises:
            DataError: If the trajectories do not fit the catalog
        """
        if trajectories.episodes and trajectories.team_size != catalog.team_size:
            raise DataError(
                f"Trajectories log {trajectories.team_size} agent(s) but the catalog "
                f"declares team_size {catalog.team_size}"
            )
        unknown = trajectories.action_labels() - catalog.action_alphabet
        if unknown:
            raise DataError(f"Trajectory actions {sorted(unknown)} are not in the catalog alphabet")
        if not trajectories.episodes:
            logger.warning("No trajectory data; extracted orderings equal the default ordering")

        if config.joint:
            default = resolve_default_ordering(config, catalog)
            apg = self.accumulate_apg(trajectories, catalog, None, workers)
            result = order_graph(apg, config, default, None)
            shared = ordering_to_values(result.ordering)
            members = tuple(
                AAAgentModel(catalog, shared, agent, default_actions[agent])
                for agent in range(catalog.team_size)
            )
            team = TeamModel(catalog, members, TeamMode.CENTRALIZED, shared)
            logger.info(f"Extracted joint ordering over {len(catalog)} arguments")
            return team, [result]

        results = [
            self.extract_agent(trajectories, catalog, agent, config, workers)
            for agent in range(catalog.team_size)
        ]
        merged = merge_team_rankings({r.target: r.ordering for r in results}, catalog)
        results = [
            replace(result, ordering=merged[agent], extracted=result.ordering)
            for agent, result in enumerate(results)
        ]
        members = tuple(
            AAAgentModel(catalog, ordering_to_values(merged[agent]), agent, default_actions[agent])
            for agent in range(catalog.team_size)
        )
        logger.info(f"Extracted {len(members)} agent model(s) over {len(catalog)} arguments")
        return TeamModel(catalog, members), results


# Global service instance
_extraction_service = None


def get_extraction_service() -> ExtractionService:
    """Get extraction service instance."""
    global _extraction_service
    if _extraction_service is None:
        _extraction_service = ExtractionService()
    return _extraction_service
