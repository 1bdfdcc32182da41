"""Tests for argumentation-based action selection."""
import numpy as np
import pytest

from argextract.models.agent import AAAgentModel, TeamMode, TeamModel
from argextract.models.argumentation import ExtensionSet
from argextract.models.arguments import ArgumentCatalog, CatalogError, MissingValueError, ValueAssignment
from argextract.models.environment import POSITION_RANGE, VELOCITY_RANGE
from argextract.services.agents import (
    InconsistentSelectionError,
    applicable_arguments,
    build_attacks,
    build_defeat_graph,
    explain_action,
    select_action,
    select_joint_action,
)
from argextract.services.mountain_car import generate_mc_catalog, random_grid_agent
from conftest import interval_argument, state


class TestAttacks:
    def test_same_target_different_action(self, line_catalog):
        attacks = build_attacks(line_catalog.arguments)
        assert ("left", "right") in attacks and ("right", "left") in attacks
        assert ("left", "wide") in attacks

    def test_same_action_different_target(self, pair_catalog):
        attacks = build_attacks(pair_catalog.arguments)
        assert ("a0_up", "a1_up") in attacks
        assert ("a0_up", "a1_down") not in attacks

    def test_attacks_are_symmetric(self, pair_catalog):
        attacks = build_attacks(pair_catalog.arguments)
        assert all((b, a) in attacks for a, b in attacks)

    def test_defeats_follow_values(self, line_catalog):
        values = ValueAssignment({"left": 1, "right": 3, "wide": 2})
        defeats = build_defeat_graph(line_catalog.arguments, values)
        assert defeats.attacks == frozenset({("right", "left"), ("right", "wide"), ("wide", "left")})

    def test_defeat_graph_needs_values(self, line_catalog):
        with pytest.raises(MissingValueError):
            build_defeat_graph(line_catalog.arguments, ValueAssignment({"left": 1}))


class TestSelectAction:
    @pytest.mark.parametrize(("x", "expected"), [
        (0.2, "go_left"),
        (0.5, "go_left"),
        (0.8, "go_right"),
    ])
    def test_highest_valued_recommendation_wins(self, line_agent, x, expected):
        assert select_action(line_agent, state(x=x)) == expected

    def test_default_when_nothing_applies(self, line_agent):
        explanation = explain_action(line_agent, state(x=1.5))
        assert explanation.action == "stay"
        assert explanation.used_default
        assert explanation.applicable == ()

    def test_explanation(self, line_agent):
        explanation = explain_action(line_agent, state(x=0.5))
        assert explanation.applicable == ("left", "right", "wide")
        assert explanation.grounded == ExtensionSet.of("left")
        assert explanation.primary == ("left",)
        assert not explanation.used_default

    def test_inconsistent_acceptance_is_an_invariant_violation(self, line_agent, mocker):
        mocker.patch(
            "argextract.services.agents.grounded_extension",
            return_value=ExtensionSet.of("left", "right"),
        )
        with pytest.raises(InconsistentSelectionError):
            select_action(line_agent, state(x=0.5))

    def test_grid_agent_picks_best_cell_argument(self, rng, small_mc_catalog):
        agent = random_grid_agent(small_mc_catalog, np.random.default_rng(3))
        for _ in range(300):
            features = state(
                position=float(rng.uniform(*POSITION_RANGE)), velocity=float(rng.uniform(*VELOCITY_RANGE)),
            )
            cell = applicable_arguments(small_mc_catalog, features)
            best = max(cell, key=lambda a: agent.values[a.id])
            assert select_action(agent, features) == best.action

    def test_monotone_relabeling_keeps_choices(self, rng, small_mc_catalog):
        agent = random_grid_agent(small_mc_catalog, np.random.default_rng(13))
        # strictly increasing map from 1..N onto random distinct labels
        labels = np.sort(rng.choice(10**6, size=len(small_mc_catalog), replace=False) + 1)
        relabeled = AAAgentModel(
            small_mc_catalog,
            ValueAssignment({a: int(labels[v - 1]) for a, v in agent.values.values.items()}),
            0,
            agent.default_action,
        )
        for _ in range(300):
            features = state(
                position=float(rng.uniform(*POSITION_RANGE)), velocity=float(rng.uniform(*VELOCITY_RANGE)),
            )
            assert select_action(relabeled, features) == select_action(agent, features)

    def test_select_action_speed(self, benchmark):
        catalog = generate_mc_catalog()
        agent = random_grid_agent(catalog, np.random.default_rng(5))
        action = benchmark(select_action, agent, state(position=-0.5, velocity=0.01))
        assert action in catalog.action_alphabet


class TestTeams:
    def test_decentralized_members_use_their_own_values(self, pair_catalog):
        members = (
            AAAgentModel(pair_catalog, ValueAssignment({"a0_up": 4, "a0_down": 3, "a1_down": 2, "a1_up": 1}), 0, "down"),
            AAAgentModel(pair_catalog, ValueAssignment({"a1_up": 4, "a1_down": 3, "a0_down": 2, "a0_up": 1}), 1, "down"),
        )
        team = TeamModel(pair_catalog, members)
        assert select_joint_action(team, state(x=0.5)) == {0: "up", 1: "up"}

    def test_centralized_team_shares_one_extension(self, pair_catalog):
        shared = ValueAssignment({"a0_up": 4, "a1_down": 3, "a0_down": 2, "a1_up": 1})
        members = tuple(AAAgentModel(pair_catalog, shared, k, "up") for k in range(2))
        team = TeamModel(pair_catalog, members, TeamMode.CENTRALIZED, shared)
        assert select_joint_action(team, state(x=0.5)) == {0: "up", 1: "down"}

    def test_modes_agree_without_cross_agent_attacks(self, rng):
        # per-agent action labels, so no argument attacks a teammate's
        arguments = []
        for agent, feature in ((0, "x"), (1, "y")):
            for k in range(6):
                lo = float(rng.uniform(0.0, 0.8))
                action = f"{('left', 'right', 'stay')[k % 3]}{agent}"
                hi = lo + float(rng.uniform(0.1, 0.5))
                arguments.append(interval_argument(f"arg{agent}_{k}", lo, hi, action, agent, feature))
        catalog = ArgumentCatalog(
            tuple(arguments),
            frozenset(f"{a}{agent}" for a in ("left", "right", "stay") for agent in range(2)),
            team_size=2,
        )
        attacks = build_attacks(catalog.arguments)
        by_id = {a.id: a for a in catalog.arguments}
        assert all(by_id[a].target == by_id[b].target for a, b in attacks)

        shared = ValueAssignment({a: int(v) for a, v in zip(catalog.ids, rng.permutation(len(catalog)) + 1)})
        members = tuple(AAAgentModel(catalog, shared, k, f"stay{k}") for k in range(2))
        decentralized = TeamModel(catalog, members)
        centralized = TeamModel(catalog, members, TeamMode.CENTRALIZED, shared)
        for _ in range(1000):
            observation = state(x=float(rng.random()), y=float(rng.random()))
            assert select_joint_action(centralized, observation) == select_joint_action(decentralized, observation)

    def test_team_size_must_match_catalog(self, pair_catalog):
        values = ValueAssignment({"a0_up": 4, "a0_down": 3, "a1_down": 2, "a1_up": 1})
        with pytest.raises(CatalogError):
            TeamModel(pair_catalog, (AAAgentModel(pair_catalog, values, 0, "up"),))

    def test_centralized_team_needs_shared_values(self, pair_catalog):
        values = ValueAssignment({"a0_up": 4, "a0_down": 3, "a1_down": 2, "a1_up": 1})
        members = tuple(AAAgentModel(pair_catalog, values, k, "up") for k in range(2))
        with pytest.raises(CatalogError):
            TeamModel(pair_catalog, members, TeamMode.CENTRALIZED)

    def test_agent_default_action_must_be_in_alphabet(self, line_catalog):
        with pytest.raises(CatalogError):
            AAAgentModel(line_catalog, ValueAssignment({"left": 3, "right": 2, "wide": 1}), 0, "jump")
