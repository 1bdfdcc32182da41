"""Shared fixtures."""
import numpy as np
import pytest

from argextract import create_toolkit
from argextract.models.agent import AAAgentModel, StateVector, TeamModel
from argextract.models.arguments import ActionArgument, ArgumentCatalog, ConditionSpec, ValueAssignment
from argextract.models.environment import GridSpec, MountainCarParams, TakeawayParams
from argextract.services.episodes import run_episodes
from argextract.services.mountain_car import generate_mc_catalog, random_grid_agent


@pytest.fixture(autouse=True)
def testing_config():
    """Every test runs against the testing profile."""
    return create_toolkit("testing")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def interval_argument(arg_id, lo, hi, action, target=0, feature="x"):
    return ActionArgument(
        id=arg_id,
        target=target,
        action=action,
        condition=ConditionSpec("interval", {"feature": feature, "lo": lo, "hi": hi}),
    )


@pytest.fixture
def line_catalog():
    """Three one-dimensional arguments for a single agent.

    ``left`` and ``right`` overlap on [0.4, 0.6); ``wide`` covers the whole line.
    """
    return ArgumentCatalog(
        arguments=(
            interval_argument("left", 0.0, 0.6, "go_left"),
            interval_argument("right", 0.4, 1.0, "go_right"),
            interval_argument("wide", 0.0, 1.0, "stay"),
        ),
        action_alphabet=frozenset({"go_left", "go_right", "stay"}),
        team_size=1,
    )


@pytest.fixture
def line_agent(line_catalog):
    return AAAgentModel(
        line_catalog,
        ValueAssignment({"left": 3, "right": 2, "wide": 1}),
        self_index=0,
        default_action="stay",
    )


@pytest.fixture
def pair_catalog():
    """Two agents, two arguments each, all applicable everywhere on [0, 1)."""
    return ArgumentCatalog(
        arguments=(
            interval_argument("a0_up", 0.0, 1.0, "up", target=0),
            interval_argument("a0_down", 0.0, 1.0, "down", target=0),
            interval_argument("a1_up", 0.0, 1.0, "up", target=1),
            interval_argument("a1_down", 0.0, 1.0, "down", target=1),
        ),
        action_alphabet=frozenset({"up", "down"}),
        team_size=2,
    )


def state(**features):
    return StateVector(dict(features))


@pytest.fixture
def small_grid():
    return GridSpec(position_bins=4, velocity_bins=4)


@pytest.fixture
def small_mc_catalog(small_grid):
    return generate_mc_catalog(small_grid)


@pytest.fixture
def mc_ground_truth(small_mc_catalog):
    return TeamModel.single(random_grid_agent(small_mc_catalog, np.random.default_rng(7)))


@pytest.fixture
def short_mc_params():
    return MountainCarParams(max_steps=60)


@pytest.fixture
def mc_round_trip(mc_ground_truth, short_mc_params):
    """Trajectories of a random grid agent: 20 short episodes, seed 11."""
    run = run_episodes(mc_ground_truth, "mountain_car", 20, seed=11, log=True, mc_params=short_mc_params)
    return mc_ground_truth, run.trajectories


@pytest.fixture
def small_takeaway_params():
    return TakeawayParams(takers=2, keepers=3, episode_length=5)
