"""Seeded episode runner for both environments."""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import numpy as np

from argextract.config import get_config
from argextract.errors import DataError
from argextract.models.agent import AAAgentModel, StateVector, TeamModel
from argextract.models.arguments import AgentIndex
from argextract.models.environment import (
    Environment,
    EpisodeStats,
    MountainCarParams,
    TakeawayParams,
)
from argextract.models.trajectory import Episode, TimeStep, TrajectorySet
from argextract.services.agents import select_action, select_joint_action
from argextract.services.mountain_car import FEATURE_NAMES, mc_is_terminal, mc_reset, mc_step
from argextract.services.takeaway import TACKLE, TakeawayGenerator, closest_taker, takeaway_feature_names

logger = logging.getLogger(__name__)

JointPolicy = Callable[[StateVector], dict[AgentIndex, str]]
Policy = TeamModel | AAAgentModel | Callable[[StateVector], Any]


def as_joint_policy(policy: Policy) -> JointPolicy:
    """Adapt a team, a single agent, or an action-returning callable to a joint policy.

    A callable may return one label (taken as agent 0's action) or a mapping
    of agent index to label.
    """
    if isinstance(policy, TeamModel):
        return lambda state: select_joint_action(policy, state)
    if isinstance(policy, AAAgentModel):
        return lambda state: {policy.self_index: select_action(policy, state)}

    def joint(state: StateVector) -> dict[AgentIndex, str]:
        decision = policy(state)
        if isinstance(decision, Mapping):
            return dict(decision)
        return {0: str(decision)}

    return joint


@dataclass
class EpisodeOutcome:
    steps: list[TimeStep]
    success: bool
    wall_time: float
    latencies: list[float] = field(default_factory=list)


@dataclass
class EpisodeRun:
    """Statistics of a batch of episodes, with the logged trajectories when requested."""
    stats: EpisodeStats
    step_counts: list[int]
    trajectories: TrajectorySet | None = None


def episode_seeds(seed: int, episodes: int) -> list[np.random.SeedSequence]:
    """Independent per-episode seed sequences derived from one root seed."""
    return np.random.SeedSequence(seed).spawn(episodes)


def _run_mountain_car(
    policy: JointPolicy,
    rng: np.random.Generator,
    params: MountainCarParams,
) -> EpisodeOutcome:
    started = time.perf_counter()
    state = mc_reset(rng)
    steps: list[TimeStep] = []
    latencies: list[float] = []
    success = False
    for _ in range(params.max_steps):
        observation = state.to_state_vector()
        tick = time.perf_counter()
        action = policy(observation)[0]
        latencies.append(time.perf_counter() - tick)
        steps.append(TimeStep(observation, {0: action}))
        state = mc_step(state, action, params)
        if mc_is_terminal(state, params):
            success = True
            break
    return EpisodeOutcome(steps, success, time.perf_counter() - started, latencies)


def _run_takeaway(
    policy: JointPolicy,
    rng: np.random.Generator,
    params: TakeawayParams,
) -> EpisodeOutcome:
    """Replay a generated state sequence through the team.

    The episode counts as a success when the taker closest to the ball
    holder chose to tackle at least once.
    """
    started = time.perf_counter()
    generator = TakeawayGenerator(params, rng)
    steps: list[TimeStep] = []
    latencies: list[float] = []
    success = False
    for feature_state in generator.sample_episode():
        observation = feature_state.to_state_vector()
        tick = time.perf_counter()
        actions = policy(observation)
        latencies.append(time.perf_counter() - tick)
        steps.append(TimeStep(observation, dict(actions)))
        if actions.get(closest_taker(observation, params.takers)) == TACKLE:
            success = True
    return EpisodeOutcome(steps, success, time.perf_counter() - started, latencies)


def summarize(outcomes: list[EpisodeOutcome], timed: bool = True) -> EpisodeStats:
    """Mean and population standard deviation over episodes."""
    counts = np.array([len(o.steps) for o in outcomes], dtype=float)
    walls = np.array([o.wall_time for o in outcomes], dtype=float)
    latencies = np.array([t for o in outcomes for t in o.latencies], dtype=float)
    has_latency = timed and latencies.size > 0
    return EpisodeStats(
        episodes=len(outcomes),
        mean_steps=float(counts.mean()) if counts.size else 0.0,
        std_steps=float(counts.std()) if counts.size else 0.0,
        mean_wall_time=float(walls.mean()) if walls.size else 0.0,
        std_wall_time=float(walls.std()) if walls.size else 0.0,
        success_rate=float(np.mean([o.success for o in outcomes])) if outcomes else 0.0,
        mean_decision_latency=float(latencies.mean()) if has_latency else None,
        std_decision_latency=float(latencies.std()) if has_latency else None,
    )


def run_episodes(
    policy: Policy,
    env: "str | Environment",
    episodes: int,
    seed: int,
    log: bool = False,
    mc_params: MountainCarParams | None = None,
    takeaway_params: TakeawayParams | None = None,
    workers: int | None = None,
) -> EpisodeRun:
    """Run seeded episodes and collect statistics.

    Episode k draws from the k-th child of `seed`'s seed sequence, so results
    do not depend on `workers`.

    Args:
        policy: Team, agent or callable driving the episodes
        env: Environment name
        episodes: Number of episodes, at least 1
        seed: Root seed
        log: Whether to keep the trajectories
        workers: Worker threads (default ARGEXTRACT_WORKERS)

    Returns:
        EpisodeRun with stats and, when `log` is set, the trajectories
    """
    if episodes < 1:
        raise ValueError(f"episodes must be at least 1, got {episodes}")
    try:
        environment = Environment(env) if not isinstance(env, Environment) else env
    except ValueError:
        raise DataError(
            f"Unknown environment '{env}'. Expected one of {[e.value for e in Environment]}"
        ) from None

    config = get_config()
    workers = workers if workers is not None else config.WORKERS
    joint = as_joint_policy(policy)

    if environment is Environment.MOUNTAIN_CAR:
        mc = mc_params or MountainCarParams.from_config(config)
        feature_names, team_size = FEATURE_NAMES, 1

        def run_one(sequence: np.random.SeedSequence) -> EpisodeOutcome:
            return _run_mountain_car(joint, np.random.default_rng(sequence), mc)
    else:
        takeaway = takeaway_params or TakeawayParams.from_config(config)
        feature_names, team_size = takeaway_feature_names(takeaway), takeaway.takers

        def run_one(sequence: np.random.SeedSequence) -> EpisodeOutcome:
            return _run_takeaway(joint, np.random.default_rng(sequence), takeaway)

    seeds = episode_seeds(seed, episodes)
    if workers <= 1:
        outcomes = [run_one(sequence) for sequence in seeds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(run_one, seeds))

    stats = summarize(outcomes)
    logger.info(
        f"Ran {episodes} {environment.value} episode(s): mean steps {stats.mean_steps:.1f}, "
        f"success rate {stats.success_rate:.3f}"
    )

    trajectories = None
    if log:
        trajectories = TrajectorySet(
            episodes=tuple(Episode(k, tuple(o.steps)) for k, o in enumerate(outcomes)),
            feature_names=tuple(feature_names),
            team_size=team_size,
        )
    return EpisodeRun(stats, [len(o.steps) for o in outcomes], trajectories)
