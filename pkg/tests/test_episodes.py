"""Tests for the seeded episode runner."""
import numpy as np
import pytest

from argextract.errors import DataError
from argextract.models.agent import TeamModel
from argextract.models.environment import Environment, MountainCarParams, TakeawayParams
from argextract.services.episodes import (
    EpisodeOutcome,
    as_joint_policy,
    episode_seeds,
    run_episodes,
    summarize,
)
from argextract.services.mountain_car import scripted_mc_policy
from argextract.services.takeaway import generate_takeaway_catalog, takeaway_feature_names, takeaway_ground_truth_team
from conftest import state


class TestSeeds:
    def test_children_are_reproducible(self):
        first = [s.generate_state(2).tolist() for s in episode_seeds(5, 3)]
        second = [s.generate_state(2).tolist() for s in episode_seeds(5, 3)]
        assert first == second
        assert len({tuple(s) for s in first}) == 3


class TestPolicies:
    def test_callable_returning_label(self):
        joint = as_joint_policy(lambda s: "no_push")
        assert joint(state(position=0.0, velocity=0.0)) == {0: "no_push"}

    def test_callable_returning_mapping(self):
        joint = as_joint_policy(lambda s: {0: "a", 1: "b"})
        assert joint(state()) == {0: "a", 1: "b"}

    def test_single_agent(self, line_agent):
        assert as_joint_policy(line_agent)(state(x=0.8)) == {0: "go_right"}

    def test_team(self, line_agent):
        assert as_joint_policy(TeamModel.single(line_agent))(state(x=0.2)) == {0: "go_left"}


class TestRunEpisodes:
    def test_mountain_car_run(self, short_mc_params):
        run = run_episodes(scripted_mc_policy, "mountain_car", 5, seed=1, log=True, mc_params=short_mc_params)
        assert run.stats.episodes == 5
        assert len(run.trajectories) == 5
        assert run.trajectories.feature_names == ("position", "velocity")
        assert run.step_counts == [len(e) for e in run.trajectories.episodes]
        assert all(n <= 60 for n in run.step_counts)
        assert run.stats.mean_decision_latency is not None

    def test_trajectories_only_when_logging(self):
        assert run_episodes(scripted_mc_policy, Environment.MOUNTAIN_CAR, 2, seed=1).trajectories is None

    def test_same_seed_same_episodes_for_any_worker_count(self, mc_ground_truth, short_mc_params):
        serial = run_episodes(mc_ground_truth, "mountain_car", 12, seed=4, log=True, mc_params=short_mc_params, workers=1)
        threaded = run_episodes(mc_ground_truth, "mountain_car", 12, seed=4, log=True, mc_params=short_mc_params, workers=4)
        assert serial.trajectories == threaded.trajectories
        assert serial.stats.deterministic_dict() == threaded.stats.deterministic_dict()

    def test_different_seeds_differ(self, short_mc_params):
        first = run_episodes(scripted_mc_policy, "mountain_car", 3, seed=1, log=True, mc_params=short_mc_params)
        second = run_episodes(scripted_mc_policy, "mountain_car", 3, seed=2, log=True, mc_params=short_mc_params)
        assert first.trajectories != second.trajectories

    def test_episode_count_must_be_positive(self):
        with pytest.raises(ValueError):
            run_episodes(scripted_mc_policy, "mountain_car", 0, seed=1)

    def test_unknown_environment(self):
        with pytest.raises(DataError):
            run_episodes(scripted_mc_policy, "lunar_lander", 1, seed=1)

    def test_step_cap_counts_as_failure(self):
        run = run_episodes(lambda s: "no_push", "mountain_car", 3, seed=0, mc_params=MountainCarParams(max_steps=20))
        assert run.stats.success_rate == 0.0
        assert run.stats.mean_steps == 20.0

    def test_takeaway_run(self, small_takeaway_params):
        params = small_takeaway_params
        catalog = generate_takeaway_catalog(params)
        team = takeaway_ground_truth_team(catalog, np.random.default_rng(2), params)
        run = run_episodes(team, "takeaway_synth", 6, seed=9, log=True, takeaway_params=params)
        assert run.trajectories.team_size == 2
        assert run.trajectories.feature_names == takeaway_feature_names(params)
        assert run.step_counts == [5] * 6
        assert run.stats.success_rate == 1.0

    def test_takeaway_failure_without_tackles(self):
        params = TakeawayParams(takers=2, keepers=3, episode_length=4)
        run = run_episodes(lambda s: {0: "mark_k1", 1: "mark_k2"}, "takeaway_synth", 3, seed=9, takeaway_params=params)
        assert run.stats.success_rate == 0.0


class TestSummarize:
    def test_population_statistics(self):
        outcomes = [
            EpisodeOutcome(steps=[None], success=True, wall_time=0.1),
            EpisodeOutcome(steps=[None] * 3, success=False, wall_time=0.3),
        ]
        stats = summarize(outcomes)
        assert stats.mean_steps == 2.0
        assert stats.std_steps == 1.0
        assert stats.success_rate == 0.5
        assert stats.mean_wall_time == pytest.approx(0.2)
        assert stats.mean_decision_latency is None
