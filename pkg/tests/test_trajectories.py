"""Tests for trajectory files and iteration."""
import logging

import numpy as np
import pytest

from argextract.errors import DataError
from argextract.models.trajectory import Episode, TimeStep, TrajectorySchemaError, TrajectorySet
from argextract.services.trajectories import (
    DataGapError,
    TrajectoryFormat,
    TrajectoryLoader,
    TrajectoryParseError,
    iterate_batches,
    iterate_joint,
    iterate_pairs,
    load_trajectories,
    write_trajectories,
)
from conftest import state


@pytest.fixture
def two_agent_set():
    return TrajectorySet(
        episodes=(
            Episode(0, (
                TimeStep(state(x=0.1, y=-2.5), {0: "up", 1: "down"}),
                TimeStep(state(x=0.30000000000000004, y=1e-9), {0: "down", 1: "down"}),
            )),
            Episode(1, (TimeStep(state(x=0.7, y=3.0), {0: "up", 1: "up"}),)),
        ),
        feature_names=("x", "y"),
        team_size=2,
    )


def write_lines(path, *lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestFormats:
    def test_format_from_suffix(self):
        assert TrajectoryFormat.from_path("runs/t.csv") is TrajectoryFormat.CSV
        assert TrajectoryFormat.from_path("runs/t.jsonl") is TrajectoryFormat.JSONL

    def test_unknown_format(self):
        with pytest.raises(DataError):
            TrajectoryFormat.parse("parquet")

    @pytest.mark.parametrize("fmt", ["jsonl", "csv"])
    def test_written_file_loads_back(self, tmp_path, two_agent_set, fmt):
        path = write_trajectories(two_agent_set, tmp_path / f"t.{fmt}")
        assert load_trajectories(path) == two_agent_set

    @pytest.mark.parametrize("fmt", ["jsonl", "csv"])
    def test_random_sets_load_back(self, tmp_path, fmt):
        rng = np.random.default_rng(77)
        labels = ("up", "no, wait", 'say "stop"', "tab\there", "ünïcode")
        extremes = (5e-324, -1.7976931348623157e308, 0.1 + 0.2, -0.0, 1e-9)
        for trial in range(20):
            team_size = int(rng.integers(1, 4))
            features = tuple(f"f{k}" for k in range(int(rng.integers(1, 5))))

            def value():
                if rng.random() < 0.2:
                    return float(rng.choice(extremes))
                return float(rng.standard_normal() * 10.0 ** int(rng.integers(-30, 30)))

            episodes = tuple(
                Episode(e, tuple(
                    TimeStep(
                        state(**{name: value() for name in features}),
                        {agent: str(rng.choice(labels)) for agent in range(team_size)},
                    )
                    for _ in range(int(rng.integers(1, 6)))
                ))
                for e in range(int(rng.integers(1, 5)))
            )
            original = TrajectorySet(episodes, features, team_size)
            path = write_trajectories(original, tmp_path / f"t{trial}.{fmt}")
            assert load_trajectories(path) == original

    def test_jsonl_layout(self, tmp_path, two_agent_set):
        path = write_trajectories(two_agent_set, tmp_path / "t.jsonl")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == '{"schema": {"feature_names": ["x", "y"], "team_size": 2}}'
        assert lines[1] == '{"episode": 0, "step": 0, "action_0": "up", "action_1": "down", "x": 0.1, "y": -2.5}'

    def test_csv_layout(self, tmp_path, two_agent_set):
        path = write_trajectories(two_agent_set, tmp_path / "t.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "episode,step,action_0,action_1,x,y"
        assert lines[2] == "0,1,down,down,0.30000000000000004,1e-09"


class TestLoader:
    def test_jsonl_without_schema_line(self, tmp_path):
        path = write_lines(
            tmp_path / "t.jsonl",
            '{"episode": 3, "step": 1, "action_0": "b", "x": 2}',
            '{"episode": 3, "step": 0, "action_0": "a", "x": 1}',
        )
        data = load_trajectories(path)
        assert data.feature_names == ("x",)
        assert data.team_size == 1
        assert [s.actions[0] for s in data.episodes[0].steps] == ["a", "b"]
        assert data.episodes[0].id == 3

    def test_empty_file(self, tmp_path, caplog):
        path = write_lines(tmp_path / "t.jsonl", "")
        with caplog.at_level(logging.WARNING, logger="argextract"):
            data = load_trajectories(path)
        assert data == TrajectorySet()
        assert "empty" in caplog.text

    def test_strict_mode_raises_on_malformed_row(self, tmp_path):
        path = write_lines(
            tmp_path / "t.jsonl",
            '{"episode": 0, "step": 0, "action_0": "a", "x": 1}',
            '{"episode": 0, "step": "one", "action_0": "a", "x": 1}',
        )
        with pytest.raises(TrajectoryParseError) as excinfo:
            load_trajectories(path)
        assert excinfo.value.line == 2

    def test_lenient_mode_reports_skipped_rows(self, tmp_path):
        path = write_lines(
            tmp_path / "t.jsonl",
            '{"episode": 0, "step": 0, "action_0": "a", "x": 1}',
            "not json",
            '{"episode": 0, "step": 1, "action_0": "a", "x": "high"}',
            '{"episode": 0, "step": 2, "action_0": "b", "x": 3}',
        )
        report = TrajectoryLoader(strict=False).load_with_report(path)
        assert [line for line, _ in report.errors] == [2, 3]
        assert report.rows == report.trajectories.step_count + len(report.errors)
        assert report.trajectories.step_count == 2

    def test_duplicate_step(self, tmp_path):
        path = write_lines(
            tmp_path / "t.csv",
            "episode,step,action_0,x",
            "0,0,a,1.0",
            "0,0,b,2.0",
        )
        with pytest.raises(TrajectoryParseError, match="duplicate step"):
            load_trajectories(path)

    def test_missing_feature_column(self, tmp_path):
        path = write_lines(
            tmp_path / "t.jsonl",
            '{"schema": {"feature_names": ["x", "y"], "team_size": 1}}',
            '{"episode": 0, "step": 0, "action_0": "a", "x": 1}',
        )
        with pytest.raises(TrajectorySchemaError, match="missing feature"):
            TrajectoryLoader(strict=False).load(path)

    def test_label_outside_alphabet(self, tmp_path):
        path = write_lines(tmp_path / "t.csv", "episode,step,action_0,x", "0,0,fly,1.0")
        with pytest.raises(TrajectorySchemaError, match="fly"):
            load_trajectories(path, action_alphabet={"walk", "run"})

    def test_row_without_actions(self, tmp_path):
        path = write_lines(tmp_path / "t.csv", "episode,step,action_0,x", "0,0,,1.0")
        with pytest.raises(TrajectorySchemaError, match="no action"):
            load_trajectories(path)

    def test_csv_header_needs_reserved_columns(self, tmp_path):
        path = write_lines(tmp_path / "t.csv", "step,action_0,x", "0,a,1.0")
        with pytest.raises(TrajectorySchemaError):
            load_trajectories(path)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(DataError):
            load_trajectories(tmp_path / "absent.jsonl")


class TestIteration:
    def test_pairs_in_order(self, two_agent_set):
        actions = [action for _, action in iterate_pairs(two_agent_set, 1)]
        assert actions == ["down", "down", "up"]

    def test_pairs_reject_agent_outside_team(self, two_agent_set):
        with pytest.raises(DataError):
            list(iterate_pairs(two_agent_set, 2))

    def test_gap_in_logged_actions(self, tmp_path):
        path = write_lines(tmp_path / "t.csv", "episode,step,action_0,action_1,x", "0,0,a,,1.0")
        data = load_trajectories(path)
        with pytest.raises(DataGapError) as excinfo:
            list(iterate_pairs(data, 1))
        assert (excinfo.value.episode, excinfo.value.step, excinfo.value.agent) == (0, 0, 1)
        with pytest.raises(DataGapError):
            list(iterate_joint(data))
        assert [a for _, a in iterate_pairs(data, 0)] == ["a"]

    def test_batches(self, two_agent_set):
        batches = list(iterate_batches(two_agent_set, 1))
        assert [len(b) for b in batches] == [1, 1]
        assert batches[0].feature_names == two_agent_set.feature_names
        with pytest.raises(ValueError):
            list(iterate_batches(two_agent_set, 0))

    def test_holdout_takes_final_episodes(self, two_agent_set):
        train, held = two_agent_set.split_holdout(0.5)
        assert [e.id for e in train.episodes] == [0]
        assert [e.id for e in held.episodes] == [1]
        train, held = two_agent_set.split_holdout(0.0)
        assert len(train) == 2 and len(held) == 0
