"""Trajectory loading, writing and iteration.

Two on-disk formats carry the same records, one time step each:

- ``jsonl``: an optional schema line ``{"schema": {"feature_names": [...],
  "team_size": n}}`` followed by records ``{"episode": int, "step": int,
  "action_0": label, ..., "<feature>": number, ...}``.
- ``csv``: a header ``episode,step,action_0,...,<features>`` followed by
  one row per step. An empty action cell means the action was not logged.

Episode boundaries come from the ``episode`` field; steps within an episode
are ordered by ``step``.
"""
import csv
import enum
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator

from argextract.errors import DataError
from argextract.models.agent import StateVector
from argextract.models.arguments import AgentIndex
from argextract.models.trajectory import Episode, TimeStep, TrajectorySchemaError, TrajectorySet

logger = logging.getLogger(__name__)

RESERVED_KEYS = ("episode", "step")
ACTION_PREFIX = "action_"


class TrajectoryParseError(DataError):
    """Raised for a malformed trajectory row."""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class DataGapError(DataError):
    """Raised when a step has no logged action for the requested agent."""

    def __init__(self, episode: int, step: int, agent: AgentIndex):
        self.episode = episode
        self.step = step
        self.agent = agent
        super().__init__(f"Episode {episode} step {step} has no action for agent {agent}")


class TrajectoryFormat(enum.Enum):
    """Supported trajectory file formats."""
    JSONL = "jsonl"
    CSV = "csv"

    @classmethod
    def parse(cls, value: "str | TrajectoryFormat") -> "TrajectoryFormat":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DataError(
                f"Unknown trajectory format '{value}'. Expected one of {[f.value for f in cls]}"
            ) from None

    @classmethod
    def from_path(cls, path: str | Path) -> "TrajectoryFormat":
        """Guess the format from a file suffix, defaulting to jsonl."""
        return cls.CSV if Path(path).suffix.lower() == ".csv" else cls.JSONL


@dataclass
class LoadReport:
    """Loaded trajectories plus the rows that were skipped."""
    trajectories: TrajectorySet
    rows: int
    errors: list[tuple[int, str]] = field(default_factory=list)


@dataclass
class _Row:
    line: int
    episode: int
    step: int
    actions: dict[AgentIndex, str]
    features: dict[str, float]


def _action_index(key: str) -> int | None:
    if not key.startswith(ACTION_PREFIX):
        return None
    suffix = key[len(ACTION_PREFIX):]
    return int(suffix) if suffix.isdigit() else None


def _as_int(value: Any, name: str) -> int:
    if isinstance(value, bool):
        raise ValueError(f"'{name}' must be an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and value.strip().lstrip("-").isdigit():
        return int(value)
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise ValueError(f"'{name}' must be an integer, got {value!r}")


def _as_float(value: Any, name: str) -> float:
    if isinstance(value, bool) or value is None or value == "":
        raise ValueError(f"feature '{name}' must be a number, got {value!r}")
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"feature '{name}' must be a number, got {value!r}") from None
    if math.isnan(number):
        raise ValueError(f"feature '{name}' is NaN")
    return number


class TrajectoryLoader:
    """Reads trajectory files into normalized `TrajectorySet`s.

    In strict mode the first malformed row raises `TrajectoryParseError`; in
    lenient mode malformed rows are skipped and reported as ``(line, reason)``
    so that rows read equal steps loaded plus errors. Schema problems (missing
    feature or action columns, labels outside the action alphabet) always raise.
    """

    def __init__(self, strict: bool = True, action_alphabet: Iterable[str] | None = None):
        self.strict = strict
        self.action_alphabet = frozenset(action_alphabet) if action_alphabet is not None else None

    def load(self, path: str | Path, format: "str | TrajectoryFormat | None" = None) -> TrajectorySet:
        return self.load_with_report(path, format).trajectories

    def load_with_report(
        self,
        path: str | Path,
        format: "str | TrajectoryFormat | None" = None,
    ) -> LoadReport:
        """Load a trajectory file and report skipped rows.

        Raises:
            DataError: If the file cannot be read
            TrajectoryParseError: On a malformed row in strict mode
            TrajectorySchemaError: If rows do not match the schema
        """
        path = Path(path)
        fmt = TrajectoryFormat.parse(format) if format else TrajectoryFormat.from_path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            logger.error(f"Cannot read trajectories from {path}: {e}")
            raise DataError(f"Cannot read trajectories from {path}: {e}") from e

        if not text.strip():
            logger.warning(f"Trajectory file {path} is empty; loading an empty set")
            return LoadReport(TrajectorySet(), rows=0)

        if fmt is TrajectoryFormat.JSONL:
            feature_names, team_size, rows, read, errors = self._parse_jsonl(text)
        else:
            feature_names, team_size, rows, read, errors = self._parse_csv(text)

        for line, reason in errors:
            logger.warning(f"Skipped {path} line {line}: {reason}")

        trajectories = self._assemble(rows, feature_names, team_size)
        logger.info(
            f"Loaded {len(trajectories)} episode(s), {trajectories.step_count} step(s) from {path}"
        )
        return LoadReport(trajectories, rows=read, errors=errors)

    def _fail(self, errors: list[tuple[int, str]], line: int, reason: str) -> None:
        if self.strict:
            raise TrajectoryParseError(line, reason)
        errors.append((line, reason))

    def _parse_jsonl(self, text: str):
        lines = text.splitlines()
        feature_names: list[str] | None = None
        team_size: int | None = None
        rows: list[_Row] = []
        errors: list[tuple[int, str]] = []
        read = 0

        for number, raw in enumerate(lines, start=1):
            if not raw.strip():
                continue
            try:
                record = json.loads(raw)
            except json.JSONDecodeError as e:
                read += 1
                self._fail(errors, number, f"invalid JSON ({e.msg})")
                continue
            if not isinstance(record, dict):
                read += 1
                self._fail(errors, number, "record is not an object")
                continue

            if "schema" in record:
                if feature_names is not None or rows or errors:
                    raise TrajectorySchemaError(f"line {number}: schema line must come first")
                schema = record["schema"]
                try:
                    feature_names = [str(name) for name in schema["feature_names"]]
                    team_size = _as_int(schema["team_size"], "team_size")
                except (KeyError, TypeError, ValueError) as e:
                    raise TrajectorySchemaError(f"line {number}: malformed schema line ({e})") from e
                continue

            read += 1
            if feature_names is None:
                feature_names = [
                    key for key in record
                    if key not in RESERVED_KEYS and _action_index(key) is None
                ]
                indices = [_action_index(key) for key in record if _action_index(key) is not None]
                team_size = max(indices) + 1 if indices else 0
            assert team_size is not None
            row = self._parse_record(record, number, feature_names, team_size, errors)
            if row is not None:
                rows.append(row)

        return feature_names or [], team_size or 0, rows, read, errors

    def _parse_csv(self, text: str):
        reader = csv.reader(text.splitlines())
        header = next(reader, None)
        if not header:
            return [], 0, [], 0, []
        missing = [key for key in RESERVED_KEYS if key not in header]
        if missing:
            raise TrajectorySchemaError(f"CSV header is missing column(s) {missing}")
        indices = [_action_index(key) for key in header if _action_index(key) is not None]
        if sorted(indices) != list(range(len(indices))):
            raise TrajectorySchemaError(f"CSV action columns are not action_0..action_n: {header}")
        team_size = len(indices)
        feature_names = [
            key for key in header if key not in RESERVED_KEYS and _action_index(key) is None
        ]

        rows: list[_Row] = []
        errors: list[tuple[int, str]] = []
        read = 0
        for number, cells in enumerate(reader, start=2):
            if not cells:
                continue
            read += 1
            if len(cells) != len(header):
                self._fail(errors, number, f"expected {len(header)} cells, found {len(cells)}")
                continue
            record: dict[str, Any] = {
                key: (value if value != "" else None) for key, value in zip(header, cells)
            }
            row = self._parse_record(record, number, feature_names, team_size, errors)
            if row is not None:
                rows.append(row)
        return feature_names, team_size, rows, read, errors

    def _parse_record(
        self,
        record: dict[str, Any],
        line: int,
        feature_names: list[str],
        team_size: int,
        errors: list[tuple[int, str]],
    ) -> _Row | None:
        missing = [name for name in feature_names if name not in record]
        if missing:
            raise TrajectorySchemaError(f"line {line}: missing feature column(s) {missing}")

        try:
            episode = _as_int(record.get("episode"), "episode")
            step = _as_int(record.get("step"), "step")
            features = {name: _as_float(record[name], name) for name in feature_names}
        except ValueError as e:
            self._fail(errors, line, str(e))
            return None

        actions: dict[AgentIndex, str] = {}
        for key, value in record.items():
            index = _action_index(key)
            if index is None or value is None:
                continue
            if index >= team_size:
                raise TrajectorySchemaError(
                    f"line {line}: column '{key}' is outside the team of {team_size}"
                )
            label = str(value)
            if self.action_alphabet is not None and label not in self.action_alphabet:
                raise TrajectorySchemaError(
                    f"line {line}: action label '{label}' is not in the action alphabet "
                    f"{sorted(self.action_alphabet)}"
                )
            actions[index] = label
        if not actions:
            raise TrajectorySchemaError(f"line {line}: no action columns")
        return _Row(line, episode, step, actions, features)

    def _assemble(self, rows: list[_Row], feature_names: list[str], team_size: int) -> TrajectorySet:
        grouped: dict[int, dict[int, _Row]] = {}
        for row in rows:
            steps = grouped.setdefault(row.episode, {})
            if row.step in steps:
                raise TrajectoryParseError(
                    row.line,
                    f"duplicate step {row.step} in episode {row.episode} "
                    f"(first seen on line {steps[row.step].line})",
                )
            steps[row.step] = row
        episodes = tuple(
            Episode(
                id=episode_id,
                steps=tuple(
                    TimeStep(StateVector(steps[k].features), steps[k].actions)
                    for k in sorted(steps)
                ),
            )
            for episode_id, steps in grouped.items()
        )
        return TrajectorySet(episodes, tuple(feature_names), team_size)


def load_trajectories(
    path: str | Path,
    format: "str | TrajectoryFormat | None" = None,
    action_alphabet: Iterable[str] | None = None,
) -> TrajectorySet:
    """Load a trajectory file strictly."""
    return TrajectoryLoader(strict=True, action_alphabet=action_alphabet).load(path, format)


def _record(trajectories: TrajectorySet, episode: Episode, index: int, step: TimeStep) -> dict[str, Any]:
    record: dict[str, Any] = {"episode": episode.id, "step": index}
    for agent in range(trajectories.team_size):
        record[f"{ACTION_PREFIX}{agent}"] = step.actions.get(agent)
    for name in trajectories.feature_names:
        record[name] = float(step.state[name])
    return record


def write_trajectories(
    trajectories: TrajectorySet,
    path: str | Path,
    format: "str | TrajectoryFormat | None" = None,
) -> Path:
    """Write trajectories so that loading the file gives back an equal set.

    Floats are written with their shortest round-trip representation.
    """
    path = Path(path)
    fmt = TrajectoryFormat.parse(format) if format else TrajectoryFormat.from_path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            if fmt is TrajectoryFormat.JSONL:
                schema = {
                    "feature_names": list(trajectories.feature_names),
                    "team_size": trajectories.team_size,
                }
                handle.write(json.dumps({"schema": schema}) + "\n")
                for episode in trajectories.episodes:
                    for index, step in enumerate(episode.steps):
                        record = {
                            key: value
                            for key, value in _record(trajectories, episode, index, step).items()
                            if value is not None
                        }
                        handle.write(json.dumps(record) + "\n")
            else:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(
                    [*RESERVED_KEYS]
                    + [f"{ACTION_PREFIX}{agent}" for agent in range(trajectories.team_size)]
                    + list(trajectories.feature_names)
                )
                for episode in trajectories.episodes:
                    for index, step in enumerate(episode.steps):
                        record = _record(trajectories, episode, index, step)
                        writer.writerow(
                            ["" if value is None else repr(value) if isinstance(value, float) else value
                             for value in record.values()]
                        )
    except OSError as e:
        logger.error(f"Cannot write trajectories to {path}: {e}")
        raise DataError(f"Cannot write trajectories to {path}: {e}") from e

    logger.info(f"Wrote {len(trajectories)} episode(s) to {path} ({fmt.value})")
    return path


def iterate_pairs(trajectories: TrajectorySet, target: AgentIndex) -> Iterator[tuple[StateVector, str]]:
    """(state, action of `target`) for every step, in episode and step order.

    Raises:
        DataGapError: If a step has no action for `target`
    """
    if not 0 <= target < max(trajectories.team_size, 1):
        raise DataError(f"Agent {target} outside team of {trajectories.team_size}")
    for episode in trajectories.episodes:
        for index, step in enumerate(episode.steps):
            action = step.actions.get(target)
            if action is None:
                raise DataGapError(episode.id, index, target)
            yield step.state, action


def iterate_joint(trajectories: TrajectorySet) -> Iterator[tuple[StateVector, dict[AgentIndex, str]]]:
    """(state, joint action) for every step.

    Raises:
        DataGapError: If any agent's action is missing at some step
    """
    for episode in trajectories.episodes:
        for index, step in enumerate(episode.steps):
            for agent in range(trajectories.team_size):
                if agent not in step.actions:
                    raise DataGapError(episode.id, index, agent)
            yield step.state, dict(step.actions)


def iterate_batches(trajectories: TrajectorySet, batch_size: int) -> Iterator[TrajectorySet]:
    """Consecutive slices of at most `batch_size` episodes."""
    if batch_size < 1:
        raise ValueError(f"batch_size must be positive, got {batch_size}")
    for start in range(0, len(trajectories.episodes), batch_size):
        yield trajectories.with_episodes(trajectories.episodes[start:start + batch_size])
