"""Fidelity scoring, policy grids, top-k inspection and deployment benchmarks."""
import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from PIL import Image

from argextract.config import get_config
from argextract.errors import DataError
from argextract.models.agent import AAAgentModel, StateVector, TeamModel
from argextract.models.environment import (
    POSITION_RANGE,
    VELOCITY_RANGE,
    Environment,
    EpisodeStats,
    MountainCarParams,
    TakeawayParams,
)
from argextract.models.evaluation import FidelityReport, InspectionReport, PolicyGrid, PolicyGridDiff
from argextract.models.trajectory import Episode, TrajectorySet
from argextract.services.agents import select_joint_action
from argextract.services.episodes import Policy, as_joint_policy, run_episodes

logger = logging.getLogger(__name__)

FEATURE_RANGES = {"position": POSITION_RANGE, "velocity": VELOCITY_RANGE}
ASCII_SYMBOLS = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"


class NoDataError(DataError):
    """Raised when an evaluation has no steps to score."""
    pass


class GridRangeError(DataError):
    """Raised for a policy grid outside the state space."""
    pass


def fidelity(team: TeamModel, trajectories: TrajectorySet, workers: int | None = None) -> FidelityReport:
    """Per-agent share of logged steps on which the model picks the logged action.

    Every logged step counts once, regardless of episode length.

    Raises:
        NoDataError: If there are no steps to score
        DataError: If the trajectories log a different team size
    """
    if trajectories.step_count == 0:
        raise NoDataError("Cannot compute fidelity on an empty trajectory set")
    if trajectories.team_size != team.size:
        raise DataError(
            f"Trajectories log {trajectories.team_size} agent(s) but the model has {team.size}"
        )

    def score(episode: Episode) -> tuple[list[int], list[int]]:
        agree = [0] * team.size
        seen = [0] * team.size
        for step in episode.steps:
            joint = select_joint_action(team, step.state)
            for agent, logged in step.actions.items():
                seen[agent] += 1
                agree[agent] += int(joint[agent] == logged)
        return agree, seen

    workers = workers if workers is not None else get_config().WORKERS
    if workers <= 1:
        partials = [score(episode) for episode in trajectories.episodes]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            partials = list(executor.map(score, trajectories.episodes))

    agree = [sum(p[0][a] for p in partials) for a in range(team.size)]
    seen = [sum(p[1][a] for p in partials) for a in range(team.size)]
    report = FidelityReport(
        per_agent={a: agree[a] / seen[a] for a in range(team.size) if seen[a]},
        step_counts={a: seen[a] for a in range(team.size) if seen[a]},
    )
    logger.info(f"Fidelity over {trajectories.step_count} step(s): {report.overall:.4f}")
    return report


def _check_range(feature: str, bounds: tuple[float, float]) -> None:
    lo, hi = bounds
    if not lo < hi:
        raise GridRangeError(f"Empty range {bounds} for {feature}")
    domain = FEATURE_RANGES.get(feature)
    if domain is not None and (lo < domain[0] or hi > domain[1]):
        raise GridRangeError(f"Range {bounds} for {feature} leaves the state space {domain}")


def policy_grid(
    policy: Policy,
    resolution: tuple[int, int] = (20, 20),
    x_range: tuple[float, float] = POSITION_RANGE,
    y_range: tuple[float, float] = VELOCITY_RANGE,
    x_feature: str = "position",
    y_feature: str = "velocity",
    agent: int | None = None,
) -> PolicyGrid:
    """Actions at the centre of every cell of a rows x cols grid.

    `agent` selects whose action is recorded: a single agent's own index by
    default, agent 0 for teams and callables.

    Raises:
        GridRangeError: If the resolution is empty or a range leaves the state space
    """
    rows, cols = resolution
    if rows < 1 or cols < 1:
        raise GridRangeError(f"Grid resolution must be at least 1x1, got {rows}x{cols}")
    _check_range(x_feature, x_range)
    _check_range(y_feature, y_range)

    if agent is None:
        agent = policy.self_index if isinstance(policy, AAAgentModel) else 0
    joint = as_joint_policy(policy)
    x_width = (x_range[1] - x_range[0]) / rows
    y_width = (y_range[1] - y_range[0]) / cols
    cells = tuple(
        tuple(
            joint(StateVector({
                x_feature: x_range[0] + (i + 0.5) * x_width,
                y_feature: y_range[0] + (j + 0.5) * y_width,
            }))[agent]
            for j in range(cols)
        )
        for i in range(rows)
    )
    alphabet = frozenset()
    if isinstance(policy, (TeamModel, AAAgentModel)):
        alphabet = policy.catalog.action_alphabet
    return PolicyGrid(x_feature, y_feature, tuple(x_range), tuple(y_range), cells, alphabet)


def diff_grids(a: PolicyGrid, b: PolicyGrid) -> PolicyGridDiff:
    """Cells whose actions differ, as (row, col, action in a, action in b)."""
    if a.resolution != b.resolution:
        raise DataError(f"Cannot compare grids of resolution {a.resolution} and {b.resolution}")
    return PolicyGridDiff(tuple(
        (i, j, left, right)
        for i, (row_a, row_b) in enumerate(zip(a.cells, b.cells))
        for j, (left, right) in enumerate(zip(row_a, row_b))
        if left != right
    ))


def write_grid_csv(grid: PolicyGrid, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow([f"{grid.x_feature}_bin", f"{grid.y_feature}_bin", "action"])
        writer.writerows(grid.csv_rows())
    return path


def _labels(grid: PolicyGrid) -> list[str]:
    return sorted(grid.alphabet or {label for row in grid.cells for label in row})


def render_grid_ascii(grid: PolicyGrid) -> str:
    """Text picture: x feature left to right, y feature bottom to top, plus a legend."""
    labels = _labels(grid)
    if len(labels) > len(ASCII_SYMBOLS):
        raise DataError(f"Too many actions ({len(labels)}) for a text rendering")
    symbol = {label: ASCII_SYMBOLS[k] for k, label in enumerate(labels)}
    rows, cols = grid.resolution
    lines = [
        "".join(symbol[grid.cells[i][j]] for i in range(rows))
        for j in reversed(range(cols))
    ]
    lines.append("")
    lines.extend(f"{symbol[label]} = {label}" for label in labels)
    return "\n".join(lines)


def render_grid_pgm(grid: PolicyGrid, path: str | Path, scale: int = 1) -> Path:
    """Grayscale image; actions map to evenly spaced gray levels in alphabetical order."""
    labels = _labels(grid)
    steps = max(len(labels) - 1, 1)
    level = {label: round(255 * k / steps) for k, label in enumerate(labels)}
    rows, cols = grid.resolution
    image = Image.new("L", (rows, cols))
    image.putdata([level[grid.cells[i][j]] for j in reversed(range(cols)) for i in range(rows)])
    if scale > 1:
        image = image.resize((rows * scale, cols * scale), Image.Resampling.NEAREST)
    path = Path(path)
    image.save(path, format="PPM")
    return path


def inspect_top_k(agent: AAAgentModel, k: int) -> InspectionReport:
    """The agent's k highest-valued primary arguments."""
    if k < 1:
        raise DataError(f"k must be at least 1, got {k}")
    primary = [a.id for a in agent.catalog.primary(agent.self_index)]
    ranked = sorted(primary, key=lambda a: agent.values[a], reverse=True)[:k]
    return InspectionReport({agent.self_index: tuple((a, agent.values[a]) for a in ranked)})


def inspect_team(team: TeamModel, k: int) -> InspectionReport:
    """Top-k primary arguments for every member."""
    rows = {}
    for member in team.members:
        rows.update(inspect_top_k(member, k).per_agent)
    return InspectionReport(rows)


def benchmark_deployment(
    policy: Policy,
    env: "str | Environment",
    episodes: int,
    seed: int,
    warmup: int | None = None,
    mc_params: MountainCarParams | None = None,
    takeaway_params: TakeawayParams | None = None,
) -> EpisodeStats:
    """Time a policy over fresh episodes after discarding warm-up episodes.

    Runs single-threaded so latencies are not skewed by contention.
    """
    warmup = get_config().BENCH_WARMUP_EPISODES if warmup is None else warmup
    if warmup > 0:
        run_episodes(policy, env, warmup, seed + 1, mc_params=mc_params,
                     takeaway_params=takeaway_params, workers=1)
    run = run_episodes(policy, env, episodes, seed, mc_params=mc_params,
                       takeaway_params=takeaway_params, workers=1)
    stats = run.stats
    logger.info(
        f"Benchmark: {stats.mean_wall_time * 1000:.3f} +/- {stats.std_wall_time * 1000:.3f} ms per episode"
    )
    return stats
