"""Mountain Car simulator, grid argument catalog and baseline policies."""
import logging
import math

import numpy as np

from argextract.models.agent import AAAgentModel, StateVector
from argextract.models.arguments import ActionArgument, ArgumentCatalog, ConditionSpec, ValueAssignment
from argextract.models.environment import (
    POSITION_RANGE,
    START_POSITION_RANGE,
    VELOCITY_RANGE,
    GridSpec,
    MountainCarAction,
    MountainCarParams,
    MountainCarState,
)

logger = logging.getLogger(__name__)

FEATURE_NAMES = ("position", "velocity")
ACTIONS = tuple(action.value for action in MountainCarAction)
DEFAULT_ACTION = MountainCarAction.NO_PUSH.value


def mc_step(
    state: MountainCarState,
    action: "str | MountainCarAction",
    params: MountainCarParams | None = None,
) -> MountainCarState:
    """Advance the car by one step.

    Raises:
        InvalidActionError: If `action` is not a Mountain Car action
    """
    params = params or MountainCarParams()
    direction = MountainCarAction.parse(action).direction
    velocity = state.velocity + direction * params.force - params.gravity_scale * math.cos(3 * state.position)
    velocity = min(max(velocity, VELOCITY_RANGE[0]), VELOCITY_RANGE[1])
    position = min(max(state.position + velocity, POSITION_RANGE[0]), POSITION_RANGE[1])
    if position == POSITION_RANGE[0] and velocity < 0:
        velocity = 0.0
    return MountainCarState(position, velocity)


def mc_is_terminal(state: MountainCarState, params: MountainCarParams | None = None) -> bool:
    return state.position >= (params or MountainCarParams()).goal_position


def mc_reset(rng: np.random.Generator) -> MountainCarState:
    """Start at rest, uniformly placed in the valley."""
    return MountainCarState(float(rng.uniform(*START_POSITION_RANGE)), 0.0)


def scripted_mc_policy(state: "MountainCarState | StateVector") -> str:
    """Push in the direction of travel; push left from rest."""
    velocity = state.velocity if isinstance(state, MountainCarState) else state["velocity"]
    if velocity > 0:
        return MountainCarAction.PUSH_RIGHT.value
    return MountainCarAction.PUSH_LEFT.value


def bin_edges(lo: float, hi: float, bins: int) -> list[float]:
    """`bins + 1` edges; the last edge is exactly `hi`."""
    width = (hi - lo) / bins
    return [lo + width * k for k in range(bins)] + [hi]


def generate_mc_catalog(grid: GridSpec | None = None) -> ArgumentCatalog:
    """One argument per (position bin, velocity bin, action).

    Bins are half-open except the last on each axis, which is closed above,
    so every in-range state lies in exactly one cell.
    """
    grid = grid or GridSpec()
    positions = bin_edges(*POSITION_RANGE, grid.position_bins)
    velocities = bin_edges(*VELOCITY_RANGE, grid.velocity_bins)
    # zero-padded so id order follows bin order
    pos_width = max(2, len(str(grid.position_bins - 1)))
    vel_width = max(2, len(str(grid.velocity_bins - 1)))
    arguments = []
    for i in range(grid.position_bins):
        for j in range(grid.velocity_bins):
            condition = ConditionSpec(
                kind="interval2d",
                params={
                    "pos_lo": positions[i],
                    "pos_hi": positions[i + 1],
                    "pos_closed": int(i == grid.position_bins - 1),
                    "vel_lo": velocities[j],
                    "vel_hi": velocities[j + 1],
                    "vel_closed": int(j == grid.velocity_bins - 1),
                },
            )
            for action in ACTIONS:
                arguments.append(
                    ActionArgument(
                        id=f"p{i:0{pos_width}d}_v{j:0{vel_width}d}_{action}",
                        target=0,
                        action=action,
                        condition=condition,
                    )
                )
    catalog = ArgumentCatalog(tuple(arguments), frozenset(ACTIONS), team_size=1)
    logger.info(f"Generated Mountain Car catalog: {len(catalog)} arguments over {grid.cells} cells")
    return catalog


def random_grid_agent(
    catalog: ArgumentCatalog,
    rng: np.random.Generator,
    default_action: str = DEFAULT_ACTION,
) -> AAAgentModel:
    """An agent with a uniformly random strict valuation over the catalog."""
    values = rng.permutation(len(catalog)) + 1
    assignment = ValueAssignment({a: int(v) for a, v in zip(catalog.ids, values)})
    return AAAgentModel(catalog, assignment, 0, default_action)
