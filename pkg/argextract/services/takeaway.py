"""Synthetic takeaway field: geometric states, the taker argument catalog and ground-truth teams.

Keepers and takers are placed on a square field; the features the taker
arguments read (distances, angles at the ball holder, keeper openness) are
computed from those positions. No ball physics is simulated.
"""
import logging
import math

import numpy as np
from shapely.geometry import Point, box

from argextract.models.agent import AAAgentModel, StateVector, TeamModel
from argextract.models.arguments import ActionArgument, ArgumentCatalog, ConditionSpec
from argextract.models.environment import TakeawayFeatureState, TakeawayParams
from argextract.models.extraction import Ordering
from argextract.services.extraction import merge_team_orderings

logger = logging.getLogger(__name__)

TACKLE = "tackle"
TEMPLATES = ("OpenKeeper", "FarKeeper", "MinAngle", "MinDist")


def mark_action(keeper: int) -> str:
    return f"mark_k{keeper}"


def takeaway_actions(params: TakeawayParams) -> tuple[str, ...]:
    return (TACKLE,) + tuple(mark_action(p) for p in range(1, params.keepers + 1))


def takeaway_feature_names(params: TakeawayParams) -> tuple[str, ...]:
    """Feature schema of generated states, in a fixed order."""
    names = ["holder"]
    for i in range(1, params.takers + 1):
        names.append(f"t{i}_dist_holder")
        for p in range(1, params.keepers + 1):
            names.extend([f"t{i}_k{p}_dist", f"t{i}_k{p}_angle"])
    for p in range(1, params.keepers + 1):
        names.extend([f"k{p}_openness", f"k{p}_min_taker_dist"])
    return tuple(names)


def angle_at(vertex: Point, a: Point, b: Point) -> float:
    """Angle a-vertex-b in degrees; 0 when either ray is degenerate."""
    ux, uy = a.x - vertex.x, a.y - vertex.y
    wx, wy = b.x - vertex.x, b.y - vertex.y
    norm = math.hypot(ux, uy) * math.hypot(wx, wy)
    if norm == 0.0:
        return 0.0
    cosine = max(-1.0, min(1.0, (ux * wx + uy * wy) / norm))
    return math.degrees(math.acos(cosine))


def closest_taker(state: StateVector, takers: int) -> int:
    """0-based index of the taker nearest the ball holder; lowest index on ties."""
    distances = [(state[f"t{k}_dist_holder"], k) for k in range(1, takers + 1)]
    return min(distances)[1] - 1


class TakeawayGenerator:
    """Samples takeaway field configurations from its own random stream."""

    def __init__(self, params: TakeawayParams | None = None, rng: np.random.Generator | None = None):
        """Initialize generator with field parameters and a random stream."""
        self.params = params or TakeawayParams()
        self.rng = rng if rng is not None else np.random.default_rng()
        self.field = box(0.0, 0.0, self.params.field_size, self.params.field_size)

    def features(
        self,
        keepers: tuple[tuple[float, float], ...],
        takers: tuple[tuple[float, float], ...],
        holder: int,
    ) -> TakeawayFeatureState:
        """Compute the feature state of one configuration (`holder` is 1-based)."""
        keeper_points = [Point(x, y) for x, y in keepers]
        taker_points = [Point(x, y) for x, y in takers]
        ball = keeper_points[holder - 1]

        features: dict[str, float] = {"holder": float(holder)}
        angles: dict[tuple[int, int], float] = {}
        for i, taker in enumerate(taker_points, start=1):
            features[f"t{i}_dist_holder"] = taker.distance(ball)
            for p, keeper in enumerate(keeper_points, start=1):
                features[f"t{i}_k{p}_dist"] = taker.distance(keeper)
                angle = 0.0 if p == holder else angle_at(ball, taker, keeper)
                angles[(i, p)] = angle
                features[f"t{i}_k{p}_angle"] = angle
        for p, keeper in enumerate(keeper_points, start=1):
            if p == holder:
                openness = 0.0
            else:
                openness = min(1.0, min(angles[(i, p)] for i in range(1, len(taker_points) + 1)) / 90.0)
            features[f"k{p}_openness"] = openness
            features[f"k{p}_min_taker_dist"] = min(taker.distance(keeper) for taker in taker_points)

        return TakeawayFeatureState(keepers, takers, holder, features)

    def _uniform_positions(self, count: int) -> np.ndarray:
        minx, miny, maxx, maxy = self.field.bounds
        return self.rng.uniform((minx, miny), (maxx, maxy), size=(count, 2))

    def sample_state(self) -> TakeawayFeatureState:
        """One configuration with uniformly placed players and a random holder."""
        keepers = self._uniform_positions(self.params.keepers)
        takers = self._uniform_positions(self.params.takers)
        holder = int(self.rng.integers(1, self.params.keepers + 1))
        return self.features(_as_tuples(keepers), _as_tuples(takers), holder)

    def sample_episode(self, length: int | None = None) -> list[TakeawayFeatureState]:
        """A random walk of configurations.

        Every player moves by a Gaussian step each tick, staying on the field;
        possession passes to another keeper with a fixed probability.
        """
        length = self.params.episode_length if length is None else length
        if length < 1:
            return []
        minx, miny, maxx, maxy = self.field.bounds
        keepers = self._uniform_positions(self.params.keepers)
        takers = self._uniform_positions(self.params.takers)
        holder = int(self.rng.integers(1, self.params.keepers + 1))

        states = [self.features(_as_tuples(keepers), _as_tuples(takers), holder)]
        for _ in range(length - 1):
            keepers = np.clip(
                keepers + self.rng.normal(0.0, self.params.step_scale, keepers.shape),
                (minx, miny), (maxx, maxy),
            )
            takers = np.clip(
                takers + self.rng.normal(0.0, self.params.step_scale, takers.shape),
                (minx, miny), (maxx, maxy),
            )
            if self.rng.random() < self.params.holder_change_probability:
                others = [p for p in range(1, self.params.keepers + 1) if p != holder]
                holder = int(others[self.rng.integers(len(others))])
            states.append(self.features(_as_tuples(keepers), _as_tuples(takers), holder))
        return states


def _as_tuples(points: np.ndarray) -> tuple[tuple[float, float], ...]:
    return tuple((float(x), float(y)) for x, y in points)


def generate_takeaway_catalog(params: TakeawayParams | None = None) -> ArgumentCatalog:
    """The five taker templates instantiated for every taker and keeper.

    Per taker, in catalog order: TackleBall, then OpenKeeper, FarKeeper,
    MinAngle and MinDist for keepers 1..K.
    """
    params = params or TakeawayParams()
    arguments = []
    for i in range(1, params.takers + 1):
        target = i - 1
        arguments.append(ActionArgument(
            id=f"TackleBall_{i}",
            target=target,
            action=TACKLE,
            condition=ConditionSpec("closest_to_holder", {"taker": i, "takers": params.takers}),
        ))
        for template in TEMPLATES:
            for p in range(1, params.keepers + 1):
                if template == "OpenKeeper":
                    condition = ConditionSpec("keeper_open", {"keeper": p, "threshold": params.open_threshold})
                elif template == "FarKeeper":
                    condition = ConditionSpec("keeper_far", {"keeper": p, "threshold": params.far_threshold})
                else:
                    kind = "min_angle" if template == "MinAngle" else "min_dist"
                    condition = ConditionSpec(kind, {"taker": i, "keeper": p, "keepers": params.keepers})
                arguments.append(ActionArgument(
                    id=f"{template}_{i}_{p}", target=target, action=mark_action(p), condition=condition,
                ))
    catalog = ArgumentCatalog(tuple(arguments), frozenset(takeaway_actions(params)), params.takers)
    logger.info(f"Generated takeaway catalog: {len(catalog)} arguments for {params.takers} takers")
    return catalog


def generate_takeaway_states(
    count: int,
    rng: np.random.Generator,
    params: TakeawayParams | None = None,
) -> tuple[list[TakeawayFeatureState], ArgumentCatalog]:
    """Independent field configurations plus the matching catalog."""
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    params = params or TakeawayParams()
    generator = TakeawayGenerator(params, rng)
    states = [generator.sample_state() for _ in range(count)]
    return states, generate_takeaway_catalog(params)


def takeaway_ground_truth_team(
    catalog: ArgumentCatalog,
    rng: np.random.Generator,
    params: TakeawayParams | None = None,
    default_action: str = TACKLE,
) -> TeamModel:
    """A random decentralized taker team shaped like a hand-written strategy.

    Each taker ranks its TackleBall argument first, then its marking arguments
    grouped by keeper (keepers in random order, the four templates in random
    order within a group), then its teammates' arguments.
    """
    params = params or TakeawayParams()
    orderings: dict[int, Ordering] = {}
    for i in range(1, params.takers + 1):
        ranked = [f"TackleBall_{i}"]
        for p in rng.permutation(params.keepers) + 1:
            block = [f"{template}_{i}_{p}" for template in TEMPLATES]
            ranked.extend(block[k] for k in rng.permutation(len(block)))
        orderings[i - 1] = Ordering(tuple(ranked))

    values = merge_team_orderings(orderings, catalog)
    members = tuple(
        AAAgentModel(catalog, values[agent], agent, default_action)
        for agent in range(catalog.team_size)
    )
    return TeamModel(catalog, members)
