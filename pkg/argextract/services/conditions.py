"""Condition kinds: the registered predicate families argument conditions refer to.

Conditions are data (a kind name plus parameters) so catalogs can be written
to disk and reloaded. Each kind declares the parameters it needs, the state
features it reads and the predicate itself.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from argextract.errors import DataError
from argextract.models.agent import StateVector
from argextract.models.arguments import ActionArgument, ArgumentCatalog, ConditionSpec

logger = logging.getLogger(__name__)

Params = Mapping[str, Any]


class UnknownConditionError(DataError):
    """Raised for a condition kind that is not registered."""
    pass


class InvalidConditionError(DataError):
    """Raised when condition parameters do not fit their kind."""
    pass


class MissingFeatureError(DataError):
    """Raised when a state lacks a feature a condition reads."""

    def __init__(self, feature: str, kind: str | None = None):
        self.feature = feature
        where = f" required by condition '{kind}'" if kind else ""
        super().__init__(f"State is missing feature '{feature}'{where}")


@dataclass(frozen=True)
class ConditionKind:
    """A predicate family with its parameter schema."""

    name: str
    required: tuple[str, ...]
    features: Callable[[Params], list[str]]
    predicate: Callable[[Params, StateVector], bool]
    optional: tuple[str, ...] = ()
    check: Callable[[Params], str | None] = field(default=lambda params: None)


CONDITION_KINDS: dict[str, ConditionKind] = {}


def register_condition(kind: ConditionKind) -> ConditionKind:
    """Add a condition kind to the registry."""
    if kind.name in CONDITION_KINDS:
        raise ValueError(f"Condition kind '{kind.name}' is already registered")
    CONDITION_KINDS[kind.name] = kind
    return kind


def get_condition_kind(name: str) -> ConditionKind:
    try:
        return CONDITION_KINDS[name]
    except KeyError:
        raise UnknownConditionError(
            f"Unknown condition kind '{name}'. Registered kinds: {sorted(CONDITION_KINDS)}"
        ) from None


def validate_condition(spec: ConditionSpec) -> None:
    """Check a condition's parameters against its kind's schema.

    Raises:
        UnknownConditionError: If the kind is not registered
        InvalidConditionError: If parameters are missing, unexpected or out of range
    """
    kind = get_condition_kind(spec.kind)
    missing = [name for name in kind.required if name not in spec.params]
    if missing:
        raise InvalidConditionError(f"Condition '{spec.kind}' is missing parameter(s) {missing}")
    unexpected = sorted(set(spec.params) - set(kind.required) - set(kind.optional))
    if unexpected:
        raise InvalidConditionError(
            f"Condition '{spec.kind}' does not take parameter(s) {unexpected}"
        )
    problem = kind.check(spec.params)
    if problem:
        raise InvalidConditionError(f"Condition '{spec.kind}': {problem}")


def condition_features(spec: ConditionSpec) -> list[str]:
    """Names of the state features a condition reads."""
    return get_condition_kind(spec.kind).features(spec.params)


def evaluate_condition(spec: ConditionSpec, state: StateVector) -> bool:
    """Evaluate a condition against a state.

    Raises:
        UnknownConditionError: If the kind is not registered
        MissingFeatureError: If the state lacks a feature the condition reads
    """
    kind = get_condition_kind(spec.kind)
    for feature in kind.features(spec.params):
        if feature not in state:
            raise MissingFeatureError(feature, spec.kind)
    return kind.predicate(spec.params, state)


def in_interval(value: float, lo: float, hi: float, closed: bool = False) -> bool:
    """Membership in [lo, hi), or [lo, hi] when `closed`."""
    return lo <= value < hi or (closed and value == hi)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _check_bounds(params: Params, *pairs: tuple[str, str]) -> str | None:
    for lo_name, hi_name in pairs:
        lo, hi = params[lo_name], params[hi_name]
        if not (_is_number(lo) and _is_number(hi)):
            return f"{lo_name}/{hi_name} must be finite numbers"
        if lo >= hi:
            return f"{lo_name}={lo} must be below {hi_name}={hi}"
    return None


def _check_indices(params: Params, index: str, count: str) -> str | None:
    value, total = params[index], params[count]
    if not isinstance(value, int) or not isinstance(total, int):
        return f"{index} and {count} must be integers"
    if not 1 <= value <= total:
        return f"{index}={value} outside 1..{total}"
    return None


def _argmin(values: list[tuple[int, float]]) -> int | None:
    """Index with the smallest value; the lowest index wins ties."""
    best: tuple[float, int] | None = None
    for index, value in values:
        if best is None or (value, index) < best:
            best = (value, index)
    return None if best is None else best[1]


# Interval conditions

def _interval2d(params: Params, state: StateVector) -> bool:
    return in_interval(
        state["position"], params["pos_lo"], params["pos_hi"], bool(params.get("pos_closed", 0))
    ) and in_interval(
        state["velocity"], params["vel_lo"], params["vel_hi"], bool(params.get("vel_closed", 0))
    )


register_condition(ConditionKind(
    name="interval2d",
    required=("pos_lo", "pos_hi", "vel_lo", "vel_hi"),
    optional=("pos_closed", "vel_closed"),
    features=lambda params: ["position", "velocity"],
    predicate=_interval2d,
    check=lambda params: _check_bounds(params, ("pos_lo", "pos_hi"), ("vel_lo", "vel_hi")),
))


def _check_interval(params: Params) -> str | None:
    if not isinstance(params["feature"], str) or not params["feature"]:
        return "feature must be a non-empty name"
    return _check_bounds(params, ("lo", "hi"))


register_condition(ConditionKind(
    name="interval",
    required=("feature", "lo", "hi"),
    optional=("closed",),
    features=lambda params: [str(params["feature"])],
    predicate=lambda params, state: in_interval(
        state[params["feature"]], params["lo"], params["hi"], bool(params.get("closed", 0))
    ),
    check=_check_interval,
))


# Takeaway conditions. Taker and keeper indices are 1-based; `holder` is the
# 1-based index of the keeper holding the ball.

def _closest_to_holder(params: Params, state: StateVector) -> bool:
    takers = int(params["takers"])
    distances = [(k, state[f"t{k}_dist_holder"]) for k in range(1, takers + 1)]
    return _argmin(distances) == int(params["taker"])


register_condition(ConditionKind(
    name="closest_to_holder",
    required=("taker", "takers"),
    features=lambda params: [f"t{k}_dist_holder" for k in range(1, int(params["takers"]) + 1)],
    predicate=_closest_to_holder,
    check=lambda params: _check_indices(params, "taker", "takers"),
))


def _check_threshold(params: Params) -> str | None:
    if not isinstance(params["keeper"], int) or params["keeper"] < 1:
        return "keeper must be a positive integer"
    if not _is_number(params["threshold"]):
        return "threshold must be a finite number"
    return None


register_condition(ConditionKind(
    name="keeper_open",
    required=("keeper", "threshold"),
    features=lambda params: [f"k{params['keeper']}_openness", "holder"],
    predicate=lambda params, state: (
        int(state["holder"]) != int(params["keeper"])
        and state[f"k{params['keeper']}_openness"] >= params["threshold"]
    ),
    check=_check_threshold,
))

register_condition(ConditionKind(
    name="keeper_far",
    required=("keeper", "threshold"),
    features=lambda params: [f"k{params['keeper']}_min_taker_dist", "holder"],
    predicate=lambda params, state: (
        int(state["holder"]) != int(params["keeper"])
        and state[f"k{params['keeper']}_min_taker_dist"] >= params["threshold"]
    ),
    check=_check_threshold,
))


def _closest_keeper(params: Params, state: StateVector, measure: str) -> bool:
    taker, keeper, keepers = int(params["taker"]), int(params["keeper"]), int(params["keepers"])
    holder = int(state["holder"])
    candidates = [
        (p, state[f"t{taker}_k{p}_{measure}"]) for p in range(1, keepers + 1) if p != holder
    ]
    return _argmin(candidates) == keeper


def _keeper_measure_features(params: Params, measure: str) -> list[str]:
    taker = params["taker"]
    return ["holder"] + [f"t{taker}_k{p}_{measure}" for p in range(1, int(params["keepers"]) + 1)]


def _check_taker_keeper(params: Params) -> str | None:
    if not isinstance(params["taker"], int) or params["taker"] < 1:
        return "taker must be a positive integer"
    return _check_indices(params, "keeper", "keepers")


register_condition(ConditionKind(
    name="min_angle",
    required=("taker", "keeper", "keepers"),
    features=lambda params: _keeper_measure_features(params, "angle"),
    predicate=lambda params, state: _closest_keeper(params, state, "angle"),
    check=_check_taker_keeper,
))

register_condition(ConditionKind(
    name="min_dist",
    required=("taker", "keeper", "keepers"),
    features=lambda params: _keeper_measure_features(params, "dist"),
    predicate=lambda params, state: _closest_keeper(params, state, "dist"),
    check=_check_taker_keeper,
))


# Catalog index

IntervalKey = tuple[float, float, bool]


@dataclass
class IntervalIndex:
    """Bucketed lookup of a catalog's interval2d arguments.

    Arguments are grouped by their distinct position and velocity intervals;
    a query tests each distinct interval once and reads the matching cells.
    Arguments of any other kind are evaluated directly.
    """

    position_keys: list[IntervalKey]
    velocity_keys: list[IntervalKey]
    cells: dict[tuple[IntervalKey, IntervalKey], list[int]]
    direct: list[int]

    @classmethod
    def build(cls, arguments: tuple[ActionArgument, ...]) -> "IntervalIndex":
        position_keys: dict[IntervalKey, None] = {}
        velocity_keys: dict[IntervalKey, None] = {}
        cells: dict[tuple[IntervalKey, IntervalKey], list[int]] = {}
        direct: list[int] = []
        for k, argument in enumerate(arguments):
            params = argument.condition.params
            if argument.condition.kind != "interval2d":
                direct.append(k)
                continue
            position = (params["pos_lo"], params["pos_hi"], bool(params.get("pos_closed", 0)))
            velocity = (params["vel_lo"], params["vel_hi"], bool(params.get("vel_closed", 0)))
            position_keys[position] = None
            velocity_keys[velocity] = None
            cells.setdefault((position, velocity), []).append(k)
        return cls(list(position_keys), list(velocity_keys), cells, direct)

    def query(self, arguments: tuple[ActionArgument, ...], state: StateVector) -> list[int]:
        """Catalog positions of the applicable arguments, ascending."""
        hits: list[int] = []
        if self.cells:
            for feature in ("position", "velocity"):
                if feature not in state:
                    raise MissingFeatureError(feature, "interval2d")
            x, v = state["position"], state["velocity"]
            positions = [key for key in self.position_keys if in_interval(x, *key)]
            velocities = [key for key in self.velocity_keys if in_interval(v, *key)]
            for p in positions:
                for q in velocities:
                    hits.extend(self.cells.get((p, q), ()))
        for k in self.direct:
            if evaluate_condition(arguments[k].condition, state):
                hits.append(k)
        hits.sort()
        return hits


def catalog_index(catalog: ArgumentCatalog) -> IntervalIndex:
    """The catalog's lookup index, built on first use."""
    index = catalog.memo.get("index")
    if index is None:
        index = IntervalIndex.build(catalog.arguments)
        catalog.memo["index"] = index
        logger.debug(
            f"Indexed {len(catalog)} arguments: {len(index.cells)} interval cells, "
            f"{len(index.direct)} evaluated directly"
        )
    return index


def validate_catalog(catalog: ArgumentCatalog) -> None:
    """Validate every condition in a catalog."""
    for argument in catalog.arguments:
        try:
            validate_condition(argument.condition)
        except DataError as e:
            raise type(e)(f"Argument '{argument.id}': {e}") from e
