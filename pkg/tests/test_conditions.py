"""Tests for condition kinds and the catalog index."""
import pytest

from argextract.models.arguments import ActionArgument, ArgumentCatalog, ConditionSpec
from argextract.models.environment import POSITION_RANGE, VELOCITY_RANGE
from argextract.services.agents import applicable_arguments
from argextract.services.conditions import (
    CONDITION_KINDS,
    ConditionKind,
    InvalidConditionError,
    MissingFeatureError,
    UnknownConditionError,
    catalog_index,
    condition_features,
    evaluate_condition,
    in_interval,
    register_condition,
    validate_catalog,
    validate_condition,
)
from argextract.services.mountain_car import generate_mc_catalog
from conftest import state


class TestInInterval:
    def test_half_open(self):
        assert in_interval(0.0, 0.0, 1.0)
        assert in_interval(0.999, 0.0, 1.0)
        assert not in_interval(1.0, 0.0, 1.0)
        assert not in_interval(-0.001, 0.0, 1.0)

    def test_closed_includes_upper_bound(self):
        assert in_interval(1.0, 0.0, 1.0, closed=True)
        assert not in_interval(1.001, 0.0, 1.0, closed=True)


class TestValidation:
    def test_unknown_kind(self):
        with pytest.raises(UnknownConditionError):
            validate_condition(ConditionSpec("teleport", {}))

    def test_missing_parameter(self):
        with pytest.raises(InvalidConditionError, match="missing"):
            validate_condition(ConditionSpec("interval", {"feature": "x", "lo": 0.0}))

    def test_unexpected_parameter(self):
        with pytest.raises(InvalidConditionError, match="does not take"):
            validate_condition(ConditionSpec("interval", {"feature": "x", "lo": 0.0, "hi": 1.0, "step": 2}))

    def test_empty_interval(self):
        with pytest.raises(InvalidConditionError):
            validate_condition(ConditionSpec("interval", {"feature": "x", "lo": 1.0, "hi": 1.0}))

    def test_keeper_index_out_of_range(self):
        with pytest.raises(InvalidConditionError):
            validate_condition(ConditionSpec("min_dist", {"taker": 1, "keeper": 5, "keepers": 4}))

    def test_valid_conditions_pass(self):
        validate_condition(ConditionSpec("closest_to_holder", {"taker": 2, "takers": 3}))
        validate_condition(ConditionSpec("keeper_open", {"keeper": 1, "threshold": 0.7}))

    def test_catalog_error_names_argument(self):
        catalog = ArgumentCatalog(
            (ActionArgument("broken", 0, "go", ConditionSpec("interval", {"feature": "x", "lo": 2, "hi": 1})),),
            frozenset({"go"}),
            team_size=1,
        )
        with pytest.raises(InvalidConditionError, match="broken"):
            validate_catalog(catalog)

    def test_duplicate_registration_rejected(self):
        existing = CONDITION_KINDS["interval"]
        with pytest.raises(ValueError):
            register_condition(ConditionKind(
                name="interval", required=(), features=existing.features, predicate=existing.predicate,
            ))


class TestEvaluation:
    def test_missing_feature(self):
        spec = ConditionSpec("interval", {"feature": "x", "lo": 0.0, "hi": 1.0})
        with pytest.raises(MissingFeatureError) as excinfo:
            evaluate_condition(spec, state(y=0.5))
        assert excinfo.value.feature == "x"

    def test_features_listed(self):
        spec = ConditionSpec("closest_to_holder", {"taker": 1, "takers": 2})
        assert condition_features(spec) == ["t1_dist_holder", "t2_dist_holder"]

    def test_interval2d_closed_edges(self):
        spec = ConditionSpec("interval2d", {
            "pos_lo": 0.0, "pos_hi": 0.6, "vel_lo": 0.0, "vel_hi": 0.07, "pos_closed": 1, "vel_closed": 1,
        })
        assert evaluate_condition(spec, state(position=0.6, velocity=0.07))
        open_spec = ConditionSpec("interval2d", {"pos_lo": 0.0, "pos_hi": 0.6, "vel_lo": 0.0, "vel_hi": 0.07})
        assert not evaluate_condition(open_spec, state(position=0.6, velocity=0.0))

    def test_closest_to_holder_ties_go_to_lowest_index(self):
        features = state(t1_dist_holder=2.0, t2_dist_holder=1.0, t3_dist_holder=1.0)
        assert evaluate_condition(ConditionSpec("closest_to_holder", {"taker": 2, "takers": 3}), features)
        assert not evaluate_condition(ConditionSpec("closest_to_holder", {"taker": 3, "takers": 3}), features)

    def test_keeper_open_excludes_holder(self):
        spec = ConditionSpec("keeper_open", {"keeper": 2, "threshold": 0.5})
        assert evaluate_condition(spec, state(holder=1.0, k2_openness=0.8))
        assert not evaluate_condition(spec, state(holder=2.0, k2_openness=0.8))
        assert not evaluate_condition(spec, state(holder=1.0, k2_openness=0.2))

    def test_keeper_far_threshold_inclusive(self):
        spec = ConditionSpec("keeper_far", {"keeper": 3, "threshold": 15.0})
        assert evaluate_condition(spec, state(holder=1.0, k3_min_taker_dist=15.0))

    def test_min_angle_skips_holder(self):
        spec = ConditionSpec("min_angle", {"taker": 1, "keeper": 3, "keepers": 3})
        # keeper 1 holds the ball and reports angle 0; keeper 3 has the smallest real angle
        features = state(holder=1.0, t1_k1_angle=0.0, t1_k2_angle=40.0, t1_k3_angle=10.0)
        assert evaluate_condition(spec, features)

    def test_min_dist(self):
        spec = ConditionSpec("min_dist", {"taker": 2, "keeper": 2, "keepers": 3})
        features = state(holder=3.0, t2_k1_dist=8.0, t2_k2_dist=4.0, t2_k3_dist=0.5)
        assert evaluate_condition(spec, features)


class TestCatalogIndex:
    def test_mc_partition_property(self, rng):
        catalog = generate_mc_catalog()
        assert len(catalog) == 1200
        positions = rng.uniform(*POSITION_RANGE, size=10_000)
        velocities = rng.uniform(*VELOCITY_RANGE, size=10_000)
        for x, v in zip(positions, velocities):
            applicable = applicable_arguments(catalog, state(position=float(x), velocity=float(v)))
            assert len(applicable) == 3
            assert len({a.condition.param_key() for a in applicable}) == 1
            assert {a.action for a in applicable} == catalog.action_alphabet

    def test_domain_corners_are_covered(self):
        catalog = generate_mc_catalog()
        for x in POSITION_RANGE:
            for v in VELOCITY_RANGE:
                assert len(applicable_arguments(catalog, state(position=x, velocity=v))) == 3

    def test_index_agrees_with_direct_evaluation(self, rng, small_mc_catalog):
        for _ in range(500):
            features = state(
                position=float(rng.uniform(*POSITION_RANGE)), velocity=float(rng.uniform(*VELOCITY_RANGE)),
            )
            direct = [a for a in small_mc_catalog.arguments if evaluate_condition(a.condition, features)]
            assert applicable_arguments(small_mc_catalog, features) == direct

    def test_index_is_built_once(self, small_mc_catalog):
        assert catalog_index(small_mc_catalog) is catalog_index(small_mc_catalog)

    def test_mixed_kinds_keep_catalog_order(self):
        grid = ConditionSpec("interval2d", {"pos_lo": -1.2, "pos_hi": 0.6, "vel_lo": -0.07, "vel_hi": 0.07})
        catalog = ArgumentCatalog(
            (
                ActionArgument("slow", 0, "no_push", ConditionSpec("interval", {"feature": "velocity", "lo": -0.01, "hi": 0.01})),
                ActionArgument("anywhere", 0, "push_left", grid),
                ActionArgument("right_half", 0, "push_right", ConditionSpec("interval", {"feature": "position", "lo": 0.0, "hi": 0.6})),
            ),
            frozenset({"no_push", "push_left", "push_right"}),
            team_size=1,
        )
        ids = [a.id for a in applicable_arguments(catalog, state(position=0.1, velocity=0.0))]
        assert ids == ["slow", "anywhere", "right_half"]

    def test_missing_feature_in_indexed_query(self, small_mc_catalog):
        with pytest.raises(MissingFeatureError):
            applicable_arguments(small_mc_catalog, state(position=0.0))
