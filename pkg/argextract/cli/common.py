"""Shared CLI plumbing: exit codes, run directories and option parsing."""
import logging
from pathlib import Path
from typing import Any

import click

from argextract.config import RunConfig, get_config
from argextract.errors import DataError, InvariantViolation
from argextract.models.arguments import ArgumentCatalog
from argextract.models.environment import Environment, GridSpec, MountainCarParams, TakeawayParams

logger = logging.getLogger(__name__)

# Labels tried, in order, as an agent's fallback action
PREFERRED_DEFAULT_ACTIONS = ("no_push", "tackle")


class DataFailure(click.ClickException):
    """Input data or schema problem."""
    exit_code = 2


class InvariantFailure(click.ClickException):
    """Internal consistency check failed."""
    exit_code = 3


class ArgextractGroup(click.Group):
    """Command group mapping failures to exit codes.

    0 success, 1 usage error, 2 data or schema error, 3 invariant violation.
    """

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = 1
            raise

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = 1
            raise
        except DataError as e:
            logger.error(f"{ctx.info_name}: {e}")
            raise DataFailure(str(e)) from e
        except InvariantViolation as e:
            logger.error(f"{ctx.info_name}: invariant violated: {e}")
            raise InvariantFailure(str(e)) from e


def require_seed(run_config: RunConfig) -> int:
    if run_config.seed is None:
        raise click.UsageError("--seed is required (or set \"seed\" in the run configuration)")
    return run_config.seed


def require_path(value: str | None, option: str) -> Path:
    if value is None:
        raise click.UsageError(f"{option} is required")
    path = Path(value)
    if not path.exists():
        raise click.UsageError(f"{option} {path} does not exist")
    return path


def output_dir(run_config: RunConfig, command: str) -> Path:
    """The run directory for a command, created if missing."""
    directory = Path(run_config.output) if run_config.output else Path(get_config().RUNS_DIR) / command
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def manifest_config(run_config: RunConfig) -> dict[str, Any]:
    """Run configuration as recorded in manifests.

    The output location and thread count are left out; neither changes results.
    """
    document = run_config.to_dict()
    del document["output"], document["workers"]
    return document


def mc_settings(run_config: RunConfig) -> tuple[MountainCarParams, GridSpec]:
    config = get_config()
    overrides = dict(run_config.mc)
    grid = GridSpec(
        position_bins=int(overrides.pop("position_bins", config.MC_GRID_BINS)),
        velocity_bins=int(overrides.pop("velocity_bins", config.MC_GRID_BINS)),
    )
    return MountainCarParams.from_config(config, overrides), grid


def takeaway_settings(run_config: RunConfig) -> TakeawayParams:
    try:
        return TakeawayParams.from_config(get_config(), run_config.takeaway)
    except TypeError as e:
        raise click.UsageError(f"Invalid takeaway settings: {e}") from e


def default_action_for(catalog: ArgumentCatalog, requested: str | None = None) -> str:
    """The fallback action recorded in extracted models."""
    if requested is not None:
        if requested not in catalog.action_alphabet:
            raise click.BadParameter(
                f"'{requested}' is not in the action alphabet {sorted(catalog.action_alphabet)}",
                param_hint="--default-action",
            )
        return requested
    for label in PREFERRED_DEFAULT_ACTIONS:
        if label in catalog.action_alphabet:
            return label
    return sorted(catalog.action_alphabet)[0]


def parse_resolution(value: str) -> tuple[int, int]:
    """Parse ``RxC`` into (rows, cols)."""
    try:
        rows, cols = (int(part) for part in value.lower().split("x"))
    except ValueError:
        raise click.BadParameter(f"expected RxC, got '{value}'", param_hint="--res") from None
    if rows < 1 or cols < 1:
        raise click.BadParameter("resolution must be at least 1x1", param_hint="--res")
    return rows, cols


def environment_of(run_config: RunConfig) -> Environment:
    try:
        return Environment(run_config.env)
    except ValueError:
        raise click.UsageError(
            f"Unknown environment '{run_config.env}'. Choose from {[e.value for e in Environment]}"
        ) from None
