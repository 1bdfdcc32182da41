"""Catalog CLI command."""
import click

from argextract.cli.common import (
    environment_of,
    manifest_config,
    mc_settings,
    output_dir,
    takeaway_settings,
)
from argextract.config import RunConfig
from argextract.models.environment import Environment
from argextract.services.mountain_car import generate_mc_catalog
from argextract.services.storage import CATALOG_FILE, save_catalog, write_manifest
from argextract.services.takeaway import generate_takeaway_catalog


@click.command("catalog")
@click.option("--env", type=click.Choice([e.value for e in Environment]), help="Environment name")
@click.option("--bins", type=click.IntRange(min=1), help="Mountain Car bins per axis")
@click.option("--output", type=click.Path(file_okay=False), help="Run directory")
@click.pass_obj
def catalog_command(run_config: RunConfig, env, bins, output):
    """Write the argument catalog of an environment."""
    run_config = run_config.override(env=env, output=output)
    if bins is not None:
        run_config = run_config.override(mc={**run_config.mc, "position_bins": bins, "velocity_bins": bins})
    directory = output_dir(run_config, "catalog")

    if environment_of(run_config) is Environment.MOUNTAIN_CAR:
        _, grid = mc_settings(run_config)
        catalog = generate_mc_catalog(grid)
    else:
        catalog = generate_takeaway_catalog(takeaway_settings(run_config))

    path = save_catalog(catalog, directory / CATALOG_FILE)
    write_manifest(directory, "catalog", manifest_config(run_config), outputs=[path])
    click.echo(f"Wrote {len(catalog)} arguments to {path}")
    click.echo("✅ Catalog generation completed!")
