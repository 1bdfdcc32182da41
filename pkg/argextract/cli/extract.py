"""Model extraction CLI command."""
import click

from argextract.cli.common import default_action_for, manifest_config, output_dir, require_path
from argextract.config import RunConfig
from argextract.models.extraction import ExtractionConfig
from argextract.services.extraction import get_extraction_service
from argextract.services.storage import load_catalog, load_extraction_config, save_team, write_manifest
from argextract.services.trajectories import TrajectoryFormat, TrajectoryLoader


@click.command("extract")
@click.option("--trajectories", type=click.Path(exists=True, dir_okay=False), help="Trajectory file")
@click.option("--catalog", type=click.Path(exists=True, dir_okay=False), help="Argument catalog file")
@click.option("--format", "fmt", type=click.Choice([f.value for f in TrajectoryFormat]),
              help="Trajectory format (default: from the file suffix)")
@click.option("--extraction-config", type=click.Path(exists=True, dir_okay=False),
              help="Extraction config file {pruning_threshold, default_ordering}")
@click.option("--pruning-threshold", "-p", type=click.IntRange(min=0), help="Minimum edge weight kept")
@click.option("--joint/--per-agent", default=None, help="Extract one joint ordering instead of one per agent")
@click.option("--default-action", help="Fallback action recorded in the models")
@click.option("--holdout", is_flag=True, help="Train on all but the held-out final episodes")
@click.option("--holdout-fraction", type=click.FloatRange(0.0, 1.0, max_open=True), help="Held-out share of episodes")
@click.option("--workers", type=click.IntRange(min=1), help="Worker threads")
@click.option("--output", type=click.Path(file_okay=False), help="Model directory")
@click.pass_obj
def extract_command(run_config: RunConfig, trajectories, catalog, fmt, extraction_config, pruning_threshold,
                    joint, default_action, holdout, holdout_fraction, workers, output):
    """Extract argument value orderings from trajectories."""
    run_config = run_config.override(
        trajectories=trajectories, catalog=catalog, format=fmt, workers=workers,
        output=output, holdout_fraction=holdout_fraction,
    )
    extraction = dict(run_config.extraction)
    if extraction_config is not None:
        extraction.update(load_extraction_config(extraction_config).to_dict())
    if pruning_threshold is not None:
        extraction["pruning_threshold"] = pruning_threshold
    if joint is not None:
        extraction["joint"] = joint
    run_config = run_config.override(extraction=extraction)
    config = ExtractionConfig.from_dict(extraction)

    trajectory_path = require_path(run_config.trajectories, "--trajectories")
    catalog_path = require_path(run_config.catalog, "--catalog")
    directory = output_dir(run_config, "extract")

    argument_catalog = load_catalog(catalog_path)
    loader = TrajectoryLoader(strict=True, action_alphabet=argument_catalog.action_alphabet)
    data = loader.load(trajectory_path, fmt)
    if holdout:
        data, held_out = data.split_holdout(run_config.holdout_fraction)
        click.echo(f"Holding out {len(held_out)} of {len(data) + len(held_out)} episode(s)")
    if not data.episodes:
        click.echo("Warning: no trajectory data; models follow the default ordering", err=True)

    fallback = default_action_for(argument_catalog, default_action)
    team, results = get_extraction_service().extract_team(
        data, argument_catalog, config, {agent: fallback for agent in range(argument_catalog.team_size)},
        workers=run_config.workers,
    )

    outputs = save_team(team, directory, results)
    write_manifest(directory, "extract", manifest_config(run_config), [trajectory_path, catalog_path], outputs)

    for result in results:
        who = "joint" if result.target is None else f"agent {result.target}"
        click.echo(
            f"{who}: {result.apg.edge_count} preference edge(s), "
            f"{len(result.removed)} removed to break cycles"
        )
    click.echo(f"Wrote {team.mode.value} model of {team.size} agent(s) to {directory}")
    click.echo("✅ Extraction completed!")
