"""CLI commands package."""
import click

from argextract import create_toolkit
from argextract.cli.catalog import catalog_command
from argextract.cli.common import ArgextractGroup
from argextract.cli.evaluate import eval_group
from argextract.cli.extract import extract_command
from argextract.cli.gen import gen_command
from argextract.config import RunConfig, config


@click.group(cls=ArgextractGroup)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="Run configuration JSON; command-line flags override it")
@click.option("--profile", type=click.Choice(sorted(config)), help="Toolkit configuration profile")
@click.pass_context
def cli(ctx: click.Context, config_path, profile):
    """Extract and evaluate argumentation agent models from trajectories."""
    base = create_toolkit(profile)
    try:
        ctx.obj = RunConfig.load(config_path, base)
    except (ValueError, TypeError) as e:
        raise click.UsageError(f"Invalid run configuration {config_path}: {e}") from e


cli.add_command(catalog_command)
cli.add_command(gen_command)
cli.add_command(extract_command)
cli.add_command(eval_group)


def main() -> None:
    cli()
