"""Trajectory generation CLI command."""
import click
import numpy as np

from argextract.cli.common import (
    environment_of,
    manifest_config,
    mc_settings,
    output_dir,
    require_path,
    require_seed,
    takeaway_settings,
)
from argextract.config import RunConfig
from argextract.models.agent import TeamModel
from argextract.models.environment import Environment
from argextract.services.episodes import run_episodes
from argextract.services.mountain_car import generate_mc_catalog, random_grid_agent, scripted_mc_policy
from argextract.services.storage import CATALOG_FILE, load_team, save_catalog, save_team, write_json, write_manifest
from argextract.services.takeaway import generate_takeaway_catalog, takeaway_ground_truth_team
from argextract.services.trajectories import TrajectoryFormat, write_trajectories

POLICIES = ("scripted", "ground_truth", "model")


def model_rng(seed: int) -> np.random.Generator:
    """Random stream for sampling ground-truth models, independent of episode streams."""
    return np.random.default_rng(np.random.SeedSequence([seed, 1]))


@click.command("gen")
@click.option("--env", type=click.Choice([e.value for e in Environment]), help="Environment name")
@click.option("--policy", type=click.Choice(POLICIES), help="Policy generating the trajectories")
@click.option("--model", "model_path", type=click.Path(exists=True), help="Model directory for --policy model")
@click.option("--episodes", type=int, help="Number of episodes")
@click.option("--seed", type=int, help="Root random seed")
@click.option("--format", "fmt", type=click.Choice([f.value for f in TrajectoryFormat]), help="Trajectory file format")
@click.option("--workers", type=click.IntRange(min=1), help="Worker threads")
@click.option("--output", type=click.Path(file_okay=False), help="Run directory")
@click.pass_obj
def gen_command(run_config: RunConfig, env, policy, model_path, episodes, seed, fmt, workers, output):
    """Run a policy in an environment and log its trajectories."""
    run_config = run_config.override(
        env=env, policy=policy, model=model_path, episodes=episodes, seed=seed,
        format=fmt, workers=workers, output=output,
    )
    seed = require_seed(run_config)
    if run_config.episodes < 1:
        raise click.BadParameter("must be at least 1", param_hint="--episodes")
    if run_config.policy not in POLICIES:
        raise click.UsageError(f"Unknown policy '{run_config.policy}'. Choose from {list(POLICIES)}")
    environment = environment_of(run_config)
    directory = output_dir(run_config, "gen")
    outputs = []
    inputs = []

    mc_params, takeaway_params = None, None
    if environment is Environment.MOUNTAIN_CAR:
        mc_params, grid = mc_settings(run_config)
    else:
        takeaway_params = takeaway_settings(run_config)

    if run_config.policy == "model":
        team_path = require_path(run_config.model, "--model")
        team = load_team(team_path)
        driver = team
        catalog = team.catalog
        inputs.append(team_path / "team.json" if team_path.is_dir() else team_path)
    elif environment is Environment.MOUNTAIN_CAR:
        catalog = generate_mc_catalog(grid)
        if run_config.policy == "scripted":
            driver = scripted_mc_policy
        else:
            driver = TeamModel.single(random_grid_agent(catalog, model_rng(seed)))
            outputs.extend(save_team(driver, directory / "ground_truth"))
    else:
        if run_config.policy == "scripted":
            raise click.UsageError("takeaway_synth has no scripted policy; use ground_truth or model")
        catalog = generate_takeaway_catalog(takeaway_params)
        driver = takeaway_ground_truth_team(catalog, model_rng(seed), takeaway_params)
        outputs.extend(save_team(driver, directory / "ground_truth"))

    click.echo(f"Running {run_config.episodes} {environment.value} episode(s) with the {run_config.policy} policy...")
    run = run_episodes(
        driver, environment, run_config.episodes, seed, log=True,
        mc_params=mc_params, takeaway_params=takeaway_params, workers=run_config.workers,
    )

    fmt = TrajectoryFormat.parse(run_config.format)
    outputs.append(write_trajectories(run.trajectories, directory / f"trajectories.{fmt.value}", fmt))
    outputs.append(save_catalog(catalog, directory / CATALOG_FILE))
    outputs.append(write_json(directory / "stats.json", run.stats.deterministic_dict()))
    outputs.append(write_json(directory / "gen_timings.json", run.stats.timing_dict()))
    write_manifest(directory, "gen", manifest_config(run_config), inputs, outputs)

    stats = run.stats
    click.echo(f"Episodes: {stats.episodes}")
    click.echo(f"Steps per episode: {stats.mean_steps:.2f} +/- {stats.std_steps:.2f}")
    click.echo(f"Success rate: {stats.success_rate:.3f}")
    click.echo(f"Wall time per episode: {stats.mean_wall_time * 1000:.3f} +/- {stats.std_wall_time * 1000:.3f} ms")
    click.echo("✅ Trajectory generation completed!")
