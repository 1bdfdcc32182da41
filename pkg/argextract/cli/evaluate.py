"""Evaluation CLI commands."""
from pathlib import Path

import click

from argextract.cli.common import (
    ArgextractGroup,
    environment_of,
    manifest_config,
    mc_settings,
    output_dir,
    parse_resolution,
    require_path,
    require_seed,
    takeaway_settings,
)
from argextract.config import RunConfig
from argextract.models.environment import Environment
from argextract.services.evaluation import (
    benchmark_deployment,
    diff_grids,
    fidelity,
    inspect_team,
    policy_grid,
    render_grid_ascii,
    render_grid_pgm,
    write_grid_csv,
)
from argextract.services.mountain_car import scripted_mc_policy
from argextract.services.storage import TEAM_FILE, load_team, write_json, write_manifest
from argextract.services.trajectories import TrajectoryFormat, TrajectoryLoader


def _model_input(path: Path) -> Path:
    return path / TEAM_FILE if path.is_dir() else path


@click.group("eval", cls=ArgextractGroup)
def eval_group():
    """Evaluate extracted models."""
    pass


@eval_group.command("fidelity")
@click.option("--model", "model_path", type=click.Path(exists=True), help="Model directory or file")
@click.option("--trajectories", type=click.Path(exists=True, dir_okay=False), help="Trajectory file")
@click.option("--format", "fmt", type=click.Choice([f.value for f in TrajectoryFormat]),
              help="Trajectory format (default: from the file suffix)")
@click.option("--holdout", is_flag=True, help="Score only the held-out final episodes")
@click.option("--holdout-fraction", type=click.FloatRange(0.0, 1.0, max_open=True), help="Held-out share of episodes")
@click.option("--workers", type=click.IntRange(min=1), help="Worker threads")
@click.option("--output", type=click.Path(file_okay=False), help="Run directory")
@click.pass_obj
def fidelity_command(run_config: RunConfig, model_path, trajectories, fmt, holdout, holdout_fraction, workers, output):
    """Score a model's agreement with logged actions."""
    run_config = run_config.override(
        model=model_path, trajectories=trajectories, format=fmt,
        holdout_fraction=holdout_fraction, workers=workers, output=output,
    )
    team_path = require_path(run_config.model, "--model")
    trajectory_path = require_path(run_config.trajectories, "--trajectories")
    directory = output_dir(run_config, "eval")

    team = load_team(team_path)
    loader = TrajectoryLoader(strict=True, action_alphabet=team.catalog.action_alphabet)
    data = loader.load(trajectory_path, fmt)
    if holdout:
        _, data = data.split_holdout(run_config.holdout_fraction)
        click.echo(f"Scoring {len(data)} held-out episode(s)")

    report = fidelity(team, data, workers=run_config.workers)
    path = write_json(directory / "fidelity.json", {**report.to_dict(), "holdout": holdout})
    write_manifest(
        directory, "eval fidelity", {**manifest_config(run_config), "holdout": holdout},
        [_model_input(team_path), trajectory_path], [path],
    )
    click.echo(report.render())
    click.echo("✅ Fidelity evaluation completed!")


@eval_group.command("bench")
@click.option("--model", "model_path", type=click.Path(exists=True), help="Model directory or file")
@click.option("--policy", type=click.Choice(["scripted"]), help="Benchmark the scripted policy instead of a model")
@click.option("--env", type=click.Choice([e.value for e in Environment]), help="Environment name")
@click.option("--episodes", type=int, help="Number of timed episodes")
@click.option("--seed", type=int, help="Root random seed")
@click.option("--warmup", type=click.IntRange(min=0), help="Untimed warm-up episodes")
@click.option("--output", type=click.Path(file_okay=False), help="Run directory")
@click.pass_obj
def bench_command(run_config: RunConfig, model_path, policy, env, episodes, seed, warmup, output):
    """Time a model deployed in an environment."""
    run_config = run_config.override(model=model_path, env=env, episodes=episodes, seed=seed, output=output)
    seed = require_seed(run_config)
    if run_config.episodes < 1:
        raise click.BadParameter("must be at least 1", param_hint="--episodes")
    environment = environment_of(run_config)
    directory = output_dir(run_config, "eval")

    inputs = []
    if policy == "scripted":
        if environment is not Environment.MOUNTAIN_CAR:
            raise click.UsageError("Only mountain_car has a scripted policy")
        driver = scripted_mc_policy
    else:
        team_path = require_path(run_config.model, "--model (or --policy scripted)")
        driver = load_team(team_path)
        inputs.append(_model_input(team_path))

    mc_params, takeaway_params = None, None
    if environment is Environment.MOUNTAIN_CAR:
        mc_params, _ = mc_settings(run_config)
    else:
        takeaway_params = takeaway_settings(run_config)

    click.echo(f"Benchmarking {run_config.episodes} {environment.value} episode(s)...")
    stats = benchmark_deployment(
        driver, environment, run_config.episodes, seed, warmup=warmup,
        mc_params=mc_params, takeaway_params=takeaway_params,
    )
    outputs = [
        write_json(directory / "bench.json", stats.deterministic_dict()),
        write_json(directory / "bench_timings.json", stats.timing_dict()),
    ]
    write_manifest(
        directory, "eval bench", {**manifest_config(run_config), "policy": policy or "model"}, inputs, outputs,
    )

    click.echo(f"Success rate: {stats.success_rate:.3f}")
    click.echo(f"Steps per episode: {stats.mean_steps:.2f} +/- {stats.std_steps:.2f}")
    click.echo(f"Wall time per episode: {stats.mean_wall_time * 1000:.3f} +/- {stats.std_wall_time * 1000:.3f} ms")
    if stats.mean_decision_latency is not None:
        click.echo(f"Decision latency: {stats.mean_decision_latency * 1e6:.1f} us")
    click.echo("✅ Benchmark completed!")


@eval_group.command("inspect")
@click.option("--model", "model_path", type=click.Path(exists=True), help="Model directory or file")
@click.option("--top", "k", type=click.IntRange(min=1), default=5, show_default=True,
              help="Primary arguments listed per agent")
@click.option("--output", type=click.Path(file_okay=False), help="Run directory")
@click.pass_obj
def inspect_command(run_config: RunConfig, model_path, k, output):
    """List each agent's highest-valued primary arguments."""
    run_config = run_config.override(model=model_path, output=output)
    team_path = require_path(run_config.model, "--model")
    directory = output_dir(run_config, "eval")

    report = inspect_team(load_team(team_path), k)
    table = report.render()
    outputs = [
        write_json(directory / "inspect.json", report.to_dict()),
        directory / "inspect.txt",
    ]
    outputs[1].write_text(table + "\n", encoding="utf-8")
    write_manifest(directory, "eval inspect", {**manifest_config(run_config), "top": k},
                   [_model_input(team_path)], outputs)
    click.echo(table)
    click.echo("✅ Inspection completed!")


@eval_group.command("grid")
@click.option("--model", "model_path", type=click.Path(exists=True), help="Model directory or file")
@click.option("--res", "resolution", default="20x20", show_default=True, help="Grid resolution RxC")
@click.option("--compare", help="'scripted' or a second model to diff against")
@click.option("--agent", type=click.IntRange(min=0), default=0, show_default=True, help="Agent index to render")
@click.option("--scale", type=click.IntRange(min=1), default=1, show_default=True, help="Pixels per cell in grid.pgm")
@click.option("--output", type=click.Path(file_okay=False), help="Run directory")
@click.pass_obj
def grid_command(run_config: RunConfig, model_path, resolution, compare, agent, scale, output):
    """Render a model's policy over position and velocity."""
    run_config = run_config.override(model=model_path, output=output)
    team_path = require_path(run_config.model, "--model")
    rows_cols = parse_resolution(resolution)
    directory = output_dir(run_config, "eval")

    team = load_team(team_path)
    if agent >= team.size:
        raise click.BadParameter(f"model has {team.size} agent(s)", param_hint="--agent")
    inputs = [_model_input(team_path)]
    grid = policy_grid(team, rows_cols, agent=agent)
    outputs = [
        write_grid_csv(grid, directory / "grid.csv"),
        directory / "grid.txt",
        render_grid_pgm(grid, directory / "grid.pgm", scale),
    ]
    text = render_grid_ascii(grid)
    outputs[1].write_text(text + "\n", encoding="utf-8")

    if compare is not None:
        if compare == "scripted":
            other = policy_grid(scripted_mc_policy, rows_cols)
        else:
            compare_path = require_path(compare, "--compare")
            other = policy_grid(load_team(compare_path), rows_cols, agent=agent)
            inputs.append(_model_input(compare_path))
        diff = diff_grids(grid, other)
        outputs.append(write_json(directory / "grid_diff.json", {
            "compare": compare if compare == "scripted" else Path(compare).name,
            "count": diff.count,
            "cells": [list(cell) for cell in diff.mismatches],
        }))
        click.echo(f"{diff.count} of {rows_cols[0] * rows_cols[1]} cell(s) differ from {compare}")

    write_manifest(
        directory, "eval grid",
        {**manifest_config(run_config), "res": resolution, "agent": agent, "scale": scale, "compare": compare},
        inputs, outputs,
    )
    click.echo(text)
    click.echo("✅ Policy grid completed!")
