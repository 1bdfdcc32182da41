"""Toolkit configuration."""
import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Type

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Config:
    """Base configuration class."""

    APP_NAME = os.environ.get("APP_NAME", "argextract")
    APP_VERSION = os.environ.get("APP_VERSION", "0.1.0")
    DEBUG = False
    TESTING = False

    # Argumentation semantics
    ORACLE_MAX_ARGUMENTS = int(os.environ.get("ORACLE_MAX_ARGUMENTS", "16"))  # 2^16 subsets

    # Extraction
    DEFAULT_PRUNING_THRESHOLD = int(os.environ.get("DEFAULT_PRUNING_THRESHOLD", "1"))
    HOLDOUT_FRACTION = float(os.environ.get("HOLDOUT_FRACTION", "0.2"))

    # Execution
    WORKERS = int(os.environ.get("ARGEXTRACT_WORKERS", "1"))
    RUNS_DIR = os.environ.get("RUNS_DIR", "runs")
    TRAJECTORY_FORMAT = os.environ.get("TRAJECTORY_FORMAT", "jsonl")
    BENCH_WARMUP_EPISODES = int(os.environ.get("BENCH_WARMUP_EPISODES", "10"))

    # Mountain Car (standard benchmark constants)
    MC_FORCE = float(os.environ.get("MC_FORCE", "0.001"))
    MC_GRAVITY = float(os.environ.get("MC_GRAVITY", "0.0025"))
    MC_GOAL_POSITION = float(os.environ.get("MC_GOAL_POSITION", "0.5"))
    MC_MAX_STEPS = int(os.environ.get("MC_MAX_STEPS", "999"))
    MC_GRID_BINS = int(os.environ.get("MC_GRID_BINS", "20"))

    # Synthetic takeaway field
    TAKEAWAY_FIELD_SIZE = float(os.environ.get("TAKEAWAY_FIELD_SIZE", "30.0"))  # 4v3 pitch
    TAKEAWAY_OPEN_THRESHOLD = float(os.environ.get("TAKEAWAY_OPEN_THRESHOLD", "0.7"))
    TAKEAWAY_FAR_THRESHOLD = float(os.environ.get("TAKEAWAY_FAR_THRESHOLD", "15.0"))
    TAKEAWAY_EPISODE_LENGTH = int(os.environ.get("TAKEAWAY_EPISODE_LENGTH", "10"))

    # Logging
    LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO")
    LOG_FILE = os.environ.get("LOG_FILE", "logs/argextract.log")


class DevelopmentConfig(Config):
    """Development configuration."""

    DEBUG = True


class ProductionConfig(Config):
    """Production configuration."""

    DEBUG = False


class TestingConfig(Config):
    """Testing configuration."""

    TESTING = True
    DEBUG = True
    LOG_LEVEL = "DEBUG"


# Configuration dictionary
config: dict[str, Type[Config]] = {
    "development": DevelopmentConfig,
    "production": ProductionConfig,
    "testing": TestingConfig,
    "default": ProductionConfig,
}

_active_config: Config | None = None


def set_config(config_name: str | None = None) -> Config:
    """Activate a named configuration and return it."""
    global _active_config
    config_name = config_name or os.getenv("ARGEXTRACT_ENV", "default")
    if config_name not in config:
        raise KeyError(f"Unknown configuration '{config_name}'. Choose from {sorted(config)}")
    _active_config = config[config_name]()
    return _active_config


def get_config() -> Config:
    """Get the active configuration, activating the default one on first use."""
    if _active_config is None:
        return set_config()
    return _active_config


@dataclass(frozen=True)
class RunConfig:
    """Effective settings for one CLI pipeline run.

    Built from the active `Config`, then a JSON run file, then command-line
    flags; later sources win.
    """

    seed: int | None = None
    env: str = "mountain_car"
    policy: str = "scripted"
    episodes: int = 1000
    format: str = "jsonl"
    workers: int = 1
    catalog: str | None = None
    trajectories: str | None = None
    model: str | None = None
    output: str | None = None
    holdout_fraction: float = 0.2
    mc: dict[str, Any] = field(default_factory=dict)
    takeaway: dict[str, Any] = field(default_factory=dict)
    extraction: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_defaults(cls, base: Config) -> "RunConfig":
        """Seed a run configuration from toolkit configuration."""
        return cls(
            format=base.TRAJECTORY_FORMAT,
            workers=base.WORKERS,
            holdout_fraction=base.HOLDOUT_FRACTION,
            extraction={"pruning_threshold": base.DEFAULT_PRUNING_THRESHOLD},
        )

    @classmethod
    def load(cls, path: str | Path | None, base: Config | None = None) -> "RunConfig":
        """Load a run configuration file on top of the toolkit defaults."""
        run_config = cls.from_defaults(base or get_config())
        if path is None:
            return run_config
        with open(path, encoding="utf-8") as handle:
            document = json.load(handle)
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(document) - known)
        if unknown:
            raise ValueError(f"Unknown run configuration keys in {path}: {unknown}")
        merged_extraction = {**run_config.extraction, **document.pop("extraction", {})}
        return replace(run_config, extraction=merged_extraction, **document)

    def override(self, **flags: Any) -> "RunConfig":
        """Apply command-line flags; flags left as None keep the file value."""
        updates = {key: value for key, value in flags.items() if value is not None}
        return replace(self, **updates)

    def to_dict(self) -> dict[str, Any]:
        """Convert run configuration to dictionary."""
        return {f.name: getattr(self, f.name) for f in fields(self)}
