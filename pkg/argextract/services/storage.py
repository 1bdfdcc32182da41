"""Catalog, model and run-manifest files.

Every document is written as canonical JSON (sorted keys, two-space indent,
trailing newline) so repeated runs produce identical bytes.
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Mapping

from argextract.errors import DataError
from argextract.models.agent import AAAgentModel, TeamMode, TeamModel
from argextract.models.arguments import ArgumentCatalog, CatalogError, ValueAssignment
from argextract.models.extraction import ExtractionConfig, ExtractionResult
from argextract.services.conditions import validate_catalog

logger = logging.getLogger(__name__)

CATALOG_FILE = "catalog.json"
TEAM_FILE = "team.json"
MANIFEST_FILE = "manifest.json"


def write_json(path: str | Path, document: Any) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(document, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        logger.error(f"Cannot write {path}: {e}")
        raise DataError(f"Cannot write {path}: {e}") from e
    return path


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise DataError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise DataError(f"{path} is not valid JSON (line {e.lineno}: {e.msg})") from e


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def save_catalog(catalog: ArgumentCatalog, path: str | Path) -> Path:
    return write_json(path, catalog.to_dict())


def load_catalog(path: str | Path) -> ArgumentCatalog:
    """Read a catalog and validate every condition against its kind.

    Raises:
        CatalogError: If the document is not a valid catalog
        UnknownConditionError: If a condition kind is not registered
        InvalidConditionError: If condition parameters do not fit their kind
    """
    document = read_json(path)
    if not isinstance(document, dict):
        raise CatalogError(f"{path} does not contain a catalog object")
    catalog = ArgumentCatalog.from_dict(document)
    validate_catalog(catalog)
    logger.info(f"Loaded catalog of {len(catalog)} arguments from {path}")
    return catalog


def load_extraction_config(path: str | Path) -> ExtractionConfig:
    document = read_json(path)
    if not isinstance(document, dict):
        raise DataError(f"{path} does not contain an extraction configuration object")
    return ExtractionConfig.from_dict(document)


def save_team(
    team: TeamModel,
    directory: str | Path,
    results: Iterable[ExtractionResult] = (),
) -> list[Path]:
    """Write a self-contained model directory.

    Layout: ``catalog.json``, ``agent_<i>.json`` per member, ``ordering_<i>.json``
    (``ordering_joint.json`` for a joint ordering) per extraction result, and
    ``team.json`` tying them together.
    """
    directory = Path(directory)
    written = [save_catalog(team.catalog, directory / CATALOG_FILE)]
    members = []
    for member in team.members:
        name = f"agent_{member.self_index}.json"
        written.append(write_json(directory / name, {"catalog": CATALOG_FILE, **member.to_dict()}))
        members.append(name)
    for result in results:
        suffix = "joint" if result.target is None else str(result.target)
        written.append(write_json(directory / f"ordering_{suffix}.json", result.to_dict()))

    document: dict[str, Any] = {"catalog": CATALOG_FILE, "mode": team.mode.value, "members": members}
    if team.shared_values is not None:
        document["shared_values"] = dict(sorted(team.shared_values.values.items()))
    written.append(write_json(directory / TEAM_FILE, document))
    logger.info(f"Saved {team.mode.value} team of {team.size} to {directory}")
    return written


def _agent_from_document(document: Mapping[str, Any], catalog: ArgumentCatalog, path: Path) -> AAAgentModel:
    try:
        return AAAgentModel(
            catalog=catalog,
            values=ValueAssignment({str(k): v for k, v in document["values"].items()}),
            self_index=int(document["self"]),
            default_action=str(document["default_action"]),
        )
    except KeyError as e:
        raise DataError(f"{path} is missing key {e}") from e


def load_agent(path: str | Path, catalog: ArgumentCatalog | None = None) -> AAAgentModel:
    """Read an agent file; its catalog path is relative to the file."""
    path = Path(path)
    document = read_json(path)
    if catalog is None:
        catalog = load_catalog(path.parent / document.get("catalog", CATALOG_FILE))
    return _agent_from_document(document, catalog, path)


def load_team(path: str | Path) -> TeamModel:
    """Read a model directory, a ``team.json`` or a single agent file.

    A single agent file is accepted only for one-agent catalogs.
    """
    path = Path(path)
    if path.is_dir():
        path = path / TEAM_FILE
    if not path.exists():
        raise DataError(f"Model file {path} does not exist")

    document = read_json(path)
    catalog = load_catalog(path.parent / document.get("catalog", CATALOG_FILE))
    if "members" not in document:
        agent = _agent_from_document(document, catalog, path)
        if catalog.team_size != 1:
            raise DataError(f"{path} holds one agent of a {catalog.team_size}-agent catalog; load team.json")
        return TeamModel.single(agent)

    members = tuple(load_agent(path.parent / name, catalog) for name in document["members"])
    mode = TeamMode(document.get("mode", TeamMode.DECENTRALIZED.value))
    shared = document.get("shared_values")
    return TeamModel(
        catalog=catalog,
        members=members,
        mode=mode,
        shared_values=ValueAssignment(dict(shared)) if shared is not None else None,
    )


def write_manifest(
    directory: str | Path,
    command: str,
    config: Mapping[str, Any],
    inputs: Iterable[str | Path] = (),
    outputs: Iterable[str | Path] = (),
) -> Path:
    """Record the command, its effective configuration and input/output hashes.

    Output paths are listed relative to `directory`. Timing files are left out
    because their contents vary between runs.
    """
    directory = Path(directory)

    def entry(path: str | Path, base: Path | None) -> dict[str, str]:
        path = Path(path)
        name = path.relative_to(base).as_posix() if base is not None else path.name
        return {"path": name, "sha256": sha256_file(path)}

    document = {
        "command": command,
        "config": config,
        "inputs": [entry(p, None) for p in inputs],
        "outputs": sorted(
            (entry(p, directory) for p in outputs if not Path(p).name.endswith("_timings.json")),
            key=lambda e: e["path"],
        ),
    }
    return write_json(directory / MANIFEST_FILE, document)
