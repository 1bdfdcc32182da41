"""Tests for catalog, model and manifest files."""
import hashlib
import json

import pytest

from argextract.errors import DataError
from argextract.models.agent import AAAgentModel, TeamMode, TeamModel
from argextract.models.arguments import CatalogError, ValueAssignment
from argextract.models.extraction import ExtractionConfig
from argextract.services.conditions import UnknownConditionError
from argextract.services.extraction import ExtractionService
from argextract.services.storage import (
    load_agent,
    load_catalog,
    load_extraction_config,
    load_team,
    read_json,
    save_catalog,
    save_team,
    sha256_file,
    write_json,
    write_manifest,
)


class TestJson:
    def test_canonical_layout(self, tmp_path):
        path = write_json(tmp_path / "nested" / "doc.json", {"b": 1, "a": [1, 2]})
        assert path.read_text(encoding="utf-8") == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(DataError, match="not valid JSON"):
            read_json(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            read_json(tmp_path / "absent.json")

    def test_sha256(self, tmp_path):
        path = tmp_path / "f.txt"
        path.write_bytes(b"abc")
        assert sha256_file(path) == hashlib.sha256(b"abc").hexdigest()


class TestCatalogFiles:
    def test_catalog_file_loads_back(self, tmp_path, line_catalog):
        path = save_catalog(line_catalog, tmp_path / "catalog.json")
        assert load_catalog(path) == line_catalog

    def test_unknown_condition_kind(self, tmp_path, line_catalog):
        document = line_catalog.to_dict()
        document["arguments"][0]["condition"]["kind"] = "teleport"
        path = write_json(tmp_path / "catalog.json", document)
        with pytest.raises(UnknownConditionError):
            load_catalog(path)

    def test_not_an_object(self, tmp_path):
        with pytest.raises(CatalogError):
            load_catalog(write_json(tmp_path / "catalog.json", [1, 2]))

    def test_extraction_config_file(self, tmp_path):
        path = write_json(tmp_path / "extraction.json", {"pruning_threshold": 3, "joint": True})
        config = load_extraction_config(path)
        assert config.pruning_threshold == 3
        assert config.joint is True


class TestTeamFiles:
    def test_model_directory(self, tmp_path, mc_round_trip):
        truth, data = mc_round_trip
        team, results = ExtractionService().extract_team(data, truth.catalog, ExtractionConfig(), {0: "no_push"})
        written = save_team(team, tmp_path / "model", results)
        assert sorted(p.name for p in written) == [
            "agent_0.json", "catalog.json", "ordering_0.json", "team.json",
        ]
        assert load_team(tmp_path / "model") == team
        assert load_team(tmp_path / "model" / "team.json") == team

    def test_single_agent_file(self, tmp_path, line_agent):
        save_team(TeamModel.single(line_agent), tmp_path)
        assert load_agent(tmp_path / "agent_0.json") == line_agent
        assert load_team(tmp_path / "agent_0.json").members == (line_agent,)

    def test_single_agent_file_of_a_larger_team(self, tmp_path, pair_catalog):
        values = ValueAssignment({"a0_up": 4, "a0_down": 3, "a1_up": 2, "a1_down": 1})
        team = TeamModel(pair_catalog, tuple(AAAgentModel(pair_catalog, values, k, "up") for k in range(2)))
        save_team(team, tmp_path)
        with pytest.raises(DataError, match="team.json"):
            load_team(tmp_path / "agent_1.json")

    def test_centralized_team_keeps_shared_values(self, tmp_path, pair_catalog):
        values = ValueAssignment({"a0_up": 1, "a0_down": 2, "a1_up": 3, "a1_down": 4})
        team = TeamModel(
            catalog=pair_catalog,
            members=tuple(AAAgentModel(pair_catalog, values, k, "up") for k in range(2)),
            mode=TeamMode.CENTRALIZED,
            shared_values=values,
        )
        save_team(team, tmp_path)
        document = json.loads((tmp_path / "team.json").read_text(encoding="utf-8"))
        assert document["mode"] == "centralized"
        assert document["shared_values"] == {"a0_down": 2, "a0_up": 1, "a1_down": 4, "a1_up": 3}
        assert load_team(tmp_path) == team

    def test_missing_model(self, tmp_path):
        with pytest.raises(DataError, match="does not exist"):
            load_team(tmp_path)

    def test_agent_file_missing_key(self, tmp_path, line_agent):
        save_team(TeamModel.single(line_agent), tmp_path)
        document = json.loads((tmp_path / "agent_0.json").read_text(encoding="utf-8"))
        del document["default_action"]
        write_json(tmp_path / "agent_0.json", document)
        with pytest.raises(DataError, match="default_action"):
            load_agent(tmp_path / "agent_0.json")


class TestManifest:
    def test_records_hashes_and_skips_timings(self, tmp_path):
        source = tmp_path / "input.jsonl"
        source.write_text("{}\n", encoding="utf-8")
        out = tmp_path / "out"
        result = write_json(out / "bench.json", {"episodes": 3})
        timings = write_json(out / "bench_timings.json", {"mean_wall_time": 0.1})

        path = write_manifest(out, "eval bench", {"seed": 1}, inputs=[source], outputs=[timings, result])
        document = json.loads(path.read_text(encoding="utf-8"))
        assert document["command"] == "eval bench"
        assert document["config"] == {"seed": 1}
        assert document["inputs"] == [{"path": "input.jsonl", "sha256": sha256_file(source)}]
        assert document["outputs"] == [{"path": "bench.json", "sha256": sha256_file(result)}]
