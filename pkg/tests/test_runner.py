"""Config validation, scenario orchestration, determinism, and CLI tests."""

import json
import os

import pytest

from urllc_sim import runner
from urllc_sim.cli import main
from urllc_sim.runner import (
    ConfigError,
    OutputDir,
    ScenarioError,
    load_config,
    run,
    sweep,
    validate_config,
)

GRANT_FREE = {
    "scenario": "grant_free",
    "master_seed": 7,
    "params": {"n_devices": 20, "n_frames": 50, "frame_len": 10},
}


def digests(out_dir):
    manifest = json.load(open(os.path.join(out_dir, "manifest.json")))
    return manifest["files"]


class TestValidation:
    def test_unknown_scenario(self):
        with pytest.raises(ConfigError, match="scenario"):
            validate_config({"scenario": "warp_drive"})

    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigError, match="unknown keys"):
            validate_config({"scenario": "grant_free", "seeed": 3})

    def test_unknown_param_key(self):
        with pytest.raises(ConfigError, match="unknown keys"):
            validate_config(
                {"scenario": "grant_free", "params": {"n_devicesss": 5}}
            )

    def test_range_rejection_before_simulation(self):
        with pytest.raises(ConfigError, match="mpr_gamma"):
            validate_config(
                {"scenario": "grant_free", "params": {"mpr_gamma": 0}}
            )

    def test_bool_is_not_an_int(self):
        with pytest.raises(ConfigError, match="n_devices"):
            validate_config(
                {"scenario": "grant_free", "params": {"n_devices": True}}
            )

    def test_defaults_filled(self):
        config = validate_config({"scenario": "grant_free"})
        assert config["params"]["mpr_gamma"] == 1
        assert config["master_seed"] == 0

    def test_seed_must_be_u64(self):
        with pytest.raises(ConfigError, match="u64"):
            validate_config({"scenario": "grant_free", "master_seed": 2**64})


class TestRun:
    def test_minimal_grant_free_outputs(self, tmp_path):
        manifest = run(GRANT_FREE, str(tmp_path / "out"))
        assert (tmp_path / "out" / "grant_free_events.csv").exists()
        assert (tmp_path / "out" / "manifest.json").exists()
        assert manifest["summary"]["n_activated"] > 0

    def test_rerun_is_byte_identical(self, tmp_path):
        a = run(GRANT_FREE, str(tmp_path / "a"))
        b = run(GRANT_FREE, str(tmp_path / "b"))
        assert a["files"] == b["files"]

    def test_manifest_round_trip(self, tmp_path):
        first = run(GRANT_FREE, str(tmp_path / "a"))
        echoed = first["config"]
        revalidated = validate_config(echoed)
        second = run(revalidated, str(tmp_path / "b"))
        assert first["files"] == second["files"]

    def test_seed_override_changes_results(self, tmp_path):
        a = run(GRANT_FREE, str(tmp_path / "a"))
        b = run(GRANT_FREE, str(tmp_path / "b"), seed_override=1234)
        assert a["files"] != b["files"]

    def test_partial_outputs_removed_on_failure(self, tmp_path, monkeypatch):
        def exploding(params, seed, out, jobs):
            out.write_csv("partial.csv", ["a"], [[1]])
            raise RuntimeError("boom")

        schema, _ = runner.SCENARIOS["grant_free"]
        monkeypatch.setitem(runner.SCENARIOS, "grant_free", (schema, exploding))
        with pytest.raises(ScenarioError, match="boom"):
            run(GRANT_FREE, str(tmp_path / "out"))
        assert not (tmp_path / "out" / "partial.csv").exists()

    def test_output_dir_escape_rejected(self, tmp_path):
        out = OutputDir(str(tmp_path / "out"))
        with pytest.raises(ScenarioError, match="outside"):
            out.path("../escape.csv")


class TestSweep:
    def test_empty_values_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="non-empty"):
            sweep(GRANT_FREE, "params.activation_prob", [], str(tmp_path))

    def test_three_values_three_rows(self, tmp_path):
        manifests = sweep(
            GRANT_FREE, "params.activation_prob", [0.05, 0.1, 0.2], str(tmp_path)
        )
        assert len(manifests) == 3
        lines = (tmp_path / "sweep_summary.csv").read_text().strip().splitlines()
        assert len(lines) == 4  # header + one row per value

    def test_bad_path_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="path"):
            sweep(GRANT_FREE, "params.nope", [1], str(tmp_path))

    def test_invalid_value_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="activation_prob"):
            sweep(GRANT_FREE, "params.activation_prob", [2.5], str(tmp_path))

    def test_sweep_deterministic_and_job_independent(self, tmp_path):
        a = sweep(GRANT_FREE, "params.k_replicas", [1, 2], str(tmp_path / "a"), jobs=1)
        b = sweep(GRANT_FREE, "params.k_replicas", [1, 2], str(tmp_path / "b"), jobs=4)
        assert [m["files"] for m in a] == [m["files"] for m in b]
        assert (tmp_path / "a" / "sweep_summary.csv").read_bytes() == (
            tmp_path / "b" / "sweep_summary.csv"
        ).read_bytes()

    def test_points_have_distinct_seeds(self, tmp_path):
        manifests = sweep(
            GRANT_FREE, "params.activation_prob", [0.1, 0.1], str(tmp_path)
        )
        assert manifests[0]["scenario_seed"] != manifests[1]["scenario_seed"]


class TestCli:
    def write_config(self, tmp_path, config=GRANT_FREE):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(config))
        return str(path)

    def test_run_success(self, tmp_path, capsys):
        code = main(
            ["run", "--config", self.write_config(tmp_path), "--out", str(tmp_path / "o")]
        )
        assert code == 0
        assert (tmp_path / "o" / "manifest.json").exists()
        assert "reliability" in capsys.readouterr().out

    def test_validation_exit_code(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"scenario": "nope"}))
        code = main(["run", "--config", str(path), "--out", str(tmp_path / "o")])
        assert code == 2

    def test_missing_config_file(self, tmp_path):
        code = main(["run", "--config", str(tmp_path / "nope.json"), "--out", "x"])
        assert code == 2

    def test_sweep_cli(self, tmp_path):
        code = main(
            [
                "sweep",
                "--config", self.write_config(tmp_path),
                "--param", "params.activation_prob",
                "--values", "0.05,0.1",
                "--out", str(tmp_path / "sw"),
            ]
        )
        assert code == 0
        assert (tmp_path / "sw" / "sweep_summary.csv").exists()
        assert (tmp_path / "sw" / "point_000" / "manifest.json").exists()

    def test_env_overrides(self, tmp_path, monkeypatch):
        monkeypatch.setenv("URLLC_SIM_OUT", str(tmp_path / "env_out"))
        monkeypatch.setenv("URLLC_SIM_SEED", "99")
        code = main(["run", "--config", self.write_config(tmp_path)])
        assert code == 0
        manifest = json.load(open(tmp_path / "env_out" / "manifest.json"))
        assert manifest["config"]["master_seed"] == 99

    def test_cli_flag_beats_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("URLLC_SIM_SEED", "99")
        code = main(
            [
                "run",
                "--config", self.write_config(tmp_path),
                "--out", str(tmp_path / "o"),
                "--seed", "123",
            ]
        )
        assert code == 0
        manifest = json.load(open(tmp_path / "o" / "manifest.json"))
        assert manifest["config"]["master_seed"] == 123

    def test_out_dir_from_config(self, tmp_path):
        config = dict(GRANT_FREE, out_dir=str(tmp_path / "from_cfg"))
        code = main(["run", "--config", self.write_config(tmp_path, config)])
        assert code == 0
        assert (tmp_path / "from_cfg" / "manifest.json").exists()

    def test_no_out_dir_anywhere(self, tmp_path, monkeypatch):
        monkeypatch.delenv("URLLC_SIM_OUT", raising=False)
        code = main(["run", "--config", self.write_config(tmp_path)])
        assert code == 2
