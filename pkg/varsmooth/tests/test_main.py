"""Tests for the command-line entrypoint."""

import argparse
import json

import numpy as np
import pytest

from varsmooth.main import EXIT_ERROR, EXIT_OK, _seed_list, build_parser, main
from varsmooth.optim import prox as prox_module


def _spca_config_file(tmp_path):
    path = tmp_path / "spca.json"
    config = {
        "experiment": "spca",
        "seeds": [0, 1, 2],
        "solvers": ["vsmooth"],
        "stop": {"max_iterations": 10},
        "spca": {"sizes": [{"N": 8, "p": 2}], "num_samples": 50},
    }
    path.write_text(json.dumps(config), encoding="utf-8")
    return path


class TestSeedList:
    """Test --seeds parsing."""

    def test_list_and_ranges(self):
        assert _seed_list("0,1,2") == [0, 1, 2]
        assert _seed_list("0-3") == [0, 1, 2, 3]
        assert _seed_list("5, 0-1") == [5, 0, 1]

    def test_empty(self):
        with pytest.raises(argparse.ArgumentTypeError):
            _seed_list(" , ")


class TestParser:
    """Test the subcommand surface."""

    def test_spca_flags(self):
        args = build_parser().parse_args(
            ["spca", "--config", "c.json", "--out", "o", "--seeds", "0-1", "--workers", "2", "--time-budget", "1.5"]
        )
        assert args.seeds == [0, 1]
        assert args.workers == 2
        assert args.time_budget == 1.5

    def test_ssc_dataset_flag(self):
        args = build_parser().parse_args(["ssc", "--config", "c.json", "--dataset", "iris.csv"])
        assert args.dataset == "iris.csv"

    def test_command_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestMain:
    """Test exit codes and outputs."""

    def test_selftest_pass(self, capsys):
        assert main(["selftest", "--suite", "gradient_consistency"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("PASS gradient_consistency")

    def test_selftest_failure(self, monkeypatch, capsys):
        monkeypatch.setattr(prox_module, "prox_l1", lambda z, t, lam=1.0: np.asarray(z, dtype=float))
        assert main(["selftest", "--suite", "prox_oracle"]) == EXIT_ERROR
        assert capsys.readouterr().out.startswith("FAIL prox_oracle")

    def test_spca_run(self, tmp_path, capsys):
        out_dir = tmp_path / "results"
        code = main(["spca", "--config", str(_spca_config_file(tmp_path)), "--out", str(out_dir), "--seeds", "4"])
        assert code == EXIT_OK
        assert capsys.readouterr().out.strip() == str(out_dir)
        manifest = json.loads((out_dir / "run_manifest.json").read_text(encoding="utf-8"))
        assert manifest["config"]["seeds"] == [4]
        assert (out_dir / "traces" / "spca_vsmooth_N8_p2_seed4.csv").exists()

    def test_missing_config(self, tmp_path):
        assert main(["spca", "--config", str(tmp_path / "missing.json")]) == EXIT_ERROR

    def test_invalid_config(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"experiment": "spca", "seeds": []}), encoding="utf-8")
        assert main(["spca", "--config", str(path)]) == EXIT_ERROR

    def test_experiment_mismatch(self, tmp_path, capsys):
        path = tmp_path / "ssc.json"
        path.write_text(json.dumps({"experiment": "ssc", "seeds": [0]}), encoding="utf-8")
        out_dir = tmp_path / "results"
        assert main(["spca", "--config", str(path), "--out", str(out_dir)]) == EXIT_ERROR
        assert capsys.readouterr().out == ""
        assert not out_dir.exists()
