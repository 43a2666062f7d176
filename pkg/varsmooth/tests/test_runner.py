"""Tests for the benchmark runners and their result files."""

import csv
import json

import pytest

from varsmooth.bench.io import write_dataset
from varsmooth.bench.runner import SPCA_SUMMARY_COLUMNS, SSC_GRID_COLUMNS, SSC_SUMMARY_COLUMNS, run_spca, run_ssc
from varsmooth.bench.ssc import Dataset, make_blobs_dataset
from varsmooth.core.errors import InvalidArgumentError, ResultWriteError
from varsmooth.schemas.run_schema import BlobsSettings, RunConfig, SpcaSettings, SpcaSize, SscSettings
from varsmooth.schemas.solver_schema import StoppingRule


def _read_csv(path):
    with path.open(newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def _spca_config(**kwargs):
    defaults = dict(
        experiment="spca",
        seeds=[0, 1],
        solvers=["vsmooth", "rsub", "rsmooth"],
        stop=StoppingRule(max_iterations=20),
        spca=SpcaSettings(sizes=[SpcaSize(N=10, p=2)], num_samples=100),
    )
    defaults.update(kwargs)
    return RunConfig(**defaults)


def _ssc_config(**kwargs):
    ssc = dict(
        blobs=BlobsSettings(n_samples=30, seed=2),
        methods=["SC", "SSC+MCP"],
        k_neighbors=5,
        restarts=3,
        lambda_grid=[1e-2, 1e-3],
        theta_grid=[1e-1],
    )
    ssc.update(kwargs)
    return RunConfig(experiment="ssc", seeds=[0], stop=StoppingRule(max_iterations=20), ssc=SscSettings(**ssc))


class TestRunSpca:
    """Test the sparse PCA benchmark."""

    def test_result_files(self, tmp_path):
        out = run_spca(_spca_config(), str(tmp_path / "run"))
        assert (out / "summary.csv").exists()
        assert (out / "timing.csv").exists()
        assert (out / "run_manifest.json").exists()
        traces = sorted(p.name for p in (out / "traces").iterdir())
        assert len(traces) == 6
        assert "spca_vsmooth_N10_p2_seed0.csv" in traces

    def test_summary_rows(self, tmp_path):
        out = run_spca(_spca_config(), str(tmp_path))
        rows = _read_csv(out / "summary.csv")
        assert list(rows[0]) == SPCA_SUMMARY_COLUMNS
        assert [r["algorithm"] for r in rows] == ["vsmooth", "rsub", "rsmooth"]
        for row in rows:
            assert float(row["feasi"]) <= 1e-10
            assert 0.0 <= float(row["sparsity"]) <= 1.0
            assert float(row["itr"]) <= 20

    def test_manifest_echoes_config(self, tmp_path):
        out = run_spca(_spca_config(seeds=[3]), str(tmp_path))
        manifest = json.loads((out / "run_manifest.json").read_text(encoding="utf-8"))
        assert manifest["config"]["seeds"] == [3]
        assert manifest["config"]["stop"]["max_iterations"] == 20
        assert manifest["app_name"] == "varsmooth"

    def test_summary_byte_identical(self, tmp_path):
        config = _spca_config()
        first = run_spca(config, str(tmp_path / "a"))
        second = run_spca(config, str(tmp_path / "b"))
        assert (first / "summary.csv").read_bytes() == (second / "summary.csv").read_bytes()

    @pytest.mark.slow
    def test_reference_size_ten_seeds(self, tmp_path):
        """(N, p) = (200, 1), lam = 0.1, 5000 iterations, seeds 0-9: means per solver."""
        config = _spca_config(
            seeds=list(range(10)),
            stop=StoppingRule(max_iterations=5000),
            spca=SpcaSettings(sizes=[SpcaSize(N=200, p=1)], lam=0.1),
        )
        out = run_spca(config, str(tmp_path))
        rows = {r["algorithm"]: r for r in _read_csv(out / "summary.csv")}

        vsmooth = float(rows["vsmooth"]["fval"])
        assert 0.085 <= vsmooth <= 0.105
        for solver in ("vsmooth", "rsub", "rsmooth"):
            assert float(rows[solver]["fval"]) == pytest.approx(vsmooth, rel=0.02)
            assert float(rows[solver]["feasi"]) <= 1e-10
        assert float(rows["vsmooth"]["sparsity"]) >= 0.99

    def test_time_budget(self, tmp_path):
        config = _spca_config(solvers=["vsmooth"], seeds=[0], stop=StoppingRule(max_iterations=10**6))
        config = config.with_overrides(time_budget=0.2)
        out = run_spca(config, str(tmp_path))
        timing = _read_csv(out / "timing.csv")
        assert float(timing[0]["time"]) <= 0.2 + 1.0

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x", encoding="utf-8")
        with pytest.raises(ResultWriteError):
            run_spca(_spca_config(), str(blocker))


class TestRunSsc:
    """Test the clustering benchmark."""

    def test_result_files(self, tmp_path):
        out = run_ssc(_ssc_config(), out_dir=str(tmp_path))
        summary = _read_csv(out / "summary.csv")
        assert list(summary[0]) == SSC_SUMMARY_COLUMNS
        assert [r["method"] for r in summary] == ["SC", "SSC+MCP"]
        grid = _read_csv(out / "grid.csv")
        assert list(grid[0]) == SSC_GRID_COLUMNS
        assert len(grid) == 3
        assert (out / "labels_SC.csv").exists()
        assert (out / "labels_SSC_MCP.csv").exists()

    def test_best_cell_selected(self, tmp_path):
        out = run_ssc(_ssc_config(), out_dir=str(tmp_path))
        grid = [r for r in _read_csv(out / "grid.csv") if r["method"] == "SSC+MCP"]
        best = max(float(r["score"]) for r in grid)
        summary = [r for r in _read_csv(out / "summary.csv") if r["method"] == "SSC+MCP"][0]
        assert 0.5 * (float(summary["NMI_mean"]) + float(summary["ARI_mean"])) == pytest.approx(best)

    def test_manifest_flags_selection(self, tmp_path):
        out = run_ssc(_ssc_config(), out_dir=str(tmp_path))
        manifest = json.loads((out / "run_manifest.json").read_text(encoding="utf-8"))
        assert manifest["selection_uses_ground_truth"] is True
        assert manifest["dataset"]["K"] == 3

    def test_unlabeled_dataset(self, tmp_path):
        blobs = make_blobs_dataset(30, seed=2)
        path = write_dataset(tmp_path / "data" / "blobs.csv", Dataset(blobs.points, None, K=3))
        out = run_ssc(_ssc_config(), dataset_path=str(path), out_dir=str(tmp_path / "out"))
        summary = _read_csv(out / "summary.csv")
        assert list(summary[0]) == ["method", "lambda", "theta"]
        assert len(_read_csv(out / "grid.csv")) == 2
        labels = _read_csv(out / "labels_SC.csv")
        assert len(labels) == 30
        manifest = json.loads((out / "run_manifest.json").read_text(encoding="utf-8"))
        assert manifest["selection_uses_ground_truth"] is False

    def test_single_cluster_rejected(self, tmp_path):
        with pytest.raises(InvalidArgumentError):
            run_ssc(_ssc_config(K=1), out_dir=str(tmp_path))

    def test_summary_byte_identical(self, tmp_path):
        config = _ssc_config()
        first = run_ssc(config, out_dir=str(tmp_path / "a"))
        second = run_ssc(config, out_dir=str(tmp_path / "b"))
        assert (first / "summary.csv").read_bytes() == (second / "summary.csv").read_bytes()

    @pytest.mark.slow
    def test_blobs_grid_selection(self, tmp_path):
        ssc = SscSettings(
            blobs=BlobsSettings(n_samples=150, separation=10.0, seed=0),
            methods=["SC", "SSC+MCP"],
            k_neighbors=10,
            restarts=100,
            lambda_grid=[1e-1, 1e-2, 1e-3],
            theta_grid=[1e-1, 1e-2],
        )
        config = RunConfig(experiment="ssc", seeds=[0], stop=StoppingRule(max_iterations=2000), ssc=ssc)
        out = run_ssc(config, out_dir=str(tmp_path))

        grid = [r for r in _read_csv(out / "grid.csv") if r["method"] == "SSC+MCP"]
        assert len(grid) == 6
        assert all(0.0 <= float(r["NMI_mean"]) <= 1.0 for r in grid)
        summary = {r["method"]: r for r in _read_csv(out / "summary.csv")}
        best = summary["SSC+MCP"]
        assert float(best["lambda"]) in ssc.lambda_grid
        assert float(best["theta"]) in ssc.theta_grid
        assert float(best["NMI_mean"]) >= 0.9
        assert float(best["ARI_mean"]) >= 0.9
