"""Benchmark orchestration: SPCA grid and SSC parameter sweeps with result files."""

from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from varsmooth.bench.io import ensure_dir, read_dataset, write_json, write_labels, write_rows
from varsmooth.bench.spca import feasibility, generate_spca, initial_point, sparsity, spca_problem
from varsmooth.bench.ssc import Dataset, make_blobs_dataset, ssc_run
from varsmooth.core.config import get_settings
from varsmooth.core.errors import InvalidArgumentError
from varsmooth.core.logger import get_logger
from varsmooth.optim.baselines import rsmooth_run, rsub_run
from varsmooth.optim.cayley import chart_from_anchor
from varsmooth.optim.composite import value_at
from varsmooth.optim.prox import WeaklyConvexFunction
from varsmooth.optim.vsmooth import vsmooth_run
from varsmooth.schemas.result_schema import (
    SpcaSummaryRow,
    SscGridRow,
    SscSummaryRow,
    TimingRow,
)
from varsmooth.schemas.run_schema import BlobsSettings, RunConfig, Solver, SpcaSize
from varsmooth.schemas.solver_schema import SmoothingSchedule

logger = get_logger(__name__)

SPCA_SUMMARY_COLUMNS = ["algorithm", "N", "p", "fval", "feasi", "itr", "sparsity"]
TIMING_COLUMNS = ["algorithm", "N", "p", "time"]
SSC_SUMMARY_COLUMNS = ["method", "lambda", "theta", "NMI_mean", "ARI_mean"]
SSC_GRID_COLUMNS = SSC_SUMMARY_COLUMNS + ["score", "iterations"]


def _output_dir(config: RunConfig, out_dir: Optional[str]) -> Path:
    return ensure_dir(out_dir or config.output_dir or get_settings().output_dir)


def _manifest(config: RunConfig, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    settings = get_settings()
    manifest = {
        "app_name": settings.app_name,
        "app_version": settings.app_version,
        "config": config.model_dump(mode="json"),
    }
    manifest.update(extra or {})
    return manifest


def _spca_regularizer(config: RunConfig) -> WeaklyConvexFunction:
    spca = config.spca
    if spca.regularizer == "mcp":
        return WeaklyConvexFunction.mcp(spca.lam, spca.theta)
    return WeaklyConvexFunction.l1(spca.lam)


def _spca_cell(config: RunConfig, size: SpcaSize, seed: int, solver: Solver, trace_dir: Path) -> Dict[str, Any]:
    """Solve one (size, seed, solver) cell and write its trace."""
    instance = generate_spca(size.N, size.p, config.spca.num_samples, seed=seed, lam=config.spca.lam)
    U0 = initial_point(size.N, size.p, np.random.default_rng([seed, size.N, size.p]))
    g = _spca_regularizer(config)
    chart, V0 = chart_from_anchor(U0)
    problem = spca_problem(instance, regularizer=g, chart=chart)

    stop = config.stop
    if config.spca.use_time_budgets and size.time_budget_seconds is not None:
        stop = stop.model_copy(update={"time_budget_seconds": size.time_budget_seconds})
    schedule = SmoothingSchedule(eta=config.eta or g.schedule_eta(), alpha=config.alpha)

    if solver == Solver.VSMOOTH:
        trace = vsmooth_run(problem, V0, schedule, config.armijo, stop, step_mode=config.step_mode,
                            value_every=config.value_every)
    elif solver == Solver.RSUB:
        trace = rsub_run(problem, U0, stop, decay=config.rsub_decay)
    else:
        trace = rsmooth_run(problem, U0, schedule, config.armijo, stop, value_every=config.value_every)

    trace.to_csv(trace_dir / f"spca_{solver.value}_N{size.N}_p{size.p}_seed{seed}.csv")
    U = trace.final_U
    return {
        "algorithm": solver.value,
        "N": size.N,
        "p": size.p,
        "seed": seed,
        "fval": value_at(problem, U),
        "feasi": feasibility(U),
        "itr": trace.iterations,
        "sparsity": sparsity(U),
        "time": trace.elapsed,
    }


def run_spca(config: RunConfig, out_dir: Optional[str] = None) -> Path:
    """Run every (size, seed, solver) cell and write summary, timing, traces and manifest.

    Returns:
        Output directory
    """
    out = _output_dir(config, out_dir)
    trace_dir = ensure_dir(out / "traces")
    cells: List[Tuple[SpcaSize, int, Solver]] = [
        (size, seed, solver) for size in config.spca.sizes for solver in config.solvers for seed in config.seeds
    ]
    logger.info("Running SPCA benchmark", cells=len(cells), workers=config.workers, out=str(out))

    if config.workers == 1:
        results = [_spca_cell(config, *cell, trace_dir) for cell in cells]
    else:
        results = Parallel(n_jobs=config.workers)(delayed(_spca_cell)(config, *cell, trace_dir) for cell in cells)

    summary: List[SpcaSummaryRow] = []
    timing: List[TimingRow] = []
    for size in config.spca.sizes:
        for solver in config.solvers:
            group = [r for r in results if r["N"] == size.N and r["p"] == size.p and r["algorithm"] == solver.value]
            summary.append(
                SpcaSummaryRow(
                    algorithm=solver.value,
                    N=size.N,
                    p=size.p,
                    fval=float(np.mean([r["fval"] for r in group])),
                    feasi=float(np.mean([r["feasi"] for r in group])),
                    itr=float(np.mean([r["itr"] for r in group])),
                    sparsity=float(np.mean([r["sparsity"] for r in group])),
                )
            )
            timing.append(
                TimingRow(algorithm=solver.value, N=size.N, p=size.p, time=float(np.mean([r["time"] for r in group])))
            )

    write_rows(out / "summary.csv", summary, SPCA_SUMMARY_COLUMNS)
    write_rows(out / "timing.csv", timing, TIMING_COLUMNS)
    write_json(out / "run_manifest.json", _manifest(config))
    logger.info("SPCA benchmark completed", rows=len(summary), out=str(out))
    return out


def _ssc_dataset(config: RunConfig) -> Dataset:
    ssc = config.ssc
    if ssc.dataset is not None:
        return read_dataset(ssc.dataset, K=ssc.K)
    blobs = ssc.blobs or BlobsSettings()
    return make_blobs_dataset(blobs.n_samples, blobs.separation, blobs.seed)


def _ssc_cells(config: RunConfig, labeled: bool) -> List[Tuple[str, float, Optional[float]]]:
    """(method, lam, theta) cells; without ground truth only the configured values are run."""
    ssc = config.ssc
    grid = ssc.grid_search and labeled
    lambdas = ssc.lambda_grid if grid else [ssc.lam]
    thetas = ssc.theta_grid if grid else [ssc.theta]
    cells: List[Tuple[str, float, Optional[float]]] = []
    for method in ssc.methods:
        if method == "SC":
            cells.append(("SC", 0.0, None))
        elif method == "SSC+l1":
            cells.extend(("SSC+l1", lam, None) for lam in lambdas)
        else:
            cells.extend(("SSC+MCP", lam, theta) for lam in lambdas for theta in thetas)
    return cells


def _ssc_cell(config: RunConfig, dataset: Dataset, K: int, cell: Tuple[str, float, Optional[float]]):
    method, lam, theta = cell
    if method == "SC":
        regularizer = None
    elif method == "SSC+l1":
        regularizer = WeaklyConvexFunction.l1(lam)
    else:
        regularizer = WeaklyConvexFunction.mcp(lam, theta)
    outcome = ssc_run(
        dataset,
        K,
        regularizer,
        config.stop,
        armijo=config.armijo,
        alpha=config.alpha,
        k_neighbors=config.ssc.k_neighbors,
        bandwidth=config.ssc.bandwidth,
        restarts=config.ssc.restarts,
        seed=config.seeds[0],
    )
    metrics = outcome.metrics
    score = None
    if metrics:
        score = 0.5 * (metrics["NMI_mean"] + metrics["ARI_mean"])
    row = SscGridRow(
        method=method,
        lam=lam,
        theta=theta,
        NMI_mean=metrics.get("NMI_mean"),
        ARI_mean=metrics.get("ARI_mean"),
        score=score,
        iterations=outcome.trace.iterations if outcome.trace is not None else 0,
    )
    return row, outcome.labels


def run_ssc(config: RunConfig, dataset_path: Optional[str] = None, out_dir: Optional[str] = None) -> Path:
    """Sweep the clustering methods and write summary, grid, labels and manifest.

    The best cell per method maximizes (NMI + ARI) / 2, which uses the
    ground-truth labels; the manifest records this.

    Returns:
        Output directory
    """
    if dataset_path is not None:
        config = config.with_overrides(dataset=dataset_path)
    dataset = _ssc_dataset(config)
    K = config.ssc.K or dataset.K
    if K < 2:
        raise InvalidArgumentError("K", K, "K >= 2 (one cluster is a degenerate clustering)")

    out = _output_dir(config, out_dir)
    labeled = dataset.labels is not None
    cells = _ssc_cells(config, labeled)
    logger.info("Running SSC benchmark", dataset=dataset.name, N=dataset.N, K=K, cells=len(cells))

    if config.workers == 1:
        results = [_ssc_cell(config, dataset, K, cell) for cell in cells]
    else:
        results = Parallel(n_jobs=config.workers)(delayed(_ssc_cell)(config, dataset, K, cell) for cell in cells)

    summary: List[SscSummaryRow] = []
    for method in config.ssc.methods:
        group = [(row, labels) for row, labels in results if row.method == method]
        if labeled:
            best_row, best_labels = max(group, key=lambda item: item[0].score)
        else:
            best_row, best_labels = group[0]
        summary.append(SscSummaryRow.model_validate(best_row.model_dump(include=set(SscSummaryRow.model_fields))))
        write_labels(out / f"labels_{method.replace('+', '_')}.csv", best_labels)

    if labeled:
        write_rows(out / "summary.csv", summary, SSC_SUMMARY_COLUMNS)
    else:
        write_rows(out / "summary.csv", summary, ["method", "lambda", "theta"])
    write_rows(out / "grid.csv", [row for row, _ in results], SSC_GRID_COLUMNS)
    write_json(
        out / "run_manifest.json",
        _manifest(
            config,
            {
                "dataset": {"name": dataset.name, "N": dataset.N, "K": K, "labeled": labeled},
                "selection_uses_ground_truth": labeled and config.ssc.grid_search,
            },
        ),
    )
    logger.info("SSC benchmark completed", methods=len(summary), out=str(out))
    return out

