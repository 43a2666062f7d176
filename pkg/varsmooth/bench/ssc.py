"""Sparse spectral clustering pipeline.

Steps: k-NN affinity graph, normalized Laplacian, spectral embedding,
the sparse objective Tr(U^T L U) + g(U U^T) solved by variable smoothing,
row normalization, k-means, then NMI/ARI against ground truth.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.linalg
from joblib import Parallel, delayed
from scipy.spatial.distance import cdist
from sklearn.cluster import KMeans
from sklearn.datasets import make_blobs
from sklearn.metrics import adjusted_rand_score, normalized_mutual_info_score

from varsmooth.core.errors import (
    DegenerateEmbeddingError,
    GraphConstructionError,
    InvalidArgumentError,
    NumericalFailureError,
)
from varsmooth.core.logger import get_logger
from varsmooth.optim.cayley import CayleyChart, chart_from_anchor
from varsmooth.optim.composite import CompositeProblem, SmoothFunction, gram_mapping
from varsmooth.optim.prox import WeaklyConvexFunction
from varsmooth.optim.trace import SolverTrace
from varsmooth.optim.vsmooth import vsmooth_run
from varsmooth.schemas.solver_schema import ArmijoConfig, SmoothingSchedule, StoppingRule

logger = get_logger(__name__)

ZERO_ROW_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class Dataset:
    """Points (N x d) with optional integer labels in [0, K)."""

    points: np.ndarray
    labels: Optional[np.ndarray]
    K: int
    name: str = "dataset"

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=float)
        if points.ndim != 2 or points.shape[0] < 1:
            raise InvalidArgumentError("points", points.shape, "an N x d array with N >= 1")
        if self.K < 1:
            raise InvalidArgumentError("K", self.K, "K >= 1")
        object.__setattr__(self, "points", points)
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=int)
            if labels.shape != (points.shape[0],):
                raise InvalidArgumentError("labels", labels.shape, f"shape ({points.shape[0]},)")
            if labels.min() < 0 or labels.max() >= self.K:
                raise InvalidArgumentError("labels", (labels.min(), labels.max()), f"values in [0, {self.K})")
            object.__setattr__(self, "labels", labels)

    @property
    def N(self) -> int:
        return self.points.shape[0]

    def subsample(self, size: int, seed: int = 0) -> "Dataset":
        """Uniform row sample without replacement, original order kept."""
        if not 1 <= size <= self.N:
            raise InvalidArgumentError("size", size, f"1 <= size <= {self.N}")
        rows = np.sort(np.random.default_rng(seed).choice(self.N, size=size, replace=False))
        labels = None if self.labels is None else self.labels[rows]
        return Dataset(self.points[rows], labels, self.K, f"{self.name}[{size}]")


@dataclass(frozen=True, eq=False)
class GraphMatrices:
    """Affinity W, degrees diag(D) and normalized Laplacian L = I - D^(-1/2) W D^(-1/2)."""

    W: np.ndarray
    degrees: np.ndarray
    L: np.ndarray

    @property
    def D(self) -> np.ndarray:
        return np.diag(self.degrees)

    @property
    def N(self) -> int:
        return self.W.shape[0]


def knn_affinity(dataset: Dataset, k: int, bandwidth: Optional[float] = None) -> GraphMatrices:
    """Gaussian weights on the symmetrized k-nearest-neighbor graph.

    W_ij = exp(-||x_i - x_j||^2 / (2 s_i s_j)) when j is among the k nearest
    neighbors of i or i among those of j. With `bandwidth` None, s_i is the
    distance from x_i to its ceil(k/2)-th neighbor; otherwise s_i = bandwidth.

    Args:
        dataset: Points to connect
        k: Number of neighbors, 1 <= k < N
        bandwidth: Global scale overriding local scaling

    Returns:
        GraphMatrices
    """
    N = dataset.N
    if not 1 <= k < N:
        raise InvalidArgumentError("k", k, f"1 <= k < N = {N}")
    if bandwidth is not None and bandwidth <= 0:
        raise InvalidArgumentError("bandwidth", bandwidth, "bandwidth > 0")

    dist = cdist(dataset.points, dataset.points)
    np.fill_diagonal(dist, np.inf)
    neighbors = np.argsort(dist, axis=1, kind="stable")[:, :k]
    rows = np.arange(N)[:, None]

    mask = np.zeros((N, N), dtype=bool)
    mask[rows, neighbors] = True
    mask |= mask.T

    if bandwidth is None:
        sigma = np.maximum(dist[np.arange(N), neighbors[:, math.ceil(k / 2) - 1]], np.finfo(float).eps)
        scale = sigma[:, None] * sigma[None, :]
    else:
        scale = np.full((N, N), bandwidth**2)

    with np.errstate(over="ignore", invalid="ignore"):
        W = np.where(mask, np.exp(-(dist**2) / (2.0 * scale)), 0.0)
    np.fill_diagonal(W, 0.0)
    W = 0.5 * (W + W.T)

    degrees = W.sum(axis=1)
    isolated = np.flatnonzero(degrees <= 0)
    if isolated.size:
        raise GraphConstructionError(int(isolated[0]))

    d = 1.0 / np.sqrt(degrees)
    L = np.eye(N) - d[:, None] * W * d[None, :]
    L = 0.5 * (L + L.T)
    logger.debug("Affinity graph built", N=N, k=k, edges=int(mask.sum() // 2))
    return GraphMatrices(W=W, degrees=degrees, L=L)


def sc_embed(graph: GraphMatrices, K: int) -> np.ndarray:
    """Eigenvectors of L for its K smallest eigenvalues.

    Each column is signed so that its largest-magnitude entry is positive.
    """
    N = graph.N
    if not 1 <= K <= N:
        raise InvalidArgumentError("K", K, f"1 <= K <= N = {N}")
    try:
        _, U = scipy.linalg.eigh(graph.L, subset_by_index=[0, K - 1])
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalFailureError(0, f"Laplacian eigendecomposition ({e})") from e
    pivots = np.argmax(np.abs(U), axis=0)
    return U * np.sign(U[pivots, np.arange(K)])


def ssc_problem(
    graph: GraphMatrices,
    K: int,
    regularizer: WeaklyConvexFunction,
    U0: Optional[np.ndarray] = None,
    chart: Optional[CayleyChart] = None,
) -> CompositeProblem:
    """h(U) = Tr(U^T L U), Smap(U) = U U^T, with the chart anchored at U0 (the SC solution by default).

    A prebuilt `chart` is used as is and U0 is ignored.
    """
    L = graph.L
    if chart is None:
        chart, _ = chart_from_anchor(sc_embed(graph, K) if U0 is None else U0)
    norm = float(np.abs(scipy.linalg.eigvalsh(L, subset_by_index=[graph.N - 1, graph.N - 1])[0]))
    h = SmoothFunction(
        value=lambda U: float(np.sum(U * (L @ U))),
        gradient=lambda U: (L + L.T) @ U,
        grad_lipschitz=2.0 * norm,
        value_bound=2.0 * norm * np.sqrt(K),
    )
    return CompositeProblem(h=h, S_map=gram_mapping(), g=regularizer, chart=chart)


def row_normalize(U: np.ndarray) -> np.ndarray:
    """Scale every row to unit Euclidean norm."""
    U = np.asarray(U, dtype=float)
    norms = np.linalg.norm(U, axis=1)
    zero = np.flatnonzero(norms <= ZERO_ROW_TOLERANCE)
    if zero.size:
        raise DegenerateEmbeddingError(zero.tolist())
    return U / norms[:, None]


def _restart_seeds(seed: int, restarts: int) -> List[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(restarts)]


def _kmeans_once(rows: np.ndarray, K: int, seed: int) -> Tuple[np.ndarray, float]:
    model = KMeans(n_clusters=K, init="k-means++", n_init=1, random_state=seed).fit(rows)
    return model.labels_.astype(int), float(model.inertia_)


def kmeans_runs(
    rows: np.ndarray, K: int, restarts: int, seed: int, workers: int = 1
) -> List[Tuple[np.ndarray, float]]:
    """Independent k-means++/Lloyd runs, each seeded from its own SeedSequence child.

    Returns:
        List of (labels, inertia), one per restart, in restart order
    """
    if not 1 <= K <= rows.shape[0]:
        raise InvalidArgumentError("K", K, f"1 <= K <= N = {rows.shape[0]}")
    if restarts < 1:
        raise InvalidArgumentError("restarts", restarts, "restarts >= 1")
    seeds = _restart_seeds(seed, restarts)
    if workers == 1:
        return [_kmeans_once(rows, K, s) for s in seeds]
    return Parallel(n_jobs=workers)(delayed(_kmeans_once)(rows, K, s) for s in seeds)


def kmeans(rows: np.ndarray, K: int, restarts: int = 10, seed: int = 0, workers: int = 1) -> np.ndarray:
    """Labels of the lowest-inertia run among `restarts` k-means runs."""
    runs = kmeans_runs(rows, K, restarts, seed, workers)
    return min(runs, key=lambda run: run[1])[0]


def _check_lengths(labels_a: np.ndarray, labels_b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    a = np.asarray(labels_a).ravel()
    b = np.asarray(labels_b).ravel()
    if a.shape != b.shape:
        raise InvalidArgumentError("labels", (a.size, b.size), "labelings of equal length")
    return a, b


def nmi(labels_a: np.ndarray, labels_b: np.ndarray) -> float:
    """Normalized mutual information I(A;B)/sqrt(H(A)H(B)).

    Two constant labelings score 1; one constant labeling against a
    non-constant one scores 0.
    """
    a, b = _check_lengths(labels_a, labels_b)
    constant_a = np.unique(a).size <= 1
    constant_b = np.unique(b).size <= 1
    if constant_a and constant_b:
        return 1.0
    if constant_a or constant_b:
        return 0.0
    return float(normalized_mutual_info_score(a, b, average_method="geometric"))


def ari(labels_a: np.ndarray, labels_b: np.ndarray) -> float:
    """Adjusted Rand index."""
    a, b = _check_lengths(labels_a, labels_b)
    return float(adjusted_rand_score(a, b))


@dataclass(frozen=True, eq=False)
class SscOutcome:
    """Result of one pipeline execution.

    Attributes:
        labels: Lowest-inertia k-means labeling
        metrics: NMI_mean / ARI_mean over the restarts (empty without ground truth)
        trace: Solver trace (None for plain spectral clustering)
        embedding: Row-normalized embedding handed to k-means
    """

    labels: np.ndarray
    metrics: Dict[str, float]
    trace: Optional[SolverTrace]
    embedding: np.ndarray


def ssc_run(
    dataset: Dataset,
    K: int,
    regularizer: Optional[WeaklyConvexFunction],
    stop: StoppingRule,
    armijo: Optional[ArmijoConfig] = None,
    alpha: float = 3.0,
    k_neighbors: int = 10,
    bandwidth: Optional[float] = None,
    restarts: int = 100,
    seed: int = 0,
    workers: int = 1,
) -> SscOutcome:
    """Run the clustering pipeline.

    A missing regularizer (or lam = 0) gives plain spectral clustering; otherwise
    the sparse objective is solved by variable smoothing from the SC solution.

    Args:
        dataset: Points and optional ground truth
        K: Number of clusters
        regularizer: Sparsity penalty on U U^T
        stop: Stopping rule of the solver
        armijo: Armijo parameters
        alpha: Exponent of the smoothing schedule
        k_neighbors: Graph degree parameter
        bandwidth: Global affinity scale, local scaling when None
        restarts: Number of k-means runs averaged for the metrics
        seed: Master seed of the k-means runs
        workers: Parallel k-means workers

    Returns:
        SscOutcome
    """
    if K < 2:
        raise InvalidArgumentError("K", K, "K >= 2")
    graph = knn_affinity(dataset, k_neighbors, bandwidth)
    U_sc = sc_embed(graph, K)

    trace = None
    U = U_sc
    if regularizer is not None and regularizer.lam > 0:
        chart, V0 = chart_from_anchor(U_sc)
        problem = ssc_problem(graph, K, regularizer, chart=chart)
        schedule = SmoothingSchedule(eta=regularizer.schedule_eta(), alpha=alpha)
        trace = vsmooth_run(problem, V0, schedule, armijo, stop)
        U = trace.final_U

    rows = row_normalize(U)
    runs = kmeans_runs(rows, K, restarts, seed, workers)
    labels = min(runs, key=lambda run: run[1])[0]

    metrics: Dict[str, float] = {}
    if dataset.labels is not None:
        metrics["NMI_mean"] = float(np.mean([nmi(dataset.labels, r[0]) for r in runs]))
        metrics["ARI_mean"] = float(np.mean([ari(dataset.labels, r[0]) for r in runs]))
    return SscOutcome(labels=labels, metrics=metrics, trace=trace, embedding=rows)


def make_blobs_dataset(n_samples: int = 150, separation: float = 10.0, seed: int = 0) -> Dataset:
    """Three unit-variance Gaussian blobs in the plane with pairwise center distance `separation`."""
    centers = separation * np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3.0) / 2.0]])
    points, labels = make_blobs(n_samples=n_samples, centers=centers, cluster_std=1.0, random_state=seed)
    return Dataset(points, labels, K=3, name="blobs")
