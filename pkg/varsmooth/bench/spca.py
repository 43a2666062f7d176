"""Sparse PCA: minimize -Tr(U^T Xi^T Xi U) + lam ||U||_1 over St(p, N)."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from varsmooth.core.errors import InvalidArgumentError
from varsmooth.core.logger import get_logger
from varsmooth.optim.cayley import CayleyChart, chart_from_anchor
from varsmooth.optim.checks import orthonormality_error
from varsmooth.optim.composite import CompositeProblem, SmoothFunction, identity_mapping
from varsmooth.optim.prox import WeaklyConvexFunction

logger = get_logger(__name__)

DEFAULT_SAMPLES = 5000
SPARSITY_TOLERANCE = 1e-4


@dataclass(frozen=True, eq=False)
class SpcaInstance:
    """Data matrix Xi (samples x N) with the l1 weight and target width p.

    The Gram matrix Xi^T Xi is computed once on construction.
    """

    Xi: np.ndarray
    lam: float
    p: int
    gram: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        Xi = np.asarray(self.Xi, dtype=float)
        if Xi.ndim != 2:
            raise InvalidArgumentError("Xi", Xi.shape, "a 2-D data matrix")
        if not 1 <= self.p <= Xi.shape[1]:
            raise InvalidArgumentError("p", self.p, f"1 <= p <= N = {Xi.shape[1]}")
        if self.lam < 0:
            raise InvalidArgumentError("lam", self.lam, "lam >= 0")
        object.__setattr__(self, "Xi", Xi)
        object.__setattr__(self, "gram", Xi.T @ Xi)

    @property
    def N(self) -> int:
        return self.Xi.shape[1]

    @property
    def num_samples(self) -> int:
        return self.Xi.shape[0]

    def gram_norm(self) -> float:
        """Spectral norm of Xi^T Xi (its largest eigenvalue)."""
        return float(scipy.linalg.eigvalsh(self.gram, subset_by_index=[self.N - 1, self.N - 1])[0])


def generate_spca(
    N: int,
    p: int,
    num_samples: int = DEFAULT_SAMPLES,
    seed: Optional[int] = None,
    lam: float = 0.1,
) -> SpcaInstance:
    """Draw Xi with standard normal entries, center its columns and scale it to ||Xi||_F = 1.

    Args:
        N: Number of variables
        p: Number of components
        num_samples: Number of rows of Xi
        seed: Seed of the PCG64 generator
        lam: l1 weight

    Returns:
        SpcaInstance
    """
    if not 1 <= p <= N:
        raise InvalidArgumentError("(N, p)", (N, p), "N >= p >= 1")
    if num_samples < 1:
        raise InvalidArgumentError("num_samples", num_samples, "num_samples >= 1")

    rng = np.random.default_rng(seed)
    Xi = rng.standard_normal((num_samples, N))
    Xi -= Xi.mean(axis=0)
    Xi /= np.linalg.norm(Xi)
    logger.debug("SPCA instance generated", N=N, p=p, num_samples=num_samples, seed=seed)
    return SpcaInstance(Xi, lam, p)


def initial_point(N: int, p: int, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal basis of the range of an N x p Gaussian matrix."""
    return scipy.linalg.orth(rng.standard_normal((N, p)))


def spca_problem(
    instance: SpcaInstance,
    U0: Optional[np.ndarray] = None,
    regularizer: Optional[WeaklyConvexFunction] = None,
    chart: Optional[CayleyChart] = None,
) -> CompositeProblem:
    """Composite problem with h(U) = -Tr(U^T G U), g = lam l1 and Smap = Id.

    Args:
        instance: SPCA data
        U0: Anchor of the Cayley chart; the identity chart when None
        regularizer: Replaces lam l1 (for instance by MCP)
        chart: Prebuilt chart, overrides U0

    Returns:
        CompositeProblem
    """
    G = instance.gram
    norm = instance.gram_norm()
    h = SmoothFunction(
        value=lambda U: -float(np.sum(U * (G @ U))),
        gradient=lambda U: -(G + G.T) @ U,
        grad_lipschitz=2.0 * norm,
        value_bound=2.0 * norm * np.sqrt(instance.p),
    )
    g = regularizer if regularizer is not None else WeaklyConvexFunction.l1(instance.lam)
    if chart is None:
        chart = CayleyChart.identity(instance.N, instance.p) if U0 is None else chart_from_anchor(U0)[0]
    return CompositeProblem(h=h, S_map=identity_mapping(), g=g, chart=chart)


def sparsity(U: np.ndarray, tol: float = SPARSITY_TOLERANCE) -> float:
    """Fraction of entries with magnitude below `tol`."""
    U = np.asarray(U, dtype=float)
    return float(np.mean(np.abs(U) < tol))


def feasibility(U: np.ndarray) -> float:
    """||I_p - U^T U||_F."""
    return orthonormality_error(U)
