"""Pytest configuration and shared fixtures."""

import os

import numpy as np
import pytest

# Set test environment variables
os.environ["VARSMOOTH_LOG_LEVEL"] = "WARNING"
os.environ["VARSMOOTH_DEBUG"] = "false"

from varsmooth.bench.spca import generate_spca, initial_point, spca_problem  # noqa: E402
from varsmooth.bench.ssc import Dataset, knn_affinity, ssc_problem  # noqa: E402
from varsmooth.core.logger import setup_logging  # noqa: E402
from varsmooth.optim.cayley import CayleyChart, chart_from_anchor  # noqa: E402
from varsmooth.optim.prox import WeaklyConvexFunction  # noqa: E402

setup_logging()


@pytest.fixture
def rng():
    """Seeded generator, fresh for every test."""
    return np.random.default_rng(12345)


@pytest.fixture
def identity_chart():
    """S = I on St(2, 5)."""
    return CayleyChart.identity(5, 2)


@pytest.fixture
def anchored_chart(rng):
    """Chart anchored at a random point of St(2, 6), with the point and its parameter."""
    U0 = initial_point(6, 2, rng)
    chart, V0 = chart_from_anchor(U0)
    return chart, U0, V0


@pytest.fixture(scope="module")
def small_spca():
    """Seeded (N, p) = (8, 3) sparse PCA instance."""
    return generate_spca(8, 3, num_samples=200, seed=7, lam=0.1)


@pytest.fixture
def spca_l1(small_spca, rng):
    """SPCA problem on a chart anchored at a random point."""
    return spca_problem(small_spca, initial_point(8, 3, rng))


@pytest.fixture(scope="module")
def two_groups():
    """Ten points in two well-separated groups of five."""
    generator = np.random.default_rng(3)
    centers = np.repeat(np.array([[0.0, 0.0], [8.0, 0.0]]), 5, axis=0)
    points = centers + 0.3 * generator.standard_normal((10, 2))
    return Dataset(points, np.repeat([0, 1], 5), K=2, name="two_groups")


@pytest.fixture
def ssc_mcp(two_groups):
    """(N, K) = (10, 2) sparse spectral clustering problem with an MCP penalty."""
    graph = knn_affinity(two_groups, k=3)
    return ssc_problem(graph, 2, WeaklyConvexFunction.mcp(0.1, 1.0))
