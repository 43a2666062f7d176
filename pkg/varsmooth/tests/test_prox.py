"""Tests for proximity operators and Moreau envelopes."""

import numpy as np
import pytest

from varsmooth.core.errors import InvalidArgumentError
from varsmooth.optim.checks import central_difference, grid_minimize
from varsmooth.optim.prox import (
    RegularizerKind,
    WeaklyConvexFunction,
    moreau_grad,
    moreau_value,
    moreau_value_and_grad,
    prox_l1,
    prox_mcp,
)


def _mcp_scalar(x, lam, theta):
    magnitude = np.abs(x)
    return lam * np.where(magnitude <= theta, magnitude - x * x / (2 * theta), theta / 2)


class TestProxL1:
    """Test the soft threshold."""

    def test_zero_is_fixed(self):
        """Zero input maps to zero for any index."""
        assert np.array_equal(prox_l1(np.zeros(2), 0.7), np.zeros(2))

    def test_known_values(self):
        """Hand-computed thresholds."""
        np.testing.assert_allclose(prox_l1(np.array([3.0, -0.5]), 1.0), [2.0, 0.0])
        np.testing.assert_allclose(prox_l1(np.array([1.0]), 2.0), [0.0])
        np.testing.assert_allclose(prox_l1(np.array([-3.0]), 1.0, lam=0.5), [-2.5])

    def test_matches_grid_oracle(self, rng):
        """Soft threshold equals the grid minimizer of t|x| + (x - z)^2 / 2."""
        z = 3.0 * rng.standard_normal(50)
        oracle = grid_minimize(lambda x, zc: 0.8 * np.abs(x) + 0.5 * (x - zc) ** 2, z)
        np.testing.assert_allclose(prox_l1(z, 0.8), oracle, atol=1e-5)

    def test_nonpositive_index_rejected(self):
        """t <= 0 is an invalid argument."""
        with pytest.raises(InvalidArgumentError):
            prox_l1(np.array([1.0]), 0.0)
        with pytest.raises(InvalidArgumentError):
            prox_l1(np.array([1.0]), -1.0)


class TestProxMcp:
    """Test the minimax concave penalty prox."""

    def test_zero_is_fixed(self):
        assert prox_mcp(np.array([0.0]), 0.5, 1.0, 2.0)[0] == 0.0

    def test_beyond_theta_unchanged(self):
        """|z| >= theta leaves z as is."""
        np.testing.assert_allclose(prox_mcp(np.array([5.0, -2.5]), 0.5, 1.0, 2.0), [5.0, -2.5])

    def test_rescaled_threshold(self):
        """Middle region: (|z| - t lam) / (1 - t lam / theta)."""
        np.testing.assert_allclose(prox_mcp(np.array([1.0]), 0.5, 1.0, 2.0), [2.0 / 3.0])

    def test_dead_zone(self):
        """|z| <= t lam maps to zero."""
        np.testing.assert_allclose(prox_mcp(np.array([0.5, -0.3]), 0.5, 1.0, 2.0), [0.0, 0.0])

    def test_continuous_at_theta(self):
        """The middle formula reaches theta exactly at |z| = theta."""
        out = prox_mcp(np.array([2.0 - 1e-12, 2.0 + 1e-12]), 0.5, 1.0, 2.0)
        np.testing.assert_allclose(out, [2.0, 2.0], atol=1e-10)

    def test_matches_grid_oracle(self, rng):
        z = 3.0 * rng.standard_normal(50)
        t, lam, theta = 0.3, 1.0, 1.5
        oracle = grid_minimize(lambda x, zc: t * _mcp_scalar(x, lam, theta) + 0.5 * (x - zc) ** 2, z)
        np.testing.assert_allclose(prox_mcp(z, t, lam, theta), oracle, atol=1e-5)

    def test_nonunique_regime_rejected(self):
        """t lam / theta >= 1 is rejected."""
        with pytest.raises(InvalidArgumentError):
            prox_mcp(np.array([1.0]), 2.0, 1.0, 2.0)

    def test_invalid_parameters_rejected(self):
        with pytest.raises(InvalidArgumentError):
            prox_mcp(np.array([1.0]), 0.5, 0.0, 2.0)
        with pytest.raises(InvalidArgumentError):
            prox_mcp(np.array([1.0]), 0.5, 1.0, -1.0)


class TestWeaklyConvexFunction:
    """Test the regularizer record."""

    def test_weak_convexity(self):
        assert WeaklyConvexFunction.l1(0.3).eta == 0.0
        assert WeaklyConvexFunction.mcp(0.5, 2.0).eta == pytest.approx(0.25)

    def test_schedule_eta(self):
        """l1 uses 1; MCP uses max(1/theta, lam/theta)."""
        assert WeaklyConvexFunction.l1(0.1).schedule_eta() == 1.0
        assert WeaklyConvexFunction.mcp(0.5, 0.01).schedule_eta() == pytest.approx(100.0)
        assert WeaklyConvexFunction.mcp(3.0, 1.0).schedule_eta() == pytest.approx(3.0)

    def test_lipschitz(self):
        assert WeaklyConvexFunction.l1(2.0).lipschitz(9) == pytest.approx(6.0)

    def test_values(self):
        z = np.array([[1.0, -2.0], [0.0, 0.5]])
        assert WeaklyConvexFunction.l1(0.5).value(z) == pytest.approx(1.75)
        # MCP, theta = 1: 1 -> 1/2, 2 -> 1/2, 0 -> 0, 0.5 -> 0.375
        assert WeaklyConvexFunction.mcp(1.0, 1.0).value(z) == pytest.approx(1.375)

    def test_zero_weight_is_identity_prox(self):
        g = WeaklyConvexFunction.l1(0.0)
        z = np.array([1.5, -0.2])
        np.testing.assert_array_equal(g.prox(z, 1.0), z)
        assert g.value(z) == 0.0

    def test_subgradient_zero_at_zero(self):
        """Zero entries get the minimum-norm subgradient 0."""
        for g in (WeaklyConvexFunction.l1(1.0), WeaklyConvexFunction.mcp(1.0, 2.0)):
            assert g.subgradient(np.array([0.0]))[0] == 0.0

    def test_negative_weight_rejected(self):
        with pytest.raises(InvalidArgumentError):
            WeaklyConvexFunction(RegularizerKind.L1, -1.0)

    def test_index_check(self):
        g = WeaklyConvexFunction.mcp(1.0, 2.0)
        g.check_index(1.9)
        with pytest.raises(InvalidArgumentError):
            g.check_index(2.0)
        with pytest.raises(InvalidArgumentError):
            g.check_index(0.0)


class TestMoreauEnvelope:
    """Test envelope values and gradients."""

    def test_l1_values(self):
        g = WeaklyConvexFunction.l1(1.0)
        assert moreau_value(g, np.array([0.0]), 1.0) == 0.0
        assert moreau_value(g, np.array([2.0]), 1.0) == pytest.approx(1.5)
        assert moreau_value(g, np.array([0.5]), 1.0) == pytest.approx(0.125)

    def test_l1_gradients(self):
        g = WeaklyConvexFunction.l1(1.0)
        np.testing.assert_allclose(moreau_grad(g, np.array([0.0]), 1.0), [0.0])
        np.testing.assert_allclose(moreau_grad(g, np.array([2.0]), 1.0), [1.0])
        np.testing.assert_allclose(moreau_grad(g, np.array([0.5]), 1.0), [0.5])

    def test_gradient_matches_finite_difference(self, rng):
        g = WeaklyConvexFunction.mcp(1.0, 2.0)
        mu = 0.3
        for zi in [0.1, 0.7, 1.4, 3.0, -2.2]:
            fd = central_difference(lambda t: moreau_value(g, np.array([zi + t]), mu))
            assert moreau_grad(g, np.array([zi]), mu)[0] == pytest.approx(fd, abs=1e-6)

    def test_sandwich_and_gradient_bound(self, rng):
        """g^mu <= g <= g^mu + mu L^2 / 2 and |grad g^mu| <= L."""
        g = WeaklyConvexFunction.mcp(0.5, 0.8)
        mu = 0.2
        for zi in 2.0 * rng.standard_normal(200):
            z = np.array([zi])
            env = moreau_value(g, z, mu)
            assert env <= g.value(z) + 1e-12
            assert g.value(z) <= env + mu * g.lam**2 / 2 + 1e-12
            assert abs(moreau_grad(g, z, mu)[0]) <= g.lam + 1e-12

    def test_monotone_in_index(self, rng):
        g = WeaklyConvexFunction.l1(1.0)
        z = rng.standard_normal(20)
        assert moreau_value(g, z, 0.5) <= moreau_value(g, z, 0.1) + 1e-12

    def test_shared_evaluation_agrees(self, rng):
        g = WeaklyConvexFunction.mcp(1.0, 2.0)
        z = rng.standard_normal((4, 3))
        value, grad = moreau_value_and_grad(g, z, 0.4)
        assert value == pytest.approx(moreau_value(g, z, 0.4))
        np.testing.assert_allclose(grad, moreau_grad(g, z, 0.4))

    def test_invalid_index_rejected(self):
        with pytest.raises(InvalidArgumentError):
            moreau_value(WeaklyConvexFunction.l1(1.0), np.array([1.0]), 0.0)
        with pytest.raises(InvalidArgumentError):
            moreau_grad(WeaklyConvexFunction.mcp(1.0, 1.0), np.array([1.0]), 1.0)

    def test_prox_limit(self):
        """prox_{mu g}(z) -> z as mu -> 0."""
        g = WeaklyConvexFunction.l1(1.0)
        z = np.array([0.3, -1.2])
        gaps = [np.max(np.abs(g.prox(z, mu) - z)) for mu in (1e-1, 1e-3, 1e-6)]
        assert gaps[-1] <= 1.1e-6
        assert gaps == sorted(gaps, reverse=True)
