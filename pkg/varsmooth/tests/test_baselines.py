"""Tests for the Riemannian baselines and their manifold operations."""

import numpy as np
import pytest

from varsmooth.bench.spca import feasibility, generate_spca, initial_point, sparsity, spca_problem
from varsmooth.core.errors import InvalidArgumentError, UnsupportedProblemError
from varsmooth.optim.baselines import TangentVector, polar_retract, rsmooth_run, rsub_run, tangent_project
from varsmooth.optim.cayley import cayley_forward
from varsmooth.optim.checks import orthonormality_error
from varsmooth.optim.composite import value_at
from varsmooth.optim.prox import WeaklyConvexFunction
from varsmooth.optim.vsmooth import vsmooth_run
from varsmooth.schemas.solver_schema import SmoothingSchedule, StoppingRule


class TestTangentProject:
    """Test the orthogonal projection onto T_U St(p, N)."""

    def test_tangent_input_unchanged(self, rng):
        U = initial_point(7, 3, rng)
        D = tangent_project(U, rng.standard_normal((7, 3))).direction
        np.testing.assert_allclose(tangent_project(U, D).direction, D, atol=1e-12)

    def test_normal_direction_removed(self, rng):
        U = initial_point(6, 1, rng)
        np.testing.assert_allclose(tangent_project(U, U).direction, np.zeros((6, 1)), atol=1e-14)

    def test_idempotent_and_nonexpansive(self, rng):
        U = initial_point(8, 2, rng)
        for _ in range(10):
            X = rng.standard_normal((8, 2))
            once = tangent_project(U, X).direction
            twice = tangent_project(U, once).direction
            assert np.linalg.norm(twice - once) <= 1e-12
            assert np.linalg.norm(once) <= np.linalg.norm(X) + 1e-12

    def test_non_orthonormal_base_rejected(self, rng):
        with pytest.raises(InvalidArgumentError):
            tangent_project(2.0 * initial_point(5, 2, rng), np.zeros((5, 2)))

    def test_non_tangent_vector_rejected(self, rng):
        U = initial_point(5, 2, rng)
        with pytest.raises(InvalidArgumentError):
            TangentVector(U, U)


class TestPolarRetract:
    """Test R_U(D) = (U + D)(I + D^T D)^(-1/2)."""

    def test_zero_step(self, rng):
        U = initial_point(6, 2, rng)
        D = TangentVector(U, np.zeros((6, 2)))
        np.testing.assert_allclose(polar_retract(U, D), U, atol=1e-14)

    def test_output_orthonormal(self, rng):
        for _ in range(20):
            U = initial_point(9, 3, rng)
            D = tangent_project(U, 3.0 * rng.standard_normal((9, 3)))
            assert orthonormality_error(polar_retract(U, D)) <= 1e-12

    def test_matches_svd_polar_factor(self, rng):
        U = initial_point(7, 2, rng)
        D = tangent_project(U, rng.standard_normal((7, 2)))
        A, _, Bt = np.linalg.svd(U + D.direction, full_matrices=False)
        np.testing.assert_allclose(polar_retract(U, D), A @ Bt, atol=1e-10)

    def test_first_order_agreement(self, rng):
        """||R(tD) - (U + tD)|| shrinks quadratically in t."""
        U = initial_point(6, 2, rng)
        D = tangent_project(U, rng.standard_normal((6, 2)))
        D = D.scaled(1.0 / D.norm())
        errors = [np.linalg.norm(polar_retract(U, D.scaled(t)) - (U + t * D.direction)) for t in (0.1, 0.05, 0.025)]
        for coarse, fine in zip(errors, errors[1:]):
            assert 3.5 <= coarse / fine <= 4.5


class TestRsub:
    """Test the Riemannian subgradient baseline."""

    def test_run(self, small_spca, rng):
        U0 = initial_point(8, 3, rng)
        problem = spca_problem(small_spca)
        trace = rsub_run(problem, U0, StoppingRule(max_iterations=50))
        assert trace.iterations == 50
        gammas = trace.column("gamma")
        np.testing.assert_allclose(gammas[1:], 0.99 ** np.arange(1, 51))
        assert np.isnan(trace.column("mu")).all()
        assert np.isfinite(trace.column("grad_norm")).all()
        assert trace.final_V is None
        assert feasibility(trace.final_U) <= 1e-12

    def test_iterates_feasible(self, small_spca, rng):
        problem = spca_problem(small_spca)
        errors = []
        rsub_run(problem, initial_point(8, 3, rng), StoppingRule(max_iterations=30),
                 callback=lambda state: errors.append(orthonormality_error(state.U)))
        assert max(errors) <= 1e-12

    def test_invalid_decay(self, small_spca, rng):
        with pytest.raises(InvalidArgumentError):
            rsub_run(spca_problem(small_spca), initial_point(8, 3, rng), StoppingRule(max_iterations=1), decay=1.0)

    def test_rejects_nonlinear_mapping(self, ssc_mcp, rng):
        with pytest.raises(UnsupportedProblemError):
            rsub_run(ssc_mcp, initial_point(10, 2, rng), StoppingRule(max_iterations=1))


class TestRsmooth:
    """Test the Riemannian smoothing gradient baseline."""

    def test_smooth_case_descends(self, small_spca, rng):
        problem = spca_problem(small_spca, None, WeaklyConvexFunction.l1(0.0))
        trace = rsmooth_run(problem, initial_point(8, 3, rng), SmoothingSchedule(eta=1.0),
                            stop=StoppingRule(max_iterations=100))
        assert np.all(np.diff(trace.column("true_value")) <= 1e-14)

    def test_directions_tangent(self, small_spca, rng):
        problem = spca_problem(small_spca)
        residuals = []

        def audit(state):
            D = state.direction
            residuals.append(np.linalg.norm(state.U.T @ D + D.T @ state.U) / max(1.0, np.linalg.norm(D)))
            assert orthonormality_error(state.U) <= 1e-12

        rsmooth_run(problem, initial_point(8, 3, rng), SmoothingSchedule(eta=1.0),
                    stop=StoppingRule(max_iterations=50), callback=audit)
        assert max(residuals) <= 1e-10

    def test_smoothing_indices_recorded(self, small_spca, rng):
        schedule = SmoothingSchedule(eta=1.0)
        trace = rsmooth_run(spca_problem(small_spca), initial_point(8, 3, rng), schedule,
                            stop=StoppingRule(max_iterations=10))
        np.testing.assert_allclose(trace.column("mu"), 0.5 * np.arange(1, 12) ** (-1.0 / 3.0))

    def test_stop_is_required(self, small_spca, rng):
        with pytest.raises(InvalidArgumentError):
            rsmooth_run(spca_problem(small_spca), initial_point(8, 3, rng), SmoothingSchedule(eta=1.0))

    def test_rejects_nonlinear_mapping(self, ssc_mcp, rng):
        with pytest.raises(UnsupportedProblemError):
            rsmooth_run(ssc_mcp, initial_point(10, 2, rng), SmoothingSchedule(eta=1.0), stop=StoppingRule(max_iterations=1))


@pytest.mark.slow
class TestReferenceSize:
    """(N, p, lam) = (200, 1, 0.1) runs of all three solvers on one instance."""

    @pytest.fixture(scope="class")
    def reference_case(self):
        instance = generate_spca(200, 1, seed=0, lam=0.1)
        U0 = initial_point(200, 1, np.random.default_rng([0, 200, 1]))
        return instance, U0

    @pytest.fixture(scope="class")
    def vsmooth_value(self, reference_case):
        instance, U0 = reference_case
        problem = spca_problem(instance, U0)
        trace = vsmooth_run(problem, cayley_forward(problem.chart, U0), SmoothingSchedule(eta=1.0),
                            stop=StoppingRule(max_iterations=5000))
        return value_at(problem, trace.final_U)

    def test_rsub_value_close_to_vsmooth(self, reference_case, vsmooth_value):
        instance, U0 = reference_case
        problem = spca_problem(instance)
        trace = rsub_run(problem, U0, StoppingRule(max_iterations=5000))
        assert feasibility(trace.final_U) <= 1e-12
        assert value_at(problem, trace.final_U) == pytest.approx(vsmooth_value, rel=0.01)

    def test_rsmooth_sparsity(self, reference_case):
        instance, U0 = reference_case
        problem = spca_problem(instance)
        trace = rsmooth_run(problem, U0, SmoothingSchedule(eta=1.0), stop=StoppingRule(max_iterations=5000))
        assert sparsity(trace.final_U) >= 0.99
        assert feasibility(trace.final_U) <= 1e-12
