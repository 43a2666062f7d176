"""Riemannian baselines on St(p, N): subgradient (RSub) and smoothing gradient (RSmooth).

Both move along tangent directions and map back to the manifold with the
polar retraction R_U(D) = (U + D)(I_p + D^T D)^(-1/2).
"""

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from varsmooth.core.config import get_settings
from varsmooth.core.errors import (
    InvalidArgumentError,
    LineSearchError,
    NumericalFailureError,
    UnsupportedProblemError,
)
from varsmooth.optim.checks import orthonormality_error
from varsmooth.optim.composite import CompositeProblem, ambient_value_and_grad, smoothed_value_at, value_at
from varsmooth.optim.observability import SolverObserver, get_solver_observer
from varsmooth.optim.trace import IterationState, SolverTrace, TerminationReason
from varsmooth.optim.vsmooth import (
    IterationCallback,
    armijo_search,
    at_resolution,
    initial_gamma,
    mu_at,
    stop_reason,
)
from varsmooth.schemas.result_schema import TraceRecord
from varsmooth.schemas.solver_schema import ArmijoConfig, SmoothingSchedule, StoppingRule

RSUB_DECAY = 0.99


def _sym(X: np.ndarray) -> np.ndarray:
    return 0.5 * (X + X.T)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A direction D in the tangent space of St(p, N) at `base`."""

    base: np.ndarray
    direction: np.ndarray

    def __post_init__(self) -> None:
        if self.base.shape != self.direction.shape:
            raise InvalidArgumentError("direction", self.direction.shape, f"shape {self.base.shape}")
        residual = float(np.linalg.norm(self.base.T @ self.direction + self.direction.T @ self.base))
        if residual > 1e-10 * max(1.0, float(np.linalg.norm(self.direction))):
            raise InvalidArgumentError("direction", f"||U^T D + D^T U||_F = {residual:.3e}", "a tangent vector")

    def norm(self) -> float:
        return float(np.linalg.norm(self.direction))

    def scaled(self, t: float) -> "TangentVector":
        return TangentVector(self.base, t * self.direction)


def tangent_project(U: np.ndarray, X: np.ndarray) -> TangentVector:
    """Orthogonal projection X - U sym(U^T X) onto the tangent space at U."""
    U = np.asarray(U, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.shape != U.shape:
        raise InvalidArgumentError("X", X.shape, f"shape {U.shape}")
    error = orthonormality_error(U)
    if error > get_settings().orthonormal_tolerance:
        raise InvalidArgumentError("U", f"||I - U^T U||_F = {error:.3e}", "an orthonormal matrix")
    return TangentVector(U, X - U @ _sym(U.T @ X))


def polar_retract(U: np.ndarray, D: TangentVector) -> np.ndarray:
    """Polar retraction of the tangent step D at U.

    The inverse square root is taken of the p x p Gram matrix of U + D, which
    equals I_p + D^T D for exact tangent vectors.
    """
    U = np.asarray(U, dtype=float)
    if D.base.shape != U.shape:
        raise InvalidArgumentError("D", D.base.shape, f"a tangent vector at a point of shape {U.shape}")
    Y = U + D.direction
    w, Q = scipy.linalg.eigh(Y.T @ Y)
    return Y @ (Q * (1.0 / np.sqrt(w))) @ Q.T


def _require_identity_mapping(problem: CompositeProblem, solver: str) -> None:
    if not problem.S_map.identity_flag:
        raise UnsupportedProblemError(solver, "the regularizer must act on U directly (Smap = Id)")


def _check_finite_direction(n: int, value: float, D: TangentVector) -> None:
    if not np.isfinite(value):
        raise NumericalFailureError(n, "objective value")
    if not np.all(np.isfinite(D.direction)):
        raise NumericalFailureError(n, "search direction")


def rsub_run(
    problem: CompositeProblem,
    U0: np.ndarray,
    stop: StoppingRule,
    decay: float = RSUB_DECAY,
    callback: Optional[IterationCallback] = None,
    observer: Optional[SolverObserver] = None,
) -> SolverTrace:
    """Riemannian subgradient method with stepsizes gamma_n = decay^n.

    The search direction is -P_T(grad h(U) + G) with G the minimum-norm
    subgradient of g at U (0 on zero entries).
    """
    _require_identity_mapping(problem, "rsub")
    if not 0 < decay < 1:
        raise InvalidArgumentError("decay", decay, "0 < decay < 1")
    observer = observer or get_solver_observer()

    def direction_at(U: np.ndarray) -> TangentVector:
        return tangent_project(U, -(problem.h.gradient(U) + problem.g.subgradient(U)))

    start = time.perf_counter()
    U = np.asarray(U0, dtype=float)
    value = value_at(problem, U)
    D = direction_at(U)
    _check_finite_direction(0, value, D)
    nan = float("nan")
    records = [TraceRecord(n=0, mu=nan, gamma=0.0, grad_norm=D.norm(), surrogate_value=value,
                           true_value=value, elapsed_s=time.perf_counter() - start, bt_count=0)]

    n = 0
    with observer.trace_run("rsub", {"N": problem.N, "p": problem.p}):
        while True:
            reason = stop_reason(stop, n, time.perf_counter() - start, D.norm())
            if reason is not None:
                break
            n += 1
            gamma = decay**n
            if callback is not None:
                callback(IterationState(n=n, U=U, V=None, direction=D.direction, mu=nan, gamma=gamma, value=value))

            U = polar_retract(U, D.scaled(gamma))
            value = value_at(problem, U)
            D = direction_at(U)
            _check_finite_direction(n, value, D)
            records.append(TraceRecord(n=n, mu=nan, gamma=gamma, grad_norm=D.norm(), surrogate_value=value,
                                       true_value=value, elapsed_s=time.perf_counter() - start, bt_count=0))
            observer.log_iteration("rsub", n, nan, gamma, D.norm(), value)

    trace = SolverTrace(algorithm="rsub", records=records, final_U=U, final_V=None, reason=reason)
    observer.log_completion("rsub", trace.iterations, reason.value, trace.elapsed, value)
    return trace


def rsmooth_run(
    problem: CompositeProblem,
    U0: np.ndarray,
    schedule: SmoothingSchedule,
    config: Optional[ArmijoConfig] = None,
    stop: Optional[StoppingRule] = None,
    callback: Optional[IterationCallback] = None,
    value_every: Optional[int] = None,
    observer: Optional[SolverObserver] = None,
) -> SolverTrace:
    """Riemannian smoothing gradient method.

    Iteration n takes D = -P_T(grad(h + g^{mu_n})(U)) and accepts the first
    gamma = gamma_initial rho^k with
    (h + g^{mu_n})(R_U(gamma D)) <= (h + g^{mu_n})(U) - c gamma ||D||^2.
    """
    _require_identity_mapping(problem, "rsmooth")
    if stop is None:
        raise InvalidArgumentError("stop", None, "a StoppingRule")
    config = config or ArmijoConfig()
    observer = observer or get_solver_observer()
    value_every = value_every or get_settings().value_every

    def state_at(U: np.ndarray, mu: float):
        value, grad = ambient_value_and_grad(problem, U, mu)
        return value, tangent_project(U, -grad)

    start = time.perf_counter()
    U = np.asarray(U0, dtype=float)
    mu = mu_at(schedule, 1)
    value, D = state_at(U, mu)
    _check_finite_direction(0, value, D)
    gamma_initial = initial_gamma(config, D.norm())
    records = [TraceRecord(n=0, mu=mu, gamma=0.0, grad_norm=D.norm(), surrogate_value=value,
                           true_value=value_at(problem, U), elapsed_s=time.perf_counter() - start, bt_count=0)]

    n = 0
    with observer.trace_run("rsmooth", {"N": problem.N, "p": problem.p}):
        while True:
            reason = stop_reason(stop, n, time.perf_counter() - start, D.norm())
            if reason is not None:
                break
            n += 1
            try:
                gamma, bt_count, _ = armijo_search(
                    lambda gamma: smoothed_value_at(problem, polar_retract(U, D.scaled(gamma)), mu),
                    value,
                    D.norm() ** 2,
                    gamma_initial,
                    config.c,
                    config.rho,
                    config.max_trials,
                )
            except LineSearchError as e:
                if at_resolution(value, gamma_initial, D.norm()):
                    reason = TerminationReason.STATIONARY
                    break
                raise LineSearchError(e.details["trials"], e.details["last_gamma"], iteration=n) from e

            if callback is not None:
                callback(IterationState(n=n, U=U, V=None, direction=D.direction, mu=mu, gamma=gamma, value=value))

            U = polar_retract(U, D.scaled(gamma))
            mu = mu_at(schedule, n + 1)
            value, D = state_at(U, mu)
            _check_finite_direction(n, value, D)
            records.append(
                TraceRecord(
                    n=n,
                    mu=mu,
                    gamma=gamma,
                    grad_norm=D.norm(),
                    surrogate_value=value,
                    true_value=value_at(problem, U) if n % value_every == 0 else float("nan"),
                    elapsed_s=time.perf_counter() - start,
                    bt_count=bt_count,
                )
            )
            observer.log_iteration("rsmooth", n, mu, gamma, D.norm(), value, bt_count)

    trace = SolverTrace(algorithm="rsmooth", records=records, final_U=U, final_V=None, reason=reason)
    observer.log_completion("rsmooth", trace.iterations, reason.value, trace.elapsed, value)
    return trace
