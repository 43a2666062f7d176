"""Variable smoothing: gradient descent on f_mu_n o F with mu_n decreasing to 0.

Each iteration n sets the surrogate f_n = h + g^{mu_n} o Smap, finds a
stepsize gamma_n (Armijo backtracking or the Lipschitz-constant step) and
moves y_{n+1} = y_n - gamma_n grad(f_n o F)(y_n).
"""

import math
import time
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from varsmooth.core.config import get_settings
from varsmooth.core.errors import InvalidArgumentError, LineSearchError, NumericalFailureError
from varsmooth.optim.cayley import SkewParam
from varsmooth.optim.composite import (
    CompositeProblem,
    LipschitzModel,
    problem_lipschitz_model,
    surrogate_value,
    surrogate_value_and_grad,
    value_at,
)
from varsmooth.optim.observability import SolverObserver, get_solver_observer
from varsmooth.optim.trace import IterationState, SolverTrace, TerminationReason
from varsmooth.schemas.result_schema import TraceRecord
from varsmooth.schemas.solver_schema import ArmijoConfig, ScheduleKind, SmoothingSchedule, StoppingRule

IterationCallback = Callable[[IterationState], None]

# Relative size of a predicted decrease that floating point can no longer resolve.
RESOLUTION = 1e3 * np.finfo(float).eps


class StepMode(str, Enum):
    """How vsmooth picks gamma_n."""

    BACKTRACKING = "backtracking"
    LIPSCHITZ = "lipschitz"


def mu_at(schedule: SmoothingSchedule, n: int) -> float:
    """Moreau index of iteration n >= 1.

    power: scale * n^(-1/alpha); log: scale / ((n + 1) log(n + 1)).
    """
    if n < 1:
        raise InvalidArgumentError("n", n, "n >= 1")
    if schedule.kind == ScheduleKind.LOG:
        return schedule.leading / ((n + 1) * math.log(n + 1))
    return schedule.leading * n ** (-1.0 / schedule.alpha)


def armijo_search(
    phi: Callable[[float], float],
    value0: float,
    slope_sq: float,
    gamma_initial: float,
    c: float,
    rho: float,
    max_trials: int,
) -> Tuple[float, int, float]:
    """Backtrack gamma = gamma_initial * rho^k until phi(gamma) <= value0 - c gamma slope_sq.

    Args:
        phi: Objective along the search curve, phi(0) = value0
        value0: Objective at the current iterate
        slope_sq: Squared norm of the search direction
        gamma_initial: First trial
        c: Sufficient-decrease constant
        rho: Contraction factor
        max_trials: Trial cap

    Returns:
        Tuple of (gamma, k, phi(gamma)) for the smallest admissible k
    """
    gamma = gamma_initial
    for k in range(max_trials):
        trial = phi(gamma)
        if np.isfinite(trial) and trial <= value0 - c * gamma * slope_sq:
            return gamma, k, float(trial)
        gamma *= rho
    raise LineSearchError(max_trials, gamma / rho)


def initial_gamma(config: ArmijoConfig, grad_norm: float) -> float:
    if config.gamma_initial is not None:
        return config.gamma_initial
    return min(1.0, 1.0 / grad_norm) if grad_norm > 0 else 1.0


def backtrack(
    problem: CompositeProblem,
    V: SkewParam,
    mu: float,
    grad: SkewParam,
    config: ArmijoConfig,
    value: Optional[float] = None,
) -> Tuple[float, int]:
    """Armijo backtracking on the surrogate along -grad.

    Args:
        problem: Composite problem
        V: Current chart point
        mu: Moreau index of the surrogate
        grad: surrogate_grad(problem, V, mu)
        config: Armijo parameters; gamma_initial None means min(1, 1/||grad||)
        value: Surrogate value at V, if already known

    Returns:
        Tuple of (gamma, number of contractions)
    """
    grad_norm = grad.norm()
    if grad_norm == 0:
        raise InvalidArgumentError("grad", 0.0, "a nonzero gradient")
    value0 = surrogate_value(problem, V, mu) if value is None else value
    gamma, k, _ = armijo_search(
        lambda gamma: surrogate_value(problem, V - gamma * grad, mu),
        value0,
        grad_norm**2,
        initial_gamma(config, grad_norm),
        config.c,
        config.rho,
        config.max_trials,
    )
    return gamma, k


def lipschitz_step(model: LipschitzModel, mu: float, c: float) -> float:
    """gamma = 2(1 - c) / (varpi1 + varpi2 / mu)."""
    if not 0 < c < 1:
        raise InvalidArgumentError("c", c, "0 < c < 1")
    return 2.0 * (1.0 - c) / model.lipschitz(mu)


def at_resolution(value: float, gamma: float, grad_norm: float) -> bool:
    """True when the predicted decrease gamma ||grad||^2 is lost in rounding of `value`."""
    return gamma * grad_norm**2 <= RESOLUTION * max(1.0, abs(value))


def stop_reason(
    stop: StoppingRule, n: int, elapsed: float, grad_norm: float
) -> Optional[TerminationReason]:
    """Termination reason at an iteration boundary, or None to continue."""
    if stop.max_iterations is not None and n >= stop.max_iterations:
        return TerminationReason.MAX_ITERATIONS
    if stop.time_budget_seconds is not None and elapsed >= stop.time_budget_seconds:
        return TerminationReason.TIME_BUDGET
    if stop.grad_tolerance is not None and grad_norm <= stop.grad_tolerance:
        return TerminationReason.GRAD_TOLERANCE
    if grad_norm == 0:
        return TerminationReason.STATIONARY
    return None


def _check_finite(n: int, value: float, grad: SkewParam) -> None:
    if not np.isfinite(value):
        raise NumericalFailureError(n, "surrogate value")
    if not grad.is_finite():
        raise NumericalFailureError(n, "surrogate gradient")


def vsmooth_run(
    problem: CompositeProblem,
    V0: SkewParam,
    schedule: SmoothingSchedule,
    config: Optional[ArmijoConfig] = None,
    stop: Optional[StoppingRule] = None,
    step_mode: StepMode = StepMode.BACKTRACKING,
    lipschitz_model: Optional[LipschitzModel] = None,
    callback: Optional[IterationCallback] = None,
    value_every: Optional[int] = None,
    observer: Optional[SolverObserver] = None,
) -> SolverTrace:
    """Run variable smoothing from V0.

    Args:
        problem: Composite problem on a Cayley chart
        V0: Starting chart point
        schedule: Smoothing schedule; mu_1 must not exceed 1/(2 eta_g)
        config: Armijo parameters (defaults when None)
        stop: Stopping rule (required)
        step_mode: backtracking or lipschitz
        lipschitz_model: Model for the lipschitz mode; built from the problem's constants when None
        callback: Called with the iteration state before each step
        value_every: Sampling period of the true objective (settings default)
        observer: Run observer (shared instance by default)

    Returns:
        SolverTrace whose record k is evaluated at y_{k+1} with mu_{k+1}
    """
    if stop is None:
        raise InvalidArgumentError("stop", None, "a StoppingRule")
    config = config or ArmijoConfig()
    observer = observer or get_solver_observer()
    value_every = value_every or get_settings().value_every
    step_mode = StepMode(step_mode)

    eta = problem.g.eta
    mu = mu_at(schedule, 1)
    if eta > 0 and mu > 1.0 / (2.0 * eta) * (1 + 1e-12):
        raise InvalidArgumentError("schedule", f"mu_1 = {mu:.6g}", f"mu_1 <= 1/(2 eta) = {1.0 / (2.0 * eta):.6g}")
    if step_mode == StepMode.LIPSCHITZ and lipschitz_model is None:
        lipschitz_model = problem_lipschitz_model(problem)

    start = time.perf_counter()
    V = V0
    value, grad, U = surrogate_value_and_grad(problem, V, mu)
    _check_finite(0, value, grad)
    grad_norm = grad.norm()
    gamma_initial = initial_gamma(config, grad_norm)

    records = [
        TraceRecord(
            n=0,
            mu=mu,
            gamma=0.0,
            grad_norm=grad_norm,
            surrogate_value=value,
            true_value=value_at(problem, U),
            elapsed_s=time.perf_counter() - start,
            bt_count=0,
        )
    ]

    n = 0
    metadata = {"N": problem.N, "p": problem.p, "step_mode": step_mode.value}
    with observer.trace_run("vsmooth", metadata):
        while True:
            reason = stop_reason(stop, n, time.perf_counter() - start, grad_norm)
            if reason is not None:
                break
            n += 1

            if step_mode == StepMode.BACKTRACKING:
                try:
                    gamma, bt_count, _ = armijo_search(
                        lambda gamma: surrogate_value(problem, V - gamma * grad, mu),
                        value,
                        grad_norm**2,
                        gamma_initial,
                        config.c,
                        config.rho,
                        config.max_trials,
                    )
                except LineSearchError as e:
                    if at_resolution(value, gamma_initial, grad_norm):
                        reason = TerminationReason.STATIONARY
                        break
                    raise LineSearchError(e.details["trials"], e.details["last_gamma"], iteration=n) from e
            else:
                gamma, bt_count = lipschitz_step(lipschitz_model, mu, config.c), 0

            if callback is not None:
                callback(IterationState(n=n, U=U, V=V, direction=grad, mu=mu, gamma=gamma, value=value))

            V = V - gamma * grad
            mu = mu_at(schedule, n + 1)
            value, grad, U = surrogate_value_and_grad(problem, V, mu)
            _check_finite(n, value, grad)
            grad_norm = grad.norm()

            records.append(
                TraceRecord(
                    n=n,
                    mu=mu,
                    gamma=gamma,
                    grad_norm=grad_norm,
                    surrogate_value=value,
                    true_value=value_at(problem, U) if n % value_every == 0 else float("nan"),
                    elapsed_s=time.perf_counter() - start,
                    bt_count=bt_count,
                )
            )
            observer.log_iteration("vsmooth", n, mu, gamma, grad_norm, value, bt_count)

    trace = SolverTrace(algorithm="vsmooth", records=records, final_U=U, final_V=V, reason=reason)
    observer.log_completion("vsmooth", trace.iterations, reason.value, trace.elapsed, value)
    return trace
