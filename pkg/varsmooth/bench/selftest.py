"""Property suites run by `varsmooth selftest`.

Each suite draws its own seeded samples, raises SelfTestFailure on the first
violated property and returns the number of checks performed.
"""

import time
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from varsmooth.bench.spca import generate_spca, initial_point, spca_problem
from varsmooth.bench.ssc import Dataset, knn_affinity, ssc_problem
from varsmooth.core.errors import SelfTestFailure
from varsmooth.core.logger import get_logger
from varsmooth.optim import prox as prox_module
from varsmooth.optim.cayley import (
    CayleyChart,
    SkewParam,
    cayley_adjoint_differential,
    cayley_differential,
    cayley_forward,
    cayley_inverse,
    chart_from_anchor,
)
from varsmooth.optim.checks import central_difference, grid_minimize, orthonormality_error, relative_error
from varsmooth.optim.composite import CompositeProblem, surrogate_grad, surrogate_value
from varsmooth.optim.prox import RegularizerKind, WeaklyConvexFunction
from varsmooth.optim.trace import IterationState
from varsmooth.optim.vsmooth import vsmooth_run
from varsmooth.schemas.result_schema import SelfTestReport, SuiteResult
from varsmooth.schemas.solver_schema import ArmijoConfig, SmoothingSchedule, StoppingRule

logger = get_logger(__name__)

MU_GRID = [1e-3, 1e-2, 1e-1]
PROX_SAMPLES = 1000
CAYLEY_SAMPLES = 200
GRADIENT_SAMPLES = 50


def _require(check: str, observed: float, bound: float) -> None:
    if not observed <= bound:
        raise SelfTestFailure(check, float(observed), float(bound))


def _regularizer_cells() -> List[WeaklyConvexFunction]:
    return [
        WeaklyConvexFunction.l1(1.0),
        WeaklyConvexFunction.l1(0.1),
        WeaklyConvexFunction.mcp(1.0, 2.0),
        WeaklyConvexFunction.mcp(0.5, 0.5),
    ]


def _psi(g: WeaklyConvexFunction, x: np.ndarray) -> np.ndarray:
    """Entrywise lam * psi(x), vectorized."""
    magnitude = np.abs(x)
    if g.kind == RegularizerKind.L1:
        return g.lam * magnitude
    return g.lam * np.where(magnitude <= g.theta, magnitude - x * x / (2.0 * g.theta), g.theta / 2.0)


def _prox_entry(g: WeaklyConvexFunction, z: np.ndarray, mu: float) -> np.ndarray:
    # Module attribute lookup so a patched prox formula is what gets checked.
    if g.kind == RegularizerKind.L1:
        return prox_module.prox_l1(z, mu, g.lam)
    return prox_module.prox_mcp(z, mu, g.lam, g.theta)


def _valid_mus(g: WeaklyConvexFunction) -> List[float]:
    return [mu for mu in MU_GRID if g.eta == 0 or mu * g.eta < 1.0]


def suite_prox_oracle(rng: np.random.Generator) -> int:
    """Prox against grid minimization; envelope sandwich, monotonicity and gradient bound."""
    checks = 0
    for g in _regularizer_cells():
        mus = _valid_mus(g)
        for mu in mus:
            z = 2.0 * rng.standard_normal(PROX_SAMPLES)
            oracle = grid_minimize(lambda x, zc: mu * _psi(g, x) + 0.5 * (x - zc) ** 2, z)
            error = float(np.max(np.abs(_prox_entry(g, z, mu) - oracle)))
            _require(f"prox[{g.kind.value}, lam={g.lam}, mu={mu}]", error, 1e-5)

            L = g.lam
            for zi in z[:100]:
                env = prox_module.moreau_value(g, np.array([zi]), mu)
                gz = g.value(np.array([zi]))
                _require("sandwich lower", env - gz, 1e-10)
                _require("sandwich upper", gz - env - mu * L**2 / 2.0, 1e-10)
                grad = prox_module.moreau_grad(g, np.array([zi]), mu)
                _require("gradient bound", float(np.abs(grad[0])) - L, 1e-10)
            checks += 1

        for mu1, mu2 in zip(mus, mus[1:]):
            hi, lo = max(mu1, mu2), min(mu1, mu2)
            for zi in 2.0 * rng.standard_normal(100):
                e_hi = prox_module.moreau_value(g, np.array([zi]), hi)
                e_lo = prox_module.moreau_value(g, np.array([zi]), lo)
                _require("index monotonicity", e_hi - e_lo, 1e-10)
                _require("index bound", e_lo - e_hi - (hi - lo) / lo * hi * g.lam**2 / 2.0, 1e-10)
            checks += 1
    return checks


def _kinks(g: WeaklyConvexFunction, mu: float) -> List[float]:
    points = [mu * g.lam]
    if g.kind == RegularizerKind.MCP:
        points.append(g.theta)
    return points


def suite_moreau_envelope(rng: np.random.Generator) -> int:
    """moreau_grad against central differences of moreau_value away from kinks."""
    checks = 0
    for g in _regularizer_cells():
        for mu in _valid_mus(g):
            for zi in 2.0 * rng.standard_normal(50):
                if any(abs(abs(zi) - k) < 1e-4 for k in _kinks(g, mu)):
                    continue
                fd = central_difference(lambda t: prox_module.moreau_value(g, np.array([zi + t]), mu))
                grad = float(prox_module.moreau_grad(g, np.array([zi]), mu)[0])
                _require("envelope gradient", relative_error(grad, fd), 1e-6)
                checks += 1
    return checks


def _unit(D: SkewParam) -> SkewParam:
    return D * (1.0 / D.norm())


def suite_cayley(rng: np.random.Generator) -> int:
    """Round trips, differential, operator-norm and Lipschitz bounds, adjoint identity."""
    checks = 0
    for N, p in [(6, 2), (20, 5)]:
        U0 = initial_point(N, p, rng)
        chart, V0 = chart_from_anchor(U0)
        _require("anchor round trip", float(np.linalg.norm(cayley_inverse(chart, V0) - U0)), 1e-10)
        for _ in range(CAYLEY_SAMPLES):
            V = SkewParam.random(N, p, rng, scale=0.5)
            U = cayley_inverse(chart, V)
            _require("orthonormal image", orthonormality_error(U), 1e-12)
            back = cayley_forward(chart, U)
            _require("round trip V", (back - V).norm() / max(1.0, V.norm()), 1e-10)
            _require("round trip U", float(np.linalg.norm(cayley_inverse(chart, back) - U)), 1e-10)

            D = _unit(SkewParam.random(N, p, rng))
            dU = cayley_differential(chart, V, D)
            h = 1e-6
            fd = (cayley_inverse(chart, V + h * D) - cayley_inverse(chart, V - h * D)) / (2 * h)
            _require("differential", float(np.linalg.norm(dU - fd)), 1e-6)
            _require("differential bound", float(np.linalg.norm(dU)), 2.0 + 1e-8)

            V2 = SkewParam.random(N, p, rng, scale=0.5)
            gap = float(np.linalg.norm(dU - cayley_differential(chart, V2, D)))
            _require("differential lipschitz", gap - 4.0 * (V - V2).norm(), 1e-8)

            M = rng.standard_normal((N, p))
            lhs = float(np.sum(dU * M))
            rhs = D.inner(cayley_adjoint_differential(chart, V, M))
            _require("adjoint identity", abs(lhs - rhs), 1e-10)
            checks += 1
    return checks


def _small_ssc(rng: np.random.Generator, N: int = 10, K: int = 2) -> CompositeProblem:
    centers = np.repeat(np.array([[0.0, 0.0], [5.0, 0.0]]), N // 2, axis=0)
    dataset = Dataset(centers + rng.standard_normal((N, 2)), None, K)
    graph = knn_affinity(dataset, k=3)
    return ssc_problem(graph, K, WeaklyConvexFunction.mcp(0.1, 1.0))


def _gradient_problems(rng: np.random.Generator) -> List[Tuple[str, CompositeProblem, float]]:
    instance = generate_spca(8, 3, num_samples=200, seed=int(rng.integers(1 << 31)), lam=0.1)
    spca = spca_problem(instance, initial_point(8, 3, rng))
    return [("spca", spca, 0.5), ("ssc", _small_ssc(rng), 0.5)]


def suite_gradient_consistency(rng: np.random.Generator) -> int:
    """surrogate_grad against central differences along random directions."""
    checks = 0
    for name, problem, mu in _gradient_problems(rng):
        N, p = problem.N, problem.p
        for _ in range(GRADIENT_SAMPLES):
            V = SkewParam.random(N, p, rng, scale=0.3)
            D = _unit(SkewParam.random(N, p, rng))
            fd = central_difference(lambda t: surrogate_value(problem, V + t * D, mu))
            analytic = D.inner(surrogate_grad(problem, V, mu))
            _require(f"{name} surrogate gradient", relative_error(analytic, fd), 1e-5)
            checks += 1
    return checks


def suite_descent(rng: np.random.Generator, iterations: int = 2000) -> int:
    """Armijo re-verification, perturbed descent and feasibility along a vsmooth run on SPCA (50, 3), lam = 0.1."""
    instance = generate_spca(50, 3, seed=int(rng.integers(1 << 31)), lam=0.1)
    U0 = initial_point(50, 3, rng)
    chart, V0 = chart_from_anchor(U0)
    problem = spca_problem(instance, chart=chart)
    schedule = SmoothingSchedule(eta=problem.g.schedule_eta())
    config = ArmijoConfig()
    violations: List[str] = []

    def audit(state: IterationState) -> None:
        trial = surrogate_value(problem, state.V - state.gamma * state.direction, state.mu)
        if trial > state.value - config.c * state.gamma * state.direction.norm() ** 2 + 1e-12:
            violations.append(f"armijo at {state.n}")
        if orthonormality_error(state.U) > 1e-12:
            violations.append(f"feasibility at {state.n}")

    trace = vsmooth_run(problem, V0, schedule, config, StoppingRule(max_iterations=iterations), callback=audit)
    if violations:
        raise SelfTestFailure(violations[0], float(len(violations)), 0.0)

    L_g = problem.g_lipschitz()
    surrogate = trace.column("surrogate_value")
    mu = trace.column("mu")
    slack = surrogate[1:] - surrogate[:-1] - 0.5 * schedule.ratio_bound * (mu[:-1] - mu[1:]) * L_g**2
    _require("perturbed descent", float(np.max(slack)), 1e-9)
    return trace.iterations


SUITES: Dict[str, Callable[[np.random.Generator], int]] = {
    "prox_oracle": suite_prox_oracle,
    "moreau_envelope": suite_moreau_envelope,
    "cayley": suite_cayley,
    "gradient_consistency": suite_gradient_consistency,
    "descent": suite_descent,
}


def run_selftest(suites: Optional[List[str]] = None, seed: int = 0) -> SelfTestReport:
    """Run the property suites and collect per-suite status and timings.

    Args:
        suites: Subset of suite names (all when None)
        seed: Master seed; each suite gets its own child stream

    Returns:
        SelfTestReport
    """
    names = suites or list(SUITES)
    children = np.random.SeedSequence(seed).spawn(len(SUITES))
    streams = dict(zip(SUITES, children))
    results: List[SuiteResult] = []

    for name in names:
        if name not in SUITES:
            raise KeyError(f"Unknown suite '{name}'; available: {', '.join(SUITES)}")
        start = time.perf_counter()
        try:
            checks = SUITES[name](np.random.default_rng(streams[name]))
            results.append(SuiteResult(name=name, passed=True, checks=checks, seconds=time.perf_counter() - start))
        except SelfTestFailure as e:
            results.append(
                SuiteResult(name=name, passed=False, seconds=time.perf_counter() - start, error=e.message, details=e.details)
            )
        except Exception as e:
            results.append(
                SuiteResult(name=name, passed=False, seconds=time.perf_counter() - start, error=f"{type(e).__name__}: {e}")
            )
        status = "passed" if results[-1].passed else "failed"
        logger.info("Self-test suite finished", suite=name, status=status, seconds=round(results[-1].seconds, 3))

    return SelfTestReport(suites=results)
