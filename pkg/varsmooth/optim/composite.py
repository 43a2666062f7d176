"""Composite objective f = h + g o Smap over a Cayley chart, and its smoothed surrogates.

For a Moreau index mu the surrogate is f_mu o F with
f_mu = h + g^mu o Smap and F = Phi_S^{-1}; its gradient on Q_{N,p} is

    (DF(V))^* [ grad h(U) + (DSmap(U))^* [ grad g^mu(Smap(U)) ] ],  U = F(V).
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from varsmooth.core.errors import InvalidArgumentError
from varsmooth.optim.cayley import (
    CayleyChart,
    SkewParam,
    cayley_adjoint_differential,
    cayley_inverse,
)
from varsmooth.optim.prox import WeaklyConvexFunction, moreau_value_and_grad

# Bounds of the Cayley chart: ||DF(V)||_op <= 2 and DF is 4-Lipschitz.
CHART_DIFF_BOUND = 2.0
CHART_DIFF_LIPSCHITZ = 4.0


@dataclass(frozen=True)
class SmoothFunction:
    """Smooth part h with its gradient.

    Attributes:
        value: U -> h(U)
        gradient: U -> grad h(U)
        grad_lipschitz: Lipschitz constant of grad h, when known
        value_bound: Bound on ||grad h|| over the Stiefel manifold, when known
    """

    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    grad_lipschitz: Optional[float] = None
    value_bound: Optional[float] = None


@dataclass(frozen=True)
class SmoothMapping:
    """Smooth inner mapping Smap with its differential and adjoint differential.

    Attributes:
        value: U -> Smap(U)
        adjoint_differential: (U, M) -> (DSmap(U))^*[M]
        differential: (U, D) -> DSmap(U)[D]
        identity_flag: True when Smap is the identity
        diff_bound: Bound on ||DSmap(U)||_op over the Stiefel manifold
        diff_lipschitz: Lipschitz constant of DSmap on the Stiefel manifold
    """

    value: Callable[[np.ndarray], np.ndarray]
    adjoint_differential: Callable[[np.ndarray, np.ndarray], np.ndarray]
    differential: Callable[[np.ndarray, np.ndarray], np.ndarray]
    identity_flag: bool = False
    diff_bound: float = 1.0
    diff_lipschitz: float = 0.0


def identity_mapping() -> SmoothMapping:
    """Smap = Id."""
    return SmoothMapping(
        value=lambda U: U,
        adjoint_differential=lambda U, M: M,
        differential=lambda U, D: D,
        identity_flag=True,
        diff_bound=1.0,
        diff_lipschitz=0.0,
    )


def gram_mapping() -> SmoothMapping:
    """Smap(U) = U U^T with adjoint differential (M + M^T) U.

    On the Stiefel manifold ||DSmap(U)||_op <= 2 and DSmap is 2-Lipschitz.
    """
    return SmoothMapping(
        value=lambda U: U @ U.T,
        adjoint_differential=lambda U, M: (M + M.T) @ U,
        differential=lambda U, D: D @ U.T + U @ D.T,
        identity_flag=False,
        diff_bound=2.0,
        diff_lipschitz=2.0,
    )


@dataclass(frozen=True, eq=False)
class CompositeProblem:
    """Bundle (h, Smap, g, chart) defining f o F."""

    h: SmoothFunction
    S_map: SmoothMapping
    g: WeaklyConvexFunction
    chart: CayleyChart

    @property
    def N(self) -> int:
        return self.chart.N

    @property
    def p(self) -> int:
        return self.chart.p

    def point(self, V: SkewParam) -> np.ndarray:
        """Stiefel image F(V)."""
        return cayley_inverse(self.chart, V)

    def mapped_entries(self) -> int:
        """Number of entries of Smap(U), the dimension g acts on."""
        return self.N * self.N if not self.S_map.identity_flag else self.N * self.p

    def g_lipschitz(self) -> float:
        """Frobenius-norm Lipschitz constant of g over Smap's image space."""
        return self.g.lipschitz(self.mapped_entries())


def _check_ambient(problem: CompositeProblem, U: np.ndarray) -> np.ndarray:
    U = np.asarray(U, dtype=float)
    if U.shape != (problem.N, problem.p):
        raise InvalidArgumentError("U", U.shape, f"shape ({problem.N}, {problem.p})")
    return U


def value_at(problem: CompositeProblem, U: np.ndarray) -> float:
    """f(U) = h(U) + g(Smap(U))."""
    U = _check_ambient(problem, U)
    return float(problem.h.value(U)) + problem.g.value(problem.S_map.value(U))


def ambient_value_and_grad(
    problem: CompositeProblem, U: np.ndarray, mu: float
) -> Tuple[float, np.ndarray]:
    """Value and ambient gradient of h + g^mu o Smap at U, sharing one prox."""
    U = _check_ambient(problem, U)
    env, env_grad = moreau_value_and_grad(problem.g, problem.S_map.value(U), mu)
    value = float(problem.h.value(U)) + env
    grad = problem.h.gradient(U) + problem.S_map.adjoint_differential(U, env_grad)
    return value, grad


def smoothed_value_at(problem: CompositeProblem, U: np.ndarray, mu: float) -> float:
    """(h + g^mu o Smap)(U)."""
    return ambient_value_and_grad(problem, U, mu)[0]


def ambient_smoothed_grad(problem: CompositeProblem, U: np.ndarray, mu: float) -> np.ndarray:
    """grad h(U) + (DSmap(U))^*[grad g^mu(Smap(U))]."""
    return ambient_value_and_grad(problem, U, mu)[1]


def surrogate_value_and_grad(
    problem: CompositeProblem, V: SkewParam, mu: float
) -> Tuple[float, SkewParam, np.ndarray]:
    """Surrogate value and gradient at V.

    Returns:
        Tuple of (f_mu(F(V)), gradient on Q_{N,p}, U = F(V))
    """
    U = problem.point(V)
    value, grad = ambient_value_and_grad(problem, U, mu)
    return value, cayley_adjoint_differential(problem.chart, V, grad), U


def surrogate_value(problem: CompositeProblem, V: SkewParam, mu: float) -> float:
    """f_mu o F at V."""
    return smoothed_value_at(problem, problem.point(V), mu)


def surrogate_grad(problem: CompositeProblem, V: SkewParam, mu: float) -> SkewParam:
    """Gradient of f_mu o F at V."""
    return surrogate_value_and_grad(problem, V, mu)[1]


def true_value(problem: CompositeProblem, V: SkewParam) -> float:
    """Unsmoothed objective f o F at V."""
    return value_at(problem, problem.point(V))


@dataclass(frozen=True)
class LipschitzModel:
    """L(mu) = varpi1 + varpi2 / mu, a Lipschitz constant of grad(f_mu o F)."""

    varpi1: float
    varpi2: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.varpi1) and self.varpi1 >= 0):
            raise InvalidArgumentError("varpi1", self.varpi1, "a finite value >= 0")
        if not (np.isfinite(self.varpi2) and self.varpi2 > 0):
            raise InvalidArgumentError("varpi2", self.varpi2, "a finite value > 0")

    def lipschitz(self, mu: float) -> float:
        if not mu > 0:
            raise InvalidArgumentError("mu", mu, "mu > 0")
        return self.varpi1 + self.varpi2 / mu


def lipschitz_model_from_constants(
    grad_h_lipschitz: float,
    grad_h_bound: float,
    mapping_bound: float,
    mapping_diff_lipschitz: float,
    g_lipschitz: float,
    chart_bound: float = CHART_DIFF_BOUND,
    chart_diff_lipschitz: float = CHART_DIFF_LIPSCHITZ,
) -> LipschitzModel:
    """Assemble (varpi1, varpi2) from the problem's smoothness constants.

    varpi1 = kF^2 (L_gradh + L_g L_DS) + L_DF (kh + kS L_g) and
    varpi2 = kF^2 kS^2.

    Args:
        grad_h_lipschitz: Lipschitz constant of grad h
        grad_h_bound: Bound on ||grad h|| over the manifold
        mapping_bound: Bound kS on ||DSmap||_op
        mapping_diff_lipschitz: Lipschitz constant of DSmap
        g_lipschitz: Lipschitz constant of g
        chart_bound: Bound kF on ||DF||_op
        chart_diff_lipschitz: Lipschitz constant of DF

    Returns:
        LipschitzModel
    """
    kF2 = chart_bound**2
    varpi1 = kF2 * (grad_h_lipschitz + g_lipschitz * mapping_diff_lipschitz) + chart_diff_lipschitz * (
        grad_h_bound + mapping_bound * g_lipschitz
    )
    return LipschitzModel(varpi1=varpi1, varpi2=kF2 * mapping_bound**2)


def problem_lipschitz_model(problem: CompositeProblem) -> LipschitzModel:
    """LipschitzModel from the constants carried by the problem's components."""
    if problem.h.grad_lipschitz is None or problem.h.value_bound is None:
        raise InvalidArgumentError("h", "missing constants", "grad_lipschitz and value_bound set")
    return lipschitz_model_from_constants(
        grad_h_lipschitz=problem.h.grad_lipschitz,
        grad_h_bound=problem.h.value_bound,
        mapping_bound=problem.S_map.diff_bound,
        mapping_diff_lipschitz=problem.S_map.diff_lipschitz,
        g_lipschitz=problem.g_lipschitz(),
    )
