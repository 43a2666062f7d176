"""Generalized inverse Cayley transform as a chart of the Stiefel manifold St(p, N).

A point V of Q_{N,p} is the skew matrix [[A, -B^T], [B, 0]] and is stored by
its blocks. The chart is Phi_S^{-1}(V) = S (I - V)(I + V)^{-1} I_{N x p}.
Every solve with I + V or I - V is reduced to a p x p system through the
block structure, so a chart evaluation costs O(N p^2) plus the products with S.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from varsmooth.core.config import get_settings
from varsmooth.core.errors import (
    ChartConstructionError,
    InvalidArgumentError,
    SingularPointError,
)
from varsmooth.core.logger import get_logger

logger = get_logger(__name__)


def _skew(X: np.ndarray) -> np.ndarray:
    return 0.5 * (X - X.T)


@dataclass(frozen=True, eq=False)
class SkewParam:
    """A point of Q_{N,p} stored as blocks A (p x p, skew) and B ((N-p) x p).

    Inner products and norms are those of the full N x N matrix, so
    <V1, V2> = <A1, A2> + 2 <B1, B2>.
    """

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self) -> None:
        A = np.asarray(self.A, dtype=float)
        B = np.asarray(self.B, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidArgumentError("A", A.shape, "a square p x p block")
        if B.ndim != 2 or B.shape[1] != A.shape[0]:
            raise InvalidArgumentError("B", B.shape, f"an (N-p) x {A.shape[0]} block")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def p(self) -> int:
        return self.A.shape[0]

    @property
    def N(self) -> int:
        return self.A.shape[0] + self.B.shape[0]

    @classmethod
    def zeros(cls, N: int, p: int) -> "SkewParam":
        return cls(np.zeros((p, p)), np.zeros((N - p, p)))

    @classmethod
    def random(cls, N: int, p: int, rng: np.random.Generator, scale: float = 1.0) -> "SkewParam":
        """Random point with Gaussian entries (A projected to skew)."""
        A = _skew(rng.standard_normal((p, p)))
        B = rng.standard_normal((N - p, p))
        return cls(scale * A, scale * B)

    @classmethod
    def from_full(cls, V: np.ndarray, p: int) -> "SkewParam":
        """Orthogonal projection of an N x N matrix onto Q_{N,p}."""
        Vs = _skew(np.asarray(V, dtype=float))
        return cls(Vs[:p, :p], Vs[p:, :p])

    def full(self) -> np.ndarray:
        p, N = self.p, self.N
        V = np.zeros((N, N))
        V[:p, :p] = self.A
        V[p:, :p] = self.B
        V[:p, p:] = -self.B.T
        return V

    def inner(self, other: "SkewParam") -> float:
        return float(np.sum(self.A * other.A) + 2.0 * np.sum(self.B * other.B))

    def norm(self) -> float:
        return float(np.sqrt(self.inner(self)))

    def skew_residual(self) -> float:
        return float(np.linalg.norm(self.A + self.A.T))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.B)))

    def __add__(self, other: "SkewParam") -> "SkewParam":
        return SkewParam(self.A + other.A, self.B + other.B)

    def __sub__(self, other: "SkewParam") -> "SkewParam":
        return SkewParam(self.A - other.A, self.B - other.B)

    def __mul__(self, scalar: float) -> "SkewParam":
        return SkewParam(scalar * self.A, scalar * self.B)

    __rmul__ = __mul__

    def __neg__(self) -> "SkewParam":
        return SkewParam(-self.A, -self.B)


@dataclass(frozen=True, eq=False)
class CayleyChart:
    """Orthogonal anchor S defining Phi_S^{-1} : Q_{N,p} -> St(p, N)."""

    S: np.ndarray
    p: int

    def __post_init__(self) -> None:
        S = np.asarray(self.S, dtype=float)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise InvalidArgumentError("S", S.shape, "a square N x N matrix")
        if not 1 <= self.p <= S.shape[0]:
            raise InvalidArgumentError("p", self.p, f"1 <= p <= {S.shape[0]}")
        residual = float(np.linalg.norm(S.T @ S - np.eye(S.shape[0])))
        if residual > 1e-10:
            raise InvalidArgumentError("S", f"||S^T S - I||_F = {residual:.3e}", "an orthogonal matrix")
        object.__setattr__(self, "S", S)

    @property
    def N(self) -> int:
        return self.S.shape[0]

    @classmethod
    def identity(cls, N: int, p: int) -> "CayleyChart":
        return cls(np.eye(N), p)


def _check_param(chart: CayleyChart, V: SkewParam) -> None:
    if V.N != chart.N or V.p != chart.p:
        raise InvalidArgumentError(
            "V", (V.N, V.p), f"a point of Q_{{{chart.N},{chart.p}}}"
        )


def _check_point(chart: CayleyChart, U: np.ndarray, name: str = "U") -> np.ndarray:
    U = np.asarray(U, dtype=float)
    if U.shape != (chart.N, chart.p):
        raise InvalidArgumentError(name, U.shape, f"shape ({chart.N}, {chart.p})")
    return U


def _solve_plus(V: SkewParam, X_up: np.ndarray, X_lo: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Solve (I + V) Y = X through the p x p system (I + A + B^T B) Y_up = X_up + B^T X_lo."""
    K = np.eye(V.p) + V.A + V.B.T @ V.B
    Y_up = scipy.linalg.solve(K, X_up + V.B.T @ X_lo)
    return Y_up, X_lo - V.B @ Y_up


def _solve_minus(V: SkewParam, X_up: np.ndarray, X_lo: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Solve (I - V) Z = X, the same reduction with (A, B) -> (-A, -B)."""
    K = np.eye(V.p) - V.A + V.B.T @ V.B
    Z_up = scipy.linalg.solve(K, X_up - V.B.T @ X_lo)
    return Z_up, X_lo + V.B @ Z_up


def _anchor_columns(V: SkewParam) -> Tuple[np.ndarray, np.ndarray]:
    """W = (I + V)^{-1} I_{N x p} split into blocks."""
    return _solve_plus(V, np.eye(V.p), np.zeros((V.N - V.p, V.p)))


def cayley_inverse(chart: CayleyChart, V: SkewParam) -> np.ndarray:
    """Map V in Q_{N,p} to the Stiefel point S (I - V)(I + V)^{-1} I_{N x p}.

    Uses (I - V)(I + V)^{-1} = 2 (I + V)^{-1} - I.
    """
    _check_param(chart, V)
    W_up, W_lo = _anchor_columns(V)
    return chart.S @ np.vstack([2.0 * W_up - np.eye(V.p), 2.0 * W_lo])


def singularity_margin(chart: CayleyChart, U: np.ndarray) -> float:
    """Smallest singular value of I_p + I_{N x p}^T S^T U."""
    U = _check_point(chart, U)
    M_up = chart.S[:, : chart.p].T @ U
    return float(np.linalg.svd(np.eye(chart.p) + M_up, compute_uv=False)[-1])


def cayley_forward(chart: CayleyChart, U: np.ndarray, tolerance: Optional[float] = None) -> SkewParam:
    """Generalized Cayley transform Phi_S(U), the inverse of `cayley_inverse`.

    With M = S^T U and W = (M + I_{N x p}) / 2, the relations (I + V) W = I_{N x p}
    and (I - V) W = M give B = -M_lo (I + M_up)^{-1} and
    A = ((I - M_up) + B^T M_lo)(I + M_up)^{-1}.
    """
    U = _check_point(chart, U)
    tol = get_settings().singular_tolerance if tolerance is None else tolerance
    p = chart.p

    margin = singularity_margin(chart, U)
    M = chart.S.T @ U
    M_up, M_lo = M[:p], M[p:]
    K = np.eye(p) + M_up
    if margin <= tol:
        raise SingularPointError(abs(float(np.linalg.det(K))), margin, tol)

    # X K = Y  <=>  K^T X^T = Y^T
    B = scipy.linalg.solve(K.T, -M_lo.T).T
    A = scipy.linalg.solve(K.T, ((np.eye(p) - M_up) + B.T @ M_lo).T).T
    return SkewParam(_skew(A), B)


def cayley_differential(chart: CayleyChart, V: SkewParam, D: SkewParam) -> np.ndarray:
    """Directional derivative -2 S (I + V)^{-1} D (I + V)^{-1} I_{N x p}."""
    _check_param(chart, V)
    _check_param(chart, D)
    W_up, W_lo = _anchor_columns(V)
    X_up = D.A @ W_up - D.B.T @ W_lo
    X_lo = D.B @ W_up
    Y_up, Y_lo = _solve_plus(V, X_up, X_lo)
    return -2.0 * (chart.S @ np.vstack([Y_up, Y_lo]))


def cayley_adjoint_differential(chart: CayleyChart, V: SkewParam, M: np.ndarray) -> SkewParam:
    """Adjoint of `cayley_differential` with respect to the Frobenius inner products.

    Returns P_Q(-2 (I - V)^{-1} S^T M I_{N x p}^T (I - V)^{-1}); since
    I_{N x p}^T (I - V)^{-1} = W^T with W = (I + V)^{-1} I_{N x p}, the N x N
    matrix is the rank-p product -2 Z W^T and only its blocks are formed.
    """
    _check_param(chart, V)
    M = _check_point(chart, M, "M")
    p = chart.p
    W_up, W_lo = _anchor_columns(V)
    Y = chart.S.T @ M
    Z_up, Z_lo = _solve_minus(V, Y[:p], Y[p:])
    A = -(Z_up @ W_up.T - W_up @ Z_up.T)
    B = -(Z_lo @ W_up.T - W_lo @ Z_up.T)
    return SkewParam(A, B)


def chart_from_anchor(U0: np.ndarray, tolerance: float = 1e-10) -> Tuple[CayleyChart, SkewParam]:
    """Anchor a chart at U0 so that Phi_S^{-1}(V0) = U0.

    S = diag(Q1 Q2^T, I_{N-p}) from the SVD U0_up = Q1 Sigma Q2^T of the upper
    p x p block; then (S^T U0)_up = Q2 Sigma Q2^T is positive semidefinite and
    U0 stays away from the singular-point set (margin >= 1).

    Args:
        U0: Orthonormal N x p matrix
        tolerance: Admissible round-trip residual

    Returns:
        Tuple of (chart, V0)
    """
    U0 = np.asarray(U0, dtype=float)
    if U0.ndim != 2 or U0.shape[0] < U0.shape[1]:
        raise InvalidArgumentError("U0", U0.shape, "an N x p matrix with N >= p")
    N, p = U0.shape

    try:
        Q1, _, Q2t = scipy.linalg.svd(U0[:p])
    except (np.linalg.LinAlgError, ValueError) as e:
        raise ChartConstructionError(f"SVD of the upper block failed: {e}") from e

    S = np.eye(N)
    S[:p, :p] = Q1 @ Q2t
    chart = CayleyChart(S, p)
    V0 = cayley_forward(chart, U0)

    residual = float(np.linalg.norm(cayley_inverse(chart, V0) - U0))
    if residual > tolerance:
        raise ChartConstructionError("round trip does not reproduce the anchor", residual)

    logger.debug("Chart anchored", N=N, p=p, residual=residual)
    return chart, V0
