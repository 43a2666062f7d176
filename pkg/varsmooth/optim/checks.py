"""Numerical oracles used by the property suites: grid minimization and finite differences."""

from typing import Callable

import numpy as np

# Scalars minimized per vectorized pass.
GRID_BATCH = 100


def grid_minimize(
    objective: Callable[[np.ndarray, np.ndarray], np.ndarray],
    z: np.ndarray,
    radius: float = 1.0,
    coarse_step: float = 1e-3,
    fine_step: float = 1e-6,
) -> np.ndarray:
    """Batched 1-D minimization by exhaustive grid search.

    For each scalar z_i the window [min(z_i, 0) - radius, max(z_i, 0) + radius]
    is scanned with `coarse_step`, then +-2 coarse steps around the best
    point are rescanned with `fine_step`.

    Args:
        objective: Vectorized f(x, z) evaluated on x of shape (m, k) with z of shape (m, 1)
        z: Scalars to minimize for, shape (m,)
        radius: Margin added around [min(z, 0), max(z, 0)]
        coarse_step: First-pass grid spacing
        fine_step: Refinement grid spacing

    Returns:
        Array of minimizers, shape (m,)
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if z.size > GRID_BATCH:
        return np.concatenate(
            [
                grid_minimize(objective, z[i : i + GRID_BATCH], radius, coarse_step, fine_step)
                for i in range(0, z.size, GRID_BATCH)
            ]
        )
    lo = np.minimum(z, 0.0) - radius
    hi = np.maximum(z, 0.0) + radius
    width = float(np.max(hi - lo))
    coarse = np.arange(int(np.ceil(width / coarse_step)) + 1) * coarse_step
    x = lo[:, None] + coarse[None, :]
    best = x[np.arange(z.size), np.argmin(objective(x, z[:, None]), axis=1)]

    fine = np.arange(-2.0 * coarse_step, 2.0 * coarse_step + fine_step / 2, fine_step)
    x = best[:, None] + fine[None, :]
    return x[np.arange(z.size), np.argmin(objective(x, z[:, None]), axis=1)]


def central_difference(fun: Callable[[float], float], step: float = 1e-6) -> float:
    """Derivative at 0 of t -> fun(t) by the central difference quotient."""
    return (fun(step) - fun(-step)) / (2.0 * step)


def relative_error(observed: float, expected: float, floor: float = 1.0) -> float:
    """|observed - expected| / max(|expected|, floor)."""
    return abs(observed - expected) / max(abs(expected), floor)


def orthonormality_error(U: np.ndarray) -> float:
    """Frobenius norm of I_p - U^T U."""
    U = np.asarray(U, dtype=float)
    return float(np.linalg.norm(np.eye(U.shape[1]) - U.T @ U))
