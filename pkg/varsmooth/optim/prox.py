"""Weakly convex regularizers with exact proximity operators and Moreau envelopes.

Both regularizers act entrywise; matrix inputs are flattened by the callers
(or simply broadcast, since every operation here is elementwise).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from varsmooth.core.errors import InvalidArgumentError


class RegularizerKind(str, Enum):
    """Supported sparsity-promoting penalties."""

    L1 = "l1"
    MCP = "mcp"


def prox_l1(z: np.ndarray, t: float, lam: float = 1.0) -> np.ndarray:
    """Entrywise soft threshold, the proximity operator of t*lam*|.|.

    Args:
        z: Input array
        t: Proximal index, must be positive
        lam: Weight of the l1 penalty

    Returns:
        sign(z) * max(|z| - t*lam, 0)
    """
    if t <= 0:
        raise InvalidArgumentError("t", t, "t > 0")
    z = np.asarray(z, dtype=float)
    return np.sign(z) * np.maximum(np.abs(z) - t * lam, 0.0)


def prox_mcp(z: np.ndarray, t: float, lam: float, theta: float) -> np.ndarray:
    """Entrywise proximity operator of t*lam*r_theta (minimax concave penalty).

    The per-entry subproblem is strongly convex only when t*lam/theta < 1.

    Args:
        z: Input array
        t: Proximal index
        lam: Penalty weight
        theta: MCP shape parameter

    Returns:
        0 on |z| <= t*lam, the rescaled soft threshold on t*lam < |z| <= theta,
        and z itself beyond theta
    """
    if t <= 0:
        raise InvalidArgumentError("t", t, "t > 0")
    if lam <= 0:
        raise InvalidArgumentError("lam", lam, "lam > 0")
    if theta <= 0:
        raise InvalidArgumentError("theta", theta, "theta > 0")
    if t * lam / theta >= 1.0:
        raise InvalidArgumentError("t*lam/theta", t * lam / theta, "a value < 1")

    z = np.asarray(z, dtype=float)
    magnitude = np.abs(z)
    shrunk = np.minimum(theta, (magnitude - t * lam) / (1.0 - t * lam / theta))
    out = np.where(magnitude <= t * lam, 0.0, np.sign(z) * shrunk)
    return np.where(magnitude > theta, z, out)


@dataclass(frozen=True)
class WeaklyConvexFunction:
    """A separable regularizer lam * psi with psi in {l1, MCP}.

    Attributes:
        kind: Which penalty psi is
        lam: Overall weight
        theta: MCP shape (ignored for l1)
    """

    kind: RegularizerKind
    lam: float
    theta: float = 1.0

    def __post_init__(self) -> None:
        if self.lam < 0:
            raise InvalidArgumentError("lam", self.lam, "lam >= 0")
        if self.kind == RegularizerKind.MCP and self.theta <= 0:
            raise InvalidArgumentError("theta", self.theta, "theta > 0")

    @classmethod
    def l1(cls, lam: float) -> "WeaklyConvexFunction":
        return cls(RegularizerKind.L1, lam)

    @classmethod
    def mcp(cls, lam: float, theta: float) -> "WeaklyConvexFunction":
        return cls(RegularizerKind.MCP, lam, theta)

    @property
    def eta(self) -> float:
        """Tightest weak-convexity modulus of lam * psi."""
        if self.kind == RegularizerKind.MCP:
            return self.lam / self.theta
        return 0.0

    def lipschitz(self, entries: int = 1) -> float:
        """Lipschitz constant in Frobenius norm over `entries` coordinates."""
        return self.lam * float(np.sqrt(entries))

    def schedule_eta(self) -> float:
        """Weak-convexity level handed to the smoothing schedule.

        l1 is convex, so any positive value works and 1 is used; MCP uses
        1/theta, raised to lam/theta when lam > 1.
        """
        if self.kind == RegularizerKind.MCP:
            return max(1.0 / self.theta, self.eta)
        return 1.0

    def check_index(self, mu: float) -> None:
        """Validate a Moreau index for this function."""
        if not mu > 0:
            raise InvalidArgumentError("mu", mu, "mu > 0")
        if self.eta > 0 and mu * self.eta >= 1.0:
            raise InvalidArgumentError("mu", mu, f"mu < 1/eta = {1.0 / self.eta:.6g}")

    def value(self, z: np.ndarray) -> float:
        z = np.asarray(z, dtype=float)
        if self.lam == 0:
            return 0.0
        magnitude = np.abs(z)
        if self.kind == RegularizerKind.L1:
            return float(self.lam * magnitude.sum())
        inner = magnitude - z * z / (2.0 * self.theta)
        return float(self.lam * np.where(magnitude <= self.theta, inner, self.theta / 2.0).sum())

    def prox(self, z: np.ndarray, t: float) -> np.ndarray:
        """Proximity operator of t * (lam * psi)."""
        if self.lam == 0:
            if t <= 0:
                raise InvalidArgumentError("t", t, "t > 0")
            return np.array(z, dtype=float)
        if self.kind == RegularizerKind.L1:
            return prox_l1(z, t, self.lam)
        return prox_mcp(z, t, self.lam, self.theta)

    def subgradient(self, z: np.ndarray) -> np.ndarray:
        """Minimum-norm element of the (limiting) subdifferential, entrywise.

        Zero entries get the subgradient 0.
        """
        z = np.asarray(z, dtype=float)
        if self.kind == RegularizerKind.L1:
            return self.lam * np.sign(z)
        inside = np.abs(z) <= self.theta
        return self.lam * np.where(inside, np.sign(z) - z / self.theta, 0.0)


def moreau_value(g: WeaklyConvexFunction, z: np.ndarray, mu: float) -> float:
    """Moreau envelope g^mu(z) = g(p) + ||p - z||^2 / (2 mu), p = prox_{mu g}(z)."""
    g.check_index(mu)
    z = np.asarray(z, dtype=float)
    p = g.prox(z, mu)
    return g.value(p) + float(np.sum((p - z) ** 2)) / (2.0 * mu)


def moreau_grad(g: WeaklyConvexFunction, z: np.ndarray, mu: float) -> np.ndarray:
    """Gradient of the Moreau envelope, (z - prox_{mu g}(z)) / mu."""
    g.check_index(mu)
    z = np.asarray(z, dtype=float)
    return (z - g.prox(z, mu)) / mu


def moreau_value_and_grad(
    g: WeaklyConvexFunction, z: np.ndarray, mu: float
) -> Tuple[float, np.ndarray]:
    """Envelope value and gradient sharing one prox evaluation."""
    g.check_index(mu)
    z = np.asarray(z, dtype=float)
    p = g.prox(z, mu)
    residual = z - p
    value = g.value(p) + float(np.sum(residual**2)) / (2.0 * mu)
    return value, residual / mu
