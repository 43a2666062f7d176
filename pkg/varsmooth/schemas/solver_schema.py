"""Solver configuration schemas: smoothing schedule, Armijo search, stopping rule."""

import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from varsmooth.core.config import get_settings


class ScheduleKind(str, Enum):
    """Family of the smoothing index sequence."""

    POWER = "power"
    LOG = "log"


class SmoothingSchedule(BaseModel):
    """Nonincreasing, nonsummable sequence of Moreau indices mu_n.

    Attributes:
        eta: Weak-convexity level the sequence is built for
        alpha: Exponent of the power family, mu_n = scale * n^(-1/alpha)
        scale: Leading factor, defaults to 1/(2 eta)
        kind: power or log
    """

    eta: float = Field(..., gt=0, description="Weak-convexity level eta > 0")
    alpha: float = Field(default=3.0, ge=1, description="Power-family exponent")
    scale: Optional[float] = Field(default=None, gt=0, description="Leading factor (default 1/(2 eta))")
    kind: ScheduleKind = Field(default=ScheduleKind.POWER)

    @model_validator(mode="after")
    def validate_scale(self) -> "SmoothingSchedule":
        """mu_1 must not exceed 1/(2 eta)."""
        if self.scale is not None and self.scale > 1.0 / (2.0 * self.eta) * (1 + 1e-12):
            raise ValueError(f"scale {self.scale} exceeds 1/(2 eta) = {1.0 / (2.0 * self.eta)}")
        return self

    @property
    def leading(self) -> float:
        return self.scale if self.scale is not None else 1.0 / (2.0 * self.eta)

    @property
    def ratio_bound(self) -> float:
        """Bound M on mu_n / mu_{n+1} over all n >= 1."""
        if self.kind == ScheduleKind.LOG:
            return 3.0 * math.log(3.0) / (2.0 * math.log(2.0))
        return 2.0 ** (1.0 / self.alpha)

    model_config = {
        "json_schema_extra": {"examples": [{"eta": 1.0, "alpha": 3.0, "kind": "power"}]}
    }


class ArmijoConfig(BaseModel):
    """Armijo backtracking parameters.

    Attributes:
        c: Sufficient-decrease constant
        rho: Contraction factor between trials
        gamma_initial: First trial stepsize; None means min(1, 1/||grad_1||)
        max_trials: Hard cap on trials per search
    """

    c: float = Field(default=2.0**-13, gt=0, lt=1)
    rho: float = Field(default=0.5, gt=0, lt=1)
    gamma_initial: Optional[float] = Field(default=None, gt=0)
    max_trials: int = Field(default_factory=lambda: get_settings().line_search_max_trials, ge=1)


class StoppingRule(BaseModel):
    """When a solver run ends. At least one bound must be finite.

    Attributes:
        max_iterations: Iteration cap (0 allowed: only the initial record is produced)
        time_budget_seconds: Wall-clock cap checked at iteration boundaries
        grad_tolerance: Stop once the surrogate gradient norm falls to this level
    """

    max_iterations: Optional[int] = Field(default=None, ge=0)
    time_budget_seconds: Optional[float] = Field(default=None, gt=0)
    grad_tolerance: Optional[float] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def validate_bounded(self) -> "StoppingRule":
        if self.max_iterations is None and self.time_budget_seconds is None and self.grad_tolerance is None:
            raise ValueError("At least one of max_iterations, time_budget_seconds, grad_tolerance is required")
        return self
