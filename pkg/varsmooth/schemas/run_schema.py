"""Experiment configuration loaded from the checked-in JSON configs."""

import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from varsmooth.core.config import get_settings
from varsmooth.core.errors import InvalidArgumentError
from varsmooth.schemas.solver_schema import ArmijoConfig, StoppingRule

DEFAULT_GRID = [10.0**-i for i in range(7)]


class Experiment(str, Enum):
    SPCA = "spca"
    SSC = "ssc"
    SELFTEST = "selftest"


class Solver(str, Enum):
    VSMOOTH = "vsmooth"
    RSUB = "rsub"
    RSMOOTH = "rsmooth"


class SpcaSize(BaseModel):
    """One (N, p) cell of the SPCA grid with its optional wall-clock budget."""

    N: int = Field(..., ge=1)
    p: int = Field(..., ge=1)
    time_budget_seconds: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def validate_dimensions(self) -> "SpcaSize":
        if self.p > self.N:
            raise ValueError(f"p = {self.p} exceeds N = {self.N}")
        return self


class SpcaSettings(BaseModel):
    """Sparse PCA experiment settings.

    Attributes:
        sizes: Grid of (N, p) cells
        lam: Regularization weight
        regularizer: l1 or mcp
        theta: MCP shape (mcp only)
        num_samples: Rows of the generated data matrix
        use_time_budgets: Stop each cell at its size's budget instead of the iteration cap
    """

    sizes: List[SpcaSize] = Field(default_factory=lambda: [SpcaSize(N=200, p=1)])
    lam: float = Field(default=0.1, ge=0)
    regularizer: str = Field(default="l1")
    theta: float = Field(default=1.0, gt=0)
    num_samples: int = Field(default=5000, ge=1)
    use_time_budgets: bool = False

    @field_validator("regularizer")
    @classmethod
    def validate_regularizer(cls, v: str) -> str:
        if v not in ("l1", "mcp"):
            raise ValueError("Regularizer must be one of: l1, mcp")
        return v


class BlobsSettings(BaseModel):
    """Synthetic Gaussian blobs used instead of a dataset file."""

    n_samples: int = Field(default=150, ge=3)
    separation: float = Field(default=10.0, gt=0)
    seed: int = 0


class SscSettings(BaseModel):
    """Sparse spectral clustering experiment settings.

    Attributes:
        dataset: Dataset CSV path (overridden by the --dataset flag)
        blobs: Synthetic data used when no dataset path is given
        K: Cluster count; taken from the dataset labels when None
        methods: Subset of SC, SSC+l1, SSC+MCP
        k_neighbors: Graph degree parameter
        bandwidth: Global affinity scale (local scaling when None)
        restarts: k-means runs averaged per cell
        grid_search: Select (lam, theta) by (NMI + ARI) / 2 over the grids
        lambda_grid / theta_grid: Candidate values
        lam / theta: Values used without grid search
    """

    dataset: Optional[str] = None
    blobs: Optional[BlobsSettings] = None
    K: Optional[int] = Field(default=None, ge=1)
    methods: List[str] = Field(default_factory=lambda: ["SC", "SSC+l1", "SSC+MCP"])
    k_neighbors: int = Field(default=10, ge=1)
    bandwidth: Optional[float] = Field(default=None, gt=0)
    restarts: int = Field(default=100, ge=1)
    grid_search: bool = True
    lambda_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_GRID))
    theta_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_GRID))
    lam: float = Field(default=1e-3, ge=0)
    theta: float = Field(default=1e-2, gt=0)

    @field_validator("methods")
    @classmethod
    def validate_methods(cls, v: List[str]) -> List[str]:
        valid_methods = ["SC", "SSC+l1", "SSC+MCP"]
        for method in v:
            if method not in valid_methods:
                raise ValueError(f"Method must be one of: {', '.join(valid_methods)}")
        return v

    @field_validator("lambda_grid", "theta_grid")
    @classmethod
    def validate_grid(cls, v: List[float]) -> List[float]:
        if not v or any(x <= 0 for x in v):
            raise ValueError("Grids must be nonempty lists of positive values")
        return v


class RunConfig(BaseModel):
    """Resolved configuration of one benchmark invocation."""

    experiment: Experiment
    seeds: List[int] = Field(default_factory=lambda: list(range(10)))
    solvers: List[Solver] = Field(default_factory=lambda: [Solver.VSMOOTH])
    alpha: float = Field(default=3.0, ge=1)
    eta: Optional[float] = Field(default=None, gt=0, description="Schedule eta override")
    rsub_decay: float = Field(default=0.99, gt=0, lt=1)
    armijo: ArmijoConfig = Field(default_factory=ArmijoConfig)
    stop: StoppingRule = Field(default_factory=lambda: StoppingRule(max_iterations=5000))
    step_mode: str = Field(default="backtracking")
    output_dir: Optional[str] = None
    workers: int = Field(default_factory=lambda: get_settings().workers, ge=1)
    value_every: int = Field(default=1, ge=1)
    spca: SpcaSettings = Field(default_factory=SpcaSettings)
    ssc: SscSettings = Field(default_factory=SscSettings)

    @field_validator("seeds")
    @classmethod
    def validate_seeds(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("At least one seed is required")
        return v

    @field_validator("step_mode")
    @classmethod
    def validate_step_mode(cls, v: str) -> str:
        if v not in ("backtracking", "lipschitz"):
            raise ValueError("step_mode must be one of: backtracking, lipschitz")
        return v

    def with_overrides(
        self,
        output_dir: Optional[str] = None,
        seeds: Optional[List[int]] = None,
        workers: Optional[int] = None,
        time_budget: Optional[float] = None,
        dataset: Optional[str] = None,
    ) -> "RunConfig":
        """Apply command-line overrides; unset arguments keep the file values."""
        data: Dict[str, Any] = self.model_dump()
        if output_dir is not None:
            data["output_dir"] = output_dir
        if seeds is not None:
            data["seeds"] = seeds
        if workers is not None:
            data["workers"] = workers
        if time_budget is not None:
            data["stop"]["time_budget_seconds"] = time_budget
        if dataset is not None:
            data["ssc"]["dataset"] = dataset
        return RunConfig.model_validate(data)

    model_config = {
        "json_schema_extra": {
            "examples": [
                {
                    "experiment": "spca",
                    "seeds": [0, 1, 2],
                    "solvers": ["vsmooth", "rsub", "rsmooth"],
                    "stop": {"max_iterations": 5000},
                    "spca": {"sizes": [{"N": 200, "p": 1}], "lam": 0.1},
                }
            ]
        }
    }


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """Read and validate a JSON experiment config."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise InvalidArgumentError("config", str(path), f"a readable file ({e})") from e
    except json.JSONDecodeError as e:
        raise InvalidArgumentError("config", str(path), f"valid JSON ({e})") from e
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as e:
        raise InvalidArgumentError("config", str(path), f"a valid run configuration: {e}") from e
