"""Result row schemas written to CSV and JSON by the benchmark runners."""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

TRACE_COLUMNS = ["n", "mu", "gamma", "grad_norm", "surrogate_value", "true_value", "elapsed_s", "bt_count"]


class TraceRecord(BaseModel):
    """One solver trace row.

    Record 0 is evaluated at the starting point with mu_1 and gamma = 0; record n
    is evaluated at y_{n+1} with mu_{n+1} and carries the stepsize and trial
    count of step n.
    """

    n: int = Field(..., ge=0)
    mu: float
    gamma: float = Field(..., ge=0)
    grad_norm: float
    surrogate_value: float
    true_value: float
    elapsed_s: float = Field(..., ge=0)
    bt_count: int = Field(default=0, ge=0)


class SpcaSummaryRow(BaseModel):
    """Deterministic per-(algorithm, size) averages over seeds."""

    algorithm: str
    N: int = Field(..., ge=1)
    p: int = Field(..., ge=1)
    fval: float
    feasi: float = Field(..., ge=0)
    itr: float = Field(..., ge=0)
    sparsity: float = Field(..., ge=0, le=1)


class TimingRow(BaseModel):
    """Wall-clock companion of SpcaSummaryRow."""

    algorithm: str
    N: int
    p: int
    time: float = Field(..., ge=0)


class SscSummaryRow(BaseModel):
    """Best grid cell per clustering method."""

    method: str
    lam: float = Field(..., alias="lambda", ge=0)
    theta: Optional[float] = None
    NMI_mean: Optional[float] = None
    ARI_mean: Optional[float] = None

    model_config = {"populate_by_name": True}

    @field_validator("method")
    @classmethod
    def validate_method(cls, v: str) -> str:
        valid_methods = ["SC", "SSC+l1", "SSC+MCP"]
        if v not in valid_methods:
            raise ValueError(f"Method must be one of: {', '.join(valid_methods)}")
        return v


class SscGridRow(SscSummaryRow):
    """Every evaluated (lambda, theta) cell, with its selection score."""

    score: Optional[float] = None
    iterations: int = Field(default=0, ge=0)


class SuiteResult(BaseModel):
    """Outcome of one self-test property suite."""

    name: str
    passed: bool
    checks: int = Field(default=0, ge=0)
    seconds: float = Field(..., ge=0)
    error: Optional[str] = None
    details: Dict[str, object] = Field(default_factory=dict)


class SelfTestReport(BaseModel):
    """Aggregate self-test outcome."""

    suites: List[SuiteResult]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def suite(self, name: str) -> SuiteResult:
        for s in self.suites:
            if s.name == name:
                return s
        raise KeyError(name)
