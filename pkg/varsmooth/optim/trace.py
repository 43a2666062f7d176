"""Solver traces and their CSV serialization."""

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from varsmooth.core.errors import ResultWriteError
from varsmooth.optim.cayley import SkewParam
from varsmooth.schemas.result_schema import TRACE_COLUMNS, TraceRecord


class TerminationReason(str, Enum):
    """Why a solver run stopped."""

    MAX_ITERATIONS = "max_iterations"
    TIME_BUDGET = "time_budget"
    GRAD_TOLERANCE = "grad_tolerance"
    STATIONARY = "stationary"


@dataclass(frozen=True, eq=False)
class IterationState:
    """State handed to an iteration callback just before step n is applied.

    Attributes:
        n: Iteration index (1-based)
        U: Current Stiefel iterate
        V: Current chart iterate (None for the ambient baselines)
        direction: Gradient on Q_{N,p} (vsmooth) or tangent search direction (baselines)
        mu: Moreau index of this iteration (NaN when no smoothing is used)
        gamma: Accepted stepsize
        value: Objective the step is taken on, at the current iterate
    """

    n: int
    U: np.ndarray
    V: Optional[SkewParam]
    direction: Union[SkewParam, np.ndarray]
    mu: float
    gamma: float
    value: float


@dataclass(frozen=True, eq=False)
class SolverTrace:
    """Immutable record of one solver run.

    Attributes:
        algorithm: Solver name (vsmooth, rsub, rsmooth)
        records: Record 0 at the start, then one record per iteration
        final_U: Last Stiefel iterate
        final_V: Last chart iterate (None for the ambient baselines)
        reason: Termination reason
    """

    algorithm: str
    records: List[TraceRecord]
    final_U: np.ndarray
    final_V: Optional[SkewParam]
    reason: TerminationReason

    @property
    def iterations(self) -> int:
        return len(self.records) - 1

    @property
    def elapsed(self) -> float:
        return self.records[-1].elapsed_s

    def column(self, name: str) -> np.ndarray:
        """One trace column as a float array."""
        if name not in TRACE_COLUMNS:
            raise KeyError(name)
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Write the records with the fixed column order; floats use repr precision."""
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("w", newline="", encoding="utf-8") as f:
                writer = csv.DictWriter(f, fieldnames=TRACE_COLUMNS, lineterminator="\n")
                writer.writeheader()
                for record in self.records:
                    writer.writerow(record.model_dump())
        except OSError as e:
            raise ResultWriteError(str(path), str(e)) from e
        return path


def read_trace_csv(path: Union[str, Path]) -> List[TraceRecord]:
    """Load trace records written by `SolverTrace.to_csv`."""
    with Path(path).open(newline="", encoding="utf-8") as f:
        return [TraceRecord.model_validate(row) for row in csv.DictReader(f)]
