"""Custom exceptions for varsmooth."""

from typing import Any, Dict, List, Optional


class VarSmoothError(Exception):
    """Base exception for all varsmooth errors."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class InvalidArgumentError(VarSmoothError):
    """Raised when an argument is outside its admissible range."""

    def __init__(self, name: str, value: Any, requirement: str):
        message = f"Invalid value for '{name}': {value!r} (expected {requirement})."
        super().__init__(message, {"name": name, "value": value, "requirement": requirement})


class SingularPointError(VarSmoothError):
    """Raised when a Stiefel point lies on (or too near) the chart's singular-point set."""

    def __init__(self, determinant: float, margin: float, tolerance: float):
        message = (
            f"Point is singular for this chart: |det(I_p + I_Np^T S^T U)| = {determinant:.3e}, "
            f"smallest singular value {margin:.3e} <= tolerance {tolerance:.1e}"
        )
        super().__init__(
            message,
            {"determinant": determinant, "margin": margin, "tolerance": tolerance},
        )


class ChartConstructionError(VarSmoothError):
    """Raised when a Cayley chart cannot be anchored at the requested point."""

    def __init__(self, reason: str, residual: Optional[float] = None):
        message = f"Failed to construct chart: {reason}"
        if residual is not None:
            message += f" (residual {residual:.3e})"
        super().__init__(message, {"reason": reason, "residual": residual})


class LineSearchError(VarSmoothError):
    """Raised when backtracking exceeds its trial cap."""

    def __init__(self, trials: int, last_gamma: float, iteration: Optional[int] = None):
        message = (
            f"Armijo backtracking failed after {trials} trials (last stepsize {last_gamma:.3e}); "
            "the gradient is likely inconsistent with the objective"
        )
        super().__init__(
            message,
            {"trials": trials, "last_gamma": last_gamma, "iteration": iteration},
        )


class NumericalFailureError(VarSmoothError):
    """Raised when a solver produces a non-finite value or gradient."""

    def __init__(self, iteration: int, quantity: str):
        message = f"Non-finite {quantity} encountered at iteration {iteration}"
        super().__init__(message, {"iteration": iteration, "quantity": quantity})


class UnsupportedProblemError(VarSmoothError):
    """Raised when a solver is applied to a problem class it does not handle."""

    def __init__(self, solver: str, reason: str):
        message = f"Solver '{solver}' does not support this problem: {reason}"
        super().__init__(message, {"solver": solver, "reason": reason})


class GraphConstructionError(VarSmoothError):
    """Raised when the affinity graph has a zero-degree vertex."""

    def __init__(self, vertex: int):
        message = f"Affinity graph has an isolated vertex {vertex} (zero degree)"
        super().__init__(message, {"vertex": vertex})


class DegenerateEmbeddingError(VarSmoothError):
    """Raised when a spectral embedding has a zero row."""

    def __init__(self, rows: List[int]):
        message = f"Embedding has zero rows that cannot be normalized: {rows[:10]}"
        super().__init__(message, {"rows": rows})


class DatasetParseError(VarSmoothError):
    """Raised when a dataset CSV is malformed."""

    def __init__(self, path: str, line: int, reason: str):
        message = f"Failed to parse {path} at line {line}: {reason}"
        super().__init__(message, {"path": path, "line": line, "reason": reason})


class ResultWriteError(VarSmoothError):
    """Raised when result files cannot be written."""

    def __init__(self, path: str, reason: str):
        message = f"Cannot write results to {path}: {reason}"
        super().__init__(message, {"path": path, "reason": reason})


class SelfTestFailure(VarSmoothError):
    """Raised by a self-test property check."""

    def __init__(self, check: str, observed: float, bound: float):
        message = f"Check '{check}' failed: observed {observed:.3e} exceeds bound {bound:.3e}"
        super().__init__(message, {"check": check, "observed": observed, "bound": bound})
