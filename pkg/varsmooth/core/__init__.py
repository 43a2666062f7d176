"""Core modules for varsmooth."""

from varsmooth.core.config import get_settings, Settings
from varsmooth.core.logger import get_logger, setup_logging
from varsmooth.core.errors import (
    VarSmoothError,
    InvalidArgumentError,
    SingularPointError,
    ChartConstructionError,
    LineSearchError,
    NumericalFailureError,
    UnsupportedProblemError,
    GraphConstructionError,
    DegenerateEmbeddingError,
    DatasetParseError,
    ResultWriteError,
    SelfTestFailure,
)

__all__ = [
    "get_settings",
    "Settings",
    "get_logger",
    "setup_logging",
    "VarSmoothError",
    "InvalidArgumentError",
    "SingularPointError",
    "ChartConstructionError",
    "LineSearchError",
    "NumericalFailureError",
    "UnsupportedProblemError",
    "GraphConstructionError",
    "DegenerateEmbeddingError",
    "DatasetParseError",
    "ResultWriteError",
    "SelfTestFailure",
]
