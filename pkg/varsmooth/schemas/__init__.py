"""Pydantic schemas for solver configs, run configs and result rows."""

from varsmooth.schemas.solver_schema import ArmijoConfig, ScheduleKind, SmoothingSchedule, StoppingRule
from varsmooth.schemas.run_schema import RunConfig, load_run_config
from varsmooth.schemas.result_schema import (
    TraceRecord,
    SpcaSummaryRow,
    TimingRow,
    SscSummaryRow,
    SscGridRow,
    SuiteResult,
    SelfTestReport,
)

__all__ = [
    "ArmijoConfig",
    "ScheduleKind",
    "SmoothingSchedule",
    "StoppingRule",
    "RunConfig",
    "load_run_config",
    "TraceRecord",
    "SpcaSummaryRow",
    "TimingRow",
    "SscSummaryRow",
    "SscGridRow",
    "SuiteResult",
    "SelfTestReport",
]
