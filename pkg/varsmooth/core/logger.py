"""Structured logging for varsmooth.

Solver runs log numpy scalars and small arrays as event fields; the
``_numpy_fields`` processor turns them into plain Python values so the JSON
renderer can serialize them. Logs go to stderr, stdout is reserved for command
results.
"""

import logging
import sys
from typing import Any, MutableMapping, Optional, TextIO

import numpy as np
import structlog

from varsmooth.core.config import get_settings

# Arrays longer than this are summarized by shape.
_MAX_LOGGED_ARRAY = 8


def _plain(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        if value.size <= _MAX_LOGGED_ARRAY:
            return value.tolist()
        return f"ndarray{value.shape}"
    return value


def _numpy_fields(
    logger: Any, method_name: str, event_dict: MutableMapping[str, Any]
) -> MutableMapping[str, Any]:
    for key, value in event_dict.items():
        event_dict[key] = _plain(value)
    return event_dict


def setup_logging(level: Optional[str] = None, stream: Optional[TextIO] = None) -> None:
    """Configure stdlib logging and structlog.

    Args:
        level: Log level name; defaults to ``Settings.log_level``.
        stream: Log destination; defaults to ``sys.stderr``.
    """
    settings = get_settings()
    stream = stream or sys.stderr
    numeric_level = getattr(logging, (level or settings.log_level).upper())

    logging.basicConfig(
        format="%(message)s",
        stream=stream,
        level=numeric_level,
        force=True,
    )

    renderer = (
        structlog.dev.ConsoleRenderer()
        if settings.debug
        else structlog.processors.JSONRenderer()
    )
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.dev.set_exc_info,
            structlog.processors.TimeStamper(fmt="iso"),
            _numpy_fields,
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(numeric_level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=stream),
        cache_logger_on_first_use=False,
    )


def get_logger(name: str) -> Any:
    """Return a structlog logger bound to ``name`` (typically ``__name__``)."""
    return structlog.get_logger(name)
