"""Tests for structured logging setup."""

import io
import json
import logging

import numpy as np
import structlog

from varsmooth.core.logger import _numpy_fields, get_logger, setup_logging


class TestNumpyFields:
    """Test conversion of numpy event fields."""

    def test_scalars_become_python_values(self):
        event = _numpy_fields(None, "info", {"value": np.float64(0.25), "itr": np.int64(7)})

        assert event == {"value": 0.25, "itr": 7}
        assert type(event["value"]) is float
        assert type(event["itr"]) is int

    def test_small_arrays_become_lists(self):
        event = _numpy_fields(None, "info", {"mu": np.array([0.5, 0.25])})

        assert event["mu"] == [0.5, 0.25]

    def test_large_arrays_are_summarized(self):
        event = _numpy_fields(None, "info", {"U": np.zeros((20, 3))})

        assert event["U"] == "ndarray(20, 3)"

    def test_other_values_unchanged(self):
        event = _numpy_fields(None, "info", {"event": "Solver run completed", "reason": None})

        assert event == {"event": "Solver run completed", "reason": None}


class TestSetupLogging:
    """Test logger configuration."""

    def test_level_override(self):
        setup_logging("DEBUG")
        try:
            assert logging.getLogger().level == logging.DEBUG
        finally:
            setup_logging()

    def test_json_lines_on_stream(self):
        stream = io.StringIO()
        setup_logging("INFO", stream=stream)
        try:
            get_logger("varsmooth.test").info("Solver run completed", value=np.float64(1.5))
        finally:
            setup_logging()

        record = json.loads(stream.getvalue().strip().splitlines()[-1])
        assert record["event"] == "Solver run completed"
        assert record["value"] == 1.5
        assert record["level"] == "info"

    def test_get_logger_is_bound_logger(self):
        logger = get_logger(__name__)

        assert hasattr(logger, "info")
        assert isinstance(structlog.get_config()["processors"], list)
