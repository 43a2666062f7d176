"""Test suite for varsmooth."""
