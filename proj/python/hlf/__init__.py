"""Valuations, higher topologies and points over higher local fields."""

import json

from ._hlf import Element, Field, HlfError, lift_h, suite_names
from ._hlf import _check, _run_task

__all__ = ["Element", "Field", "HlfError", "lift_h", "suite_names", "run_task", "check"]


def run_task(kind, **inputs):
    """Run one task (same kinds as job files) and return the result as a dict."""
    return json.loads(_run_task(kind, json.dumps(inputs)))


def check(suite="all", seed=1, battery=100):
    return json.loads(_check(suite, seed, battery))
