"""Python access to the scatlab C++ core.

Vectors are plain sequences of floats in chart coordinates (t, x1, x2) for
spacetime points and (x1, x2) for base points.
"""

import json

from ._core import (
    SCHEMA_VERSION,
    ConfigError,
    NumericalError,
    RecordFailure,
    ScenarioError,
    boundary_action,
    connect,
    experiment_names,
    ray_grid,
    rk4_endpoint_order,
    scatter,
    scenario_kinds,
    sigma_pairs,
    verify_thmmag,
)
from ._core import _run_experiment_json


def run_experiment(command, config=None):
    """Run one experiment command and return the report as a dict."""
    return json.loads(_run_experiment_json(command, json.dumps(config or {})))


__all__ = [
    "SCHEMA_VERSION",
    "ConfigError",
    "NumericalError",
    "RecordFailure",
    "ScenarioError",
    "boundary_action",
    "connect",
    "experiment_names",
    "ray_grid",
    "rk4_endpoint_order",
    "run_experiment",
    "scatter",
    "scenario_kinds",
    "sigma_pairs",
    "verify_thmmag",
]
