"""Python front end for the taylor_ibvp solver.

Configs are the same JSON documents the command-line tool reads, given
either as a dict or as a path to a file.
"""

import json
import os

from ._core import (
    BlowUpError,
    ConfigError,
    Error,
    Problem,
    Solution,
    SolverError,
    bump_profile,
    lift_profile,
    residual_max,
    solve,
)
from . import _core

__all__ = [
    "BlowUpError",
    "ConfigError",
    "Error",
    "Problem",
    "Solution",
    "SolverError",
    "bump_profile",
    "lift_profile",
    "load",
    "residual_max",
    "run",
    "solve",
]


def _text(config):
    if isinstance(config, dict):
        return json.dumps(config)
    with open(os.fspath(config), encoding="utf-8") as f:
        return f.read()


def load(config, *, order=None, snapshots=None, oracle=None, dt=None):
    """Builds a Problem; keyword arguments mirror the CLI overrides."""
    return _core.problem_from_text(_text(config), order, snapshots, oracle, dt)


def run(command, config, out_dir=".", *, timing=True, order=None, snapshots=None, oracle=None, dt=None):
    """Runs solve, manufacture, compare, study or bump and returns the report dict."""
    report = _core.run_text(command, _text(config), os.fspath(out_dir), timing, order, snapshots, oracle, dt)
    return json.loads(report)
