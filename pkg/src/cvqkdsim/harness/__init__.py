"""Scenario-driven CLI harness: single runs, parameter sweeps, CSV output."""

from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario
from .runner import MetricsRow, run_scenario, run_sweep, emit_csv

__all__ = [
    "Scenario", "ScenarioError", "load_scenario", "parse_scenario",
    "MetricsRow", "run_scenario", "run_sweep", "emit_csv",
]
