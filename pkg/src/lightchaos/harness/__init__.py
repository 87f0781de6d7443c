"""Experiment registry, reports and command line."""

from .config import RunConfig, load_config
from .registry import REGISTRY, Check, ExperimentSpec, get_experiment, list_experiments
from .report import RunReport, parse_report, render_report, run_experiment, verify_claims, write_report

__all__ = [
    "RunConfig",
    "load_config",
    "REGISTRY",
    "Check",
    "ExperimentSpec",
    "get_experiment",
    "list_experiments",
    "RunReport",
    "parse_report",
    "render_report",
    "run_experiment",
    "verify_claims",
    "write_report",
]
