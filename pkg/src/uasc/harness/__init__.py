"""Experiment harness: configuration, runs, sweeps, plot data and CLI."""

from .config import SweepConfig, load_config
from .plotdata import emit_plotdata
from .runner import Instance, ReferenceSpec, RunResult, SweepResult, run_single, run_sweep

__all__ = [
    "Instance",
    "ReferenceSpec",
    "RunResult",
    "SweepConfig",
    "SweepResult",
    "emit_plotdata",
    "load_config",
    "run_single",
    "run_sweep",
]
