"""Uniformly accurate splitting schemes for the semiclassical cubic NLS in
phase-amplitude form, with eikonal solvers, a wave-function baseline and a
convergence harness."""

from .spectral import Grid
from .wkb import SimParams, WKBState, scheme1_step, scheme2_step
from .high_order import VState, scheme4_step
from .gpe import WaveFunction, strang_gpe_step, wkb_to_psi
from .diagnostics import compute_errors, fit_order

__version__ = "0.1.0"

__all__ = [
    "Grid",
    "SimParams",
    "VState",
    "WKBState",
    "WaveFunction",
    "compute_errors",
    "fit_order",
    "scheme1_step",
    "scheme2_step",
    "scheme4_step",
    "strang_gpe_step",
    "wkb_to_psi",
]
