"""Direct splitting of the cubic NLS / Gross-Pitaevskii equation

    i eps psi_t = -(eps^2 / 2) psi_xx + |psi|^2 psi

used as the non-uniform baseline and to build wave-function references.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .composition import ALPHA
from .errors import RefusalError, StructuralError
from .high_order import from_vstate, scheme4_step, to_vstate
from .initial_data import get_initial_data
from .limits import check_resources
from .snapshot import Snapshot, write_snapshot
from .spectral import Grid, apply_multiplier
from .wkb import SimParams, WKBState


@dataclass(frozen=True)
class WaveFunction:
    grid: Grid
    psi: np.ndarray
    eps: float

    def __post_init__(self):
        object.__setattr__(self, "psi", self.grid.check(self.psi, "psi").astype(complex))
        if not self.eps > 0:
            raise RefusalError(f"the wave-function solver needs eps > 0, got {self.eps}")


def strang_gpe_step(w: WaveFunction, h: float) -> WaveFunction:
    """Half kinetic, full nonlinear, half kinetic.

    ``|psi|`` is constant during the nonlinear substep, which is therefore
    integrated exactly. ``h`` may be negative (all substeps are reversible).
    """
    g, eps = w.grid, w.eps
    half_kin = np.exp(-0.25j * eps * g.k**2 * h)
    psi = apply_multiplier(g, w.psi, half_kin)
    psi = psi * np.exp(-1j * h * np.abs(psi) ** 2 / eps)
    psi = apply_multiplier(g, psi, half_kin)
    return replace(w, psi=psi)


def yoshida_gpe_step(w: WaveFunction, h: float) -> WaveFunction:
    """Fourth-order triple jump of :func:`strang_gpe_step`."""
    outer, inner = ALPHA[1], ALPHA[3]
    w = strang_gpe_step(w, outer * h)
    w = strang_gpe_step(w, inner * h)
    return strang_gpe_step(w, outer * h)


def wkb_to_psi(state: WKBState, eps: float) -> WaveFunction:
    """``psi = A exp(iS / eps)``; a complex phase contributes its real part only."""
    if not eps > 0:
        raise RefusalError("no single-phase wave function exists for eps = 0")
    S = np.real(state.S)
    return WaveFunction(state.grid, state.A * np.exp(1j * S / eps), eps)


def initial_wavefunction(grid: Grid, S0, A0, eps: float) -> WaveFunction:
    return wkb_to_psi(WKBState.from_functions(grid, S0, A0), eps)


def march(step, state, T: float, n_steps: int):
    """Apply ``step(state, h)`` ``n_steps`` times with ``h = T / n_steps``."""
    if n_steps < 0:
        raise StructuralError("n_steps must be non-negative")
    if n_steps == 0:
        return state
    h = T / n_steps
    for _ in range(n_steps):
        state = step(state, h)
    return state


@dataclass(frozen=True)
class ReferenceConfig:
    """Parameters of a reference run. ``n_steps`` equal steps cover ``[0, tf]``."""

    eps: float
    tf: float = 0.1
    nx: int = 2**8
    n_steps: int = 2**13
    data: str = "paper"
    max_nx: int | None = None
    max_nt: int | None = None


def generate_reference(kind: str, config: ReferenceConfig, path=None):
    """Run the designated fourth-order method and return a :class:`Snapshot`.

    ``kind="wkb4"`` runs the complex-coefficient phase-amplitude scheme,
    ``kind="gpe"`` the triple jump of the Strang splitting for psi. The
    snapshot is written to ``path`` when given.
    """
    check_resources(config.nx, config.n_steps, config.max_nx, config.max_nt)
    grid = Grid(config.nx)
    data = get_initial_data(config.data)
    h = config.tf / config.n_steps
    meta = {
        "method": kind,
        "h": h,
        "n_steps": config.n_steps,
        "nx": config.nx,
        "data": config.data,
    }
    if kind == "wkb4":
        params = SimParams(config.eps, h)
        v = to_vstate(WKBState.from_functions(grid, data.S0, data.A0))
        for _ in range(config.n_steps):
            v = scheme4_step(v, params)
        out = from_vstate(v)
        snap = Snapshot("wkb4", config.eps, config.tf, out.S, out.A, meta)
    elif kind == "gpe":
        w = initial_wavefunction(grid, data.S0, data.A0, config.eps)
        w = march(yoshida_gpe_step, w, config.tf, config.n_steps)
        snap = Snapshot("gpe", config.eps, config.tf, np.zeros(config.nx), w.psi, meta)
    else:
        raise StructuralError(f"unknown reference kind {kind!r} (expected 'wkb4' or 'gpe')")
    if path is not None:
        write_snapshot(path, snap)
    return snap
