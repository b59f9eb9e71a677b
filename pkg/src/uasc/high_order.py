"""Fourth-order splitting with complex coefficients for the WKB system.

The amplitude is split into ``A1 = Re A`` and ``A2 = Im A`` so that the
nonlinearity ``A1^2 + A2^2`` is analytic, then rotated by the involution

    P = (1/sqrt 2) [[1, -i], [i, -1]],      P sigma2 P = sigma3,

to ``V = (v1, v2) = P (A1, A2)``, in which the dispersive coupling is
diagonal. The system is split into four flows (tflow1..tflow4); flows 1-2 are
combined by the real triple jump, then with flow 3 by another triple jump,
and the result is composed with the parabolic flow 4 through the 9-stage
complex-coefficient method. The phase is never projected back to real
values inside or between steps, so ``S``, ``v1`` and ``v2`` are complex along
trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .composition import ALPHA, BETA, compose
from .eikonal import EikonalSolverKind, solve_eikonal
from .errors import IrreversibleStepError, StructuralError
from .spectral import Grid, apply_multiplier
from .wkb import SimParams, WKBState, heat_increment

SQRT_HALF = np.sqrt(0.5)
P = SQRT_HALF * np.array([[1.0, -1.0j], [1.0j, -1.0]])
SIGMA0 = np.eye(2, dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

DEFAULT_EIKONAL = EikonalSolverKind("semilag", 2)


@dataclass(frozen=True)
class VState:
    grid: Grid
    S: np.ndarray
    v1: np.ndarray
    v2: np.ndarray

    def __post_init__(self):
        for name in ("S", "v1", "v2"):
            self.grid.check(getattr(self, name), name)

    def components(self):
        """Return ``(A1, A2) = P V`` (complex in general)."""
        A1 = SQRT_HALF * (self.v1 - 1j * self.v2)
        A2 = SQRT_HALF * (1j * self.v1 - self.v2)
        return A1, A2


def vstate_from_components(grid: Grid, S, A1, A2) -> VState:
    v1 = SQRT_HALF * (A1 - 1j * A2)
    v2 = SQRT_HALF * (1j * A1 - A2)
    return VState(grid, np.asarray(S), np.asarray(v1, dtype=complex), np.asarray(v2, dtype=complex))


def to_vstate(state: WKBState) -> VState:
    return vstate_from_components(state.grid, state.S, state.A.real, state.A.imag)


def from_vstate(v: VState) -> WKBState:
    A1, A2 = v.components()
    return WKBState(v.grid, v.S, A1 + 1j * A2)


def tflow1(v: VState, tau: float, eikonal: EikonalSolverKind = DEFAULT_EIKONAL) -> VState:
    g = v.grid
    S_new = solve_eikonal(g, v.S, tau, eikonal)
    phase_in = np.exp(1j * v.S)
    phase_out = np.exp(-1j * S_new)
    mult = np.exp(-0.5j * g.k**2 * tau)
    v1 = apply_multiplier(g, v.v1 * phase_in, mult) * phase_out
    v2 = apply_multiplier(g, v.v2 * phase_in, mult) * phase_out
    return VState(g, S_new, v1, v2)


def tflow2(v: VState, tau: float, eps: float) -> VState:
    g = v.grid
    k2 = g.k**2
    v1 = apply_multiplier(g, v.v1, np.exp(0.5j * (1.0 + eps) * k2 * tau))
    v2 = apply_multiplier(g, v.v2, np.exp(0.5j * (1.0 - eps) * k2 * tau))
    return VState(g, v.S, v1, v2)


def tflow3(v: VState, tau) -> VState:
    return VState(v.grid, v.S + 2j * tau * v.v1 * v.v2, v.v1, v.v2)


def tflow4(v: VState, tau, eps: float) -> VState:
    """Heat flow on ``S`` and the matching phase rotation ``exp(+-i D / eps)`` of ``V``."""
    if np.real(tau) < 0:
        raise IrreversibleStepError(f"regularizing flow needs Re(tau) >= 0, got tau={tau}")
    if eps == 0 or tau == 0:
        return v
    S_new, d = heat_increment(v.grid, v.S, tau, eps)
    return VState(v.grid, S_new, np.exp(1j * d) * v.v1, np.exp(-1j * d) * v.v2)


def phi12(v: VState, tau: float, eps: float, eikonal: EikonalSolverKind = DEFAULT_EIKONAL) -> VState:
    """Triple jump of tflow2 (outer stages) and tflow1."""
    return compose(lambda s, t: tflow2(s, t, eps), lambda s, t: tflow1(s, t, eikonal), ALPHA, tau)(v)


def phi123(v: VState, tau: float, eps: float, eikonal: EikonalSolverKind = DEFAULT_EIKONAL) -> VState:
    """Triple jump of ``phi12`` (outer stages) and tflow3."""
    return compose(lambda s, t: phi12(s, t, eps, eikonal), tflow3, ALPHA, tau)(v)


def _eikonal_for(params: SimParams) -> EikonalSolverKind:
    kind = params.eikonal or DEFAULT_EIKONAL
    if kind.order < 4:
        raise StructuralError(f"fourth-order scheme needs an eikonal solver of order >= 4, got {kind}")
    return kind


def scheme4_vstep(v: VState, params: SimParams) -> VState:
    """One step of the 9-stage complex composition on the rotated variables."""
    eps, h = params.eps, params.h
    eik = _eikonal_for(params)
    return compose(
        lambda s, t: tflow4(s, t, eps),
        lambda s, t: phi123(s, t.real, eps, eik),
        BETA,
        h,
    )(v)


def scheme4_step(state, params: SimParams):
    """Fourth-order step. ``VState`` in gives ``VState`` out (lossless chaining);
    a ``WKBState`` is rotated in and out around the step."""
    if isinstance(state, VState):
        return scheme4_vstep(state, params)
    return from_vstate(scheme4_vstep(to_vstate(state), params))
