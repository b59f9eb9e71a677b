"""Discrete norms, physical observables and relative error metrics."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .errors import StructuralError, UndefinedMetricError
from .gpe import WaveFunction, wkb_to_psi
from .high_order import VState, from_vstate
from .snapshot import Snapshot
from .spectral import Grid, spectral_derivative
from .wkb import WKBState


def discrete_norms(grid: Grid, u) -> tuple[float, float]:
    """Return ``(dx * sum|u|, sqrt(dx * sum|u|^2))``."""
    u = grid.check(u)
    a = np.abs(u)
    return float(grid.dx * a.sum()), float(np.sqrt(grid.dx * np.sum(a * a)))


class Observables(NamedTuple):
    mass: float
    energy: float
    momentum: float


def observables_psi(w: WaveFunction) -> Observables:
    g, eps, psi = w.grid, w.eps, w.psi
    dpsi = spectral_derivative(g, psi, 1)
    dens = np.abs(psi) ** 2
    mass = g.dx * dens.sum()
    energy = g.dx * np.sum(eps**2 * np.abs(dpsi) ** 2 + dens**2)
    momentum = eps * g.dx * np.sum(np.conj(psi) * dpsi).imag
    return Observables(float(mass), float(energy), float(momentum))


def observables_wkb(state: WKBState, eps: float) -> Observables:
    """Mass, energy and momentum written in phase-amplitude variables.

    Uses the current flux ``J = eps A_x + i A S_x``; the phase must be real.
    """
    g, A = state.grid, state.A
    S = np.asarray(state.S)
    if np.iscomplexobj(S):
        if np.max(np.abs(S.imag)) > 1e-8:
            raise StructuralError("observables need a real phase; pass the real part explicitly")
        S = S.real
    J = eps * spectral_derivative(g, A, 1) + 1j * A * spectral_derivative(g, S, 1)
    dens = np.abs(A) ** 2
    mass = g.dx * dens.sum()
    energy = g.dx * np.sum(np.abs(J) ** 2 + dens**2)
    momentum = g.dx * np.sum(np.conj(A) * J).imag
    return Observables(float(mass), float(energy), float(momentum))


@dataclass
class ErrorMetrics:
    err_rho: float | None = None
    err_psi: float | None = None
    err_sa: float | None = None
    T: float | None = None
    eps: float | None = None
    h: float | None = None
    nx: int | None = None
    scheme: str | None = None

    def as_dict(self) -> dict:
        return asdict(self)


METRICS = ("rho", "psi", "sa")


def _unpack(obj, eps):
    """Return ``(S, A, psi)`` arrays for any supported solution object."""
    if isinstance(obj, WKBState):
        psi = wkb_to_psi(obj, eps).psi if eps else None
        return np.asarray(obj.S), obj.A, psi
    if isinstance(obj, WaveFunction):
        return None, None, obj.psi
    if isinstance(obj, Snapshot):
        if obj.is_psi:
            return None, None, obj.psi
        psi = obj.A * np.exp(1j * np.real(obj.S) / eps) if eps else None
        return np.asarray(obj.S), obj.A, psi
    if isinstance(obj, VState):
        return _unpack(from_vstate(obj), eps)
    raise StructuralError(f"cannot extract fields from {type(obj).__name__}")


def _restrict(u, n):
    if u is None or u.size == n:
        return u
    q, r = divmod(u.size, n)
    if r:
        raise StructuralError(f"grids with {u.size} and {n} points are not nested")
    return u[::q]


def _ratio(num, den, what):
    if den == 0:
        raise UndefinedMetricError(f"{what}: reference has zero norm")
    return float(num / den)


def compute_errors(
    candidate,
    reference,
    which=METRICS,
    eps: float | None = None,
    include_imag_s: bool = False,
    **info,
) -> ErrorMetrics:
    """Relative errors of ``candidate`` against ``reference``.

    * ``rho``: L1 error of the density (|A|^2 or |psi|^2), relative.
    * ``psi``: L2 error of the wave function, relative; phase-amplitude
      solutions are turned into ``A exp(i Re S / eps)``.
    * ``sa``: combined relative L2 error of ``(Re S, A)``; with
      ``include_imag_s`` the imaginary part of the phase is a fourth slot.

    Fields on nested grids are compared at the coarse nodes. Metrics whose
    ingredients are missing (e.g. ``sa`` against a wave-function reference)
    are left as ``None``.
    """
    if eps is None:
        eps = getattr(candidate, "eps", None) or getattr(reference, "eps", None)
    Sc, Ac, pc = _unpack(candidate, eps)
    Sr, Ar, pr = _unpack(reference, eps)
    n = min(x.size for x in (Sc, Ac, pc, Sr, Ar, pr) if x is not None)
    Sc, Ac, pc, Sr, Ar, pr = (_restrict(u, n) for u in (Sc, Ac, pc, Sr, Ar, pr))
    out = ErrorMetrics(eps=eps, nx=n, **info)

    for metric in which:
        if metric not in METRICS:
            raise StructuralError(f"unknown metric {metric!r}; choose from {METRICS}")
    if "rho" in which:
        rc = np.abs(Ac) ** 2 if Ac is not None else np.abs(pc) ** 2
        rr = np.abs(Ar) ** 2 if Ar is not None else np.abs(pr) ** 2
        out.err_rho = _ratio(np.sum(np.abs(rr - rc)), np.sum(np.abs(rr)), "err_rho")
    if "psi" in which and pc is not None and pr is not None:
        out.err_psi = _ratio(np.linalg.norm(pr - pc), np.linalg.norm(pr), "err_psi")
    if "sa" in which and Sc is not None and Sr is not None:
        num = np.sum((np.real(Sr) - np.real(Sc)) ** 2) + np.sum(np.abs(Ar - Ac) ** 2)
        den = np.sum(np.real(Sr) ** 2) + np.sum(np.abs(Ar) ** 2)
        if include_imag_s:
            num += np.sum((np.imag(Sr) - np.imag(Sc)) ** 2)
            den += np.sum(np.imag(Sr) ** 2)
        out.err_sa = float(np.sqrt(_ratio(num, den, "err_sa")))
    return out


def fit_order(steps, errors, floor: float = 0.0) -> tuple[float, float]:
    """Least-squares fit ``log err = p log h + log C``; returns ``(p, C)``.

    Points with error at or below ``floor`` are dropped. Needs two points.
    """
    h = np.asarray(steps, dtype=float)
    e = np.asarray(errors, dtype=float)
    keep = np.isfinite(e) & (e > floor)
    if keep.sum() < 2:
        return float("nan"), float("nan")
    p, c = np.polyfit(np.log(h[keep]), np.log(e[keep]), 1)
    return float(p), float(np.exp(c))
