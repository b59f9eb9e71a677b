"""Solvers for the eikonal equation ``S_t + (S_x)^2 / 2 = 0`` on a periodic grid.

Two families are provided.

* Spectral semi-Lagrangian steps built on the characteristics of the
  Hamiltonian ``H(p) = p^2 / 2``: the characteristic foot ``y`` solves
  ``y = x - h S_x(y)`` and is approximated by a few fixed-point sweeps of
  ``G(y) = x - h S_x(y)``. All off-grid values come from exact trigonometric
  interpolation.
* Splitting through the modified Cole-Hopf variable ``w = exp(iS/2) - 1``:
  the eikonal equation is written as the sum of ``S_t + S_x^2/2 - i S_xx = 0``
  (linear Schrodinger for ``w``) and ``S_t + i S_xx = 0``. Intermediate phases
  are complex; the real part is taken at the end of each step.

The module also carries two test oracles: exact characteristics resampled by
Newton iteration, and the classical Cole-Hopf/heat-equation solution of the
viscous equation at moderate viscosity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .composition import ALPHA
from .errors import LogGuardError, OracleFailure, RefusalError, StepTooLargeError, StructuralError
from .spectral import Grid, apply_multiplier, interpolate_trig, spectral_derivative

VARIANTS = ("semilag", "colehopf_lie", "colehopf_strang", "colehopf_yoshida")


@dataclass(frozen=True)
class EikonalSolverKind:
    """Choice of eikonal sub-solver.

    ``k`` is the number of fixed-point sweeps locating the semi-Lagrangian
    characteristic foot; the resulting global order is ``2k + 2``.
    ``delta_log`` is the safety margin of the Cole-Hopf logarithm guard.
    ``experimental`` unlocks ``k = 0`` and ``k > 2``.
    """

    variant: str = "semilag"
    k: int = 1
    delta_log: float = 0.1
    experimental: bool = False

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise StructuralError(f"unknown eikonal variant {self.variant!r}; choose from {VARIANTS}")
        if self.k not in (1, 2) and not (self.experimental and self.k >= 0):
            raise StructuralError(f"semi-Lagrangian k must be 1 or 2 (got {self.k})")
        if not 0.0 < self.delta_log < 1.0:
            raise StructuralError(f"delta_log must lie in (0, 1), got {self.delta_log}")

    @property
    def order(self) -> int:
        return {
            "semilag": 2 * self.k + 2,
            "colehopf_lie": 1,
            "colehopf_strang": 2,
            "colehopf_yoshida": 4,
        }[self.variant]

    @classmethod
    def parse(cls, text: str, delta_log: float = 0.1) -> "EikonalSolverKind":
        """``semilag1``, ``semilag2``, ``lie``, ``strang`` or ``yoshida``."""
        t = text.strip().lower()
        if t.startswith("semilag"):
            k = int(t[len("semilag"):] or 1)
            return cls("semilag", k, delta_log, experimental=k not in (1, 2))
        aliases = {"lie": "colehopf_lie", "strang": "colehopf_strang", "yoshida": "colehopf_yoshida"}
        return cls(aliases.get(t, t), 1, delta_log)


# --------------------------------------------------------------------------
# semi-Lagrangian
# --------------------------------------------------------------------------


def semilag_step(grid: Grid, S0, h: float, k: int = 1, foot_depth: int | None = None) -> np.ndarray:
    """One semi-Lagrangian step of length ``h`` for real or complex ``S0``.

    The characteristic foot ``y^k`` is built from ``k`` sweeps of
    ``G(y) = x - h S0_x(y)`` started at ``y = x`` (``foot_depth`` overrides
    ``k``, and may be 0), then

        S(h, x) = S0(x - h p) + h p.p / 2,   p = S0_x(y).

    The product ``p.p`` is the unconjugated square, so complex phases are
    handled by the entire extension of the interpolant. The error is
    ``O(h |y - y*|^2)`` because the right-hand side is stationary at the exact
    foot ``y*``; with ``|y^k - y*| = O(h^(k+1))`` the global order is
    ``2k + 2`` (4 for ``k = 1``, 6 for ``k = 2``, 2 for a zero-sweep foot).
    Negative ``h`` is allowed (the flow is reversible while smooth).
    """
    S0 = grid.check(S0, "S0")
    if foot_depth is None:
        foot_depth = k
    if foot_depth < 0:
        raise StructuralError("foot_depth must be non-negative")
    if h == 0:
        return S0.copy()

    p = spectral_derivative(grid, S0, 1)
    curvature = np.max(np.abs(spectral_derivative(grid, S0, 2)))
    if abs(h) * curvature >= 1.0:
        raise StepTooLargeError(
            f"|h| * max|S_xx| = {abs(h) * curvature:.3g} >= 1: characteristic map is not "
            "contracting, use a smaller time step"
        )

    x = grid.x
    p_y = p
    for _ in range(foot_depth):
        y = x - h * p_y
        p_y = interpolate_trig(grid, p, y)
    foot = x - h * p_y
    if np.iscomplexobj(foot) and np.max(np.abs(foot.imag)) >= 1.0:
        raise StepTooLargeError("complex characteristic foot left the strip |Im y| < 1")
    return interpolate_trig(grid, S0, foot) + 0.5 * h * p_y * p_y


def semilag_march(grid: Grid, S0, T: float, n_steps: int, k: int = 1, foot_depth: int | None = None):
    """Concatenate ``n_steps`` equal semi-Lagrangian steps up to time ``T``."""
    S = grid.check(S0, "S0")
    h = T / n_steps
    for _ in range(n_steps):
        S = semilag_step(grid, S, h, k, foot_depth)
    return S


# --------------------------------------------------------------------------
# Cole-Hopf splitting
# --------------------------------------------------------------------------


def colehopf_flow1(grid: Grid, S0, h: float, delta_log: float = 0.1) -> np.ndarray:
    """Exact flow of ``S_t + S_x S_x / 2 - i S_xx = 0`` over time ``h``.

    With ``w = exp(iS/2) - 1`` the equation becomes ``i w_t = -w_xx``, solved
    in Fourier space. The phase increment is recovered as
    ``-2i log(1 + (w(h) - w0) / (w0 + 1))`` with the principal logarithm.
    """
    S0 = grid.check(S0, "S0")
    if h == 0:
        return S0.astype(complex)
    e0 = np.exp(0.5j * S0)
    if np.min(np.abs(e0)) < 1e-12:
        raise LogGuardError("|w0 + 1| < 1e-12: Cole-Hopf variable too close to -1")
    w0 = e0 - 1.0
    wh = apply_multiplier(grid, w0, np.exp(-1j * grid.k**2 * h))
    ratio = (wh - w0) / e0
    worst = np.max(np.abs(ratio))
    if worst >= 1.0 - delta_log:
        raise LogGuardError(
            f"Cole-Hopf log argument deviates by {worst:.3g} from 1 (limit {1 - delta_log:.3g}); "
            "reduce the time step"
        )
    return S0 - 2j * np.log1p(ratio)


def colehopf_flow2(grid: Grid, S0, h: float) -> np.ndarray:
    """Exact flow of ``S_t + i S_xx = 0``: Fourier multiplier ``exp(i k^2 h)``."""
    S0 = grid.check(S0, "S0")
    return apply_multiplier(grid, S0.astype(complex), np.exp(1j * grid.k**2 * h))


def eikonal_lie_step(grid: Grid, S0, h: float, delta_log: float = 0.1) -> np.ndarray:
    S = colehopf_flow2(grid, S0, h)
    return colehopf_flow1(grid, S, h, delta_log).real


def eikonal_strang_step(grid: Grid, S0, h: float, delta_log: float = 0.1) -> np.ndarray:
    S = colehopf_flow1(grid, S0, 0.5 * h, delta_log)
    S = colehopf_flow2(grid, S, h)
    return colehopf_flow1(grid, S, 0.5 * h, delta_log).real


def eikonal_yoshida_step(grid: Grid, S0, h: float, delta_log: float = 0.1) -> np.ndarray:
    """Triple-jump composition of the two Cole-Hopf flows, no real projection.

    Used as a fourth-order eikonal solver for complex phases.
    """
    S = np.asarray(S0).astype(complex)
    for j, a in enumerate(ALPHA):
        if j % 2 == 0:
            S = colehopf_flow1(grid, S, a * h, delta_log)
        else:
            S = colehopf_flow2(grid, S, a * h)
    return S


def solve_eikonal(grid: Grid, S, tau: float, kind: EikonalSolverKind) -> np.ndarray:
    """Advance the phase by ``tau`` with the configured sub-solver."""
    if kind.variant == "semilag":
        return semilag_step(grid, S, tau, kind.k)
    if kind.variant == "colehopf_lie":
        return eikonal_lie_step(grid, S, tau, kind.delta_log)
    if kind.variant == "colehopf_strang":
        return eikonal_strang_step(grid, S, tau, kind.delta_log)
    out = eikonal_yoshida_step(grid, S, tau, kind.delta_log)
    return out.real if np.isrealobj(S) else out


def eikonal_march(grid: Grid, S0, T: float, n_steps: int, kind: EikonalSolverKind) -> np.ndarray:
    S = grid.check(S0, "S0")
    h = T / n_steps
    for _ in range(n_steps):
        S = solve_eikonal(grid, S, h, kind)
    return S


# --------------------------------------------------------------------------
# oracles
# --------------------------------------------------------------------------


def _characteristics_piece(grid: Grid, S, t: float) -> np.ndarray:
    p = spectral_derivative(grid, S, 1)
    dp = spectral_derivative(grid, S, 2)

    fine = np.arange(8 * grid.n_points) * grid.length / (8 * grid.n_points)
    jac = 1.0 + t * interpolate_trig(grid, dp, fine)
    if np.min(jac) <= 0.0:
        raise OracleFailure(
            f"characteristics cross before t={t:g} (min Jacobian {np.min(jac):.3g}): caustic"
        )

    x = grid.x
    x0 = x - t * p
    for _ in range(100):
        g = x0 + t * interpolate_trig(grid, p, x0) - x
        x0 = x0 - g / (1.0 + t * interpolate_trig(grid, dp, x0))
        if np.max(np.abs(g)) < 1e-14:
            break
    else:
        raise OracleFailure("Newton iteration for the characteristic foot did not converge")
    p0 = interpolate_trig(grid, p, x0)
    return interpolate_trig(grid, S, x0) + 0.5 * t * p0**2


def characteristics_oracle(grid: Grid, S0, T: float, substeps: int = 1) -> np.ndarray:
    """Reference eikonal solution from straight characteristics.

    Characteristics ``x = x0 + t S0_x(x0)`` are inverted at the grid nodes by
    Newton's method; the interval ``[0, T]`` is covered in ``substeps`` equal
    pieces, each resampled on the grid. Raises :class:`OracleFailure` if the
    characteristics cross (a caustic forms before ``T``).
    """
    S = grid.check(S0, "S0")
    if np.iscomplexobj(S):
        raise StructuralError("characteristics oracle needs a real phase")
    if substeps < 1:
        raise StructuralError("substeps must be >= 1")
    t = T / substeps
    for _ in range(substeps):
        S = _characteristics_piece(grid, S, t)
    return S


VISCOUS_EPS_MIN = 0.5


def viscous_colehopf_oracle(grid: Grid, S0, T: float, eps: float) -> np.ndarray:
    """Solve ``S_t + S_x^2/2 = eps^2 S_xx`` through the heat equation.

    ``w = exp(-S/(2 eps^2)) - 1`` obeys ``w_t = eps^2 w_xx``. Only usable at
    moderate ``eps``: the exponential overflows or loses all digits otherwise.
    """
    S0 = grid.check(S0, "S0")
    if eps < VISCOUS_EPS_MIN:
        raise RefusalError(
            f"eps={eps:g} < {VISCOUS_EPS_MIN}: exp(-S/(2 eps^2)) overflows or loses precision"
        )
    c = 2.0 * eps**2
    w0 = np.expm1(-S0 / c)
    w = apply_multiplier(grid, w0, np.exp(-(eps**2) * grid.k**2 * T))
    return -c * np.log1p(w)
