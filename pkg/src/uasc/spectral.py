"""Uniform periodic grid and Fourier pseudospectral primitives.

Fields are plain NumPy arrays of length ``grid.n_points``; every public
function takes the grid explicitly and validates the sample count.

Conventions
-----------
Nodes are ``x_j = j L / N`` for ``j = 0..N-1`` (right endpoint excluded) and
the discrete transform is ``numpy.fft.fft`` with the wavenumbers
``k_m = 2 pi m / L`` in FFT ordering. For even ``N`` the Nyquist mode is
zeroed by odd-order derivatives and split symmetrically (as a cosine) when
the interpolant is evaluated off-grid, so real fields stay real.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np

from .errors import NonFiniteMultiplierError, StructuralError

Multiplier = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class Grid:
    """Uniform grid on the periodic interval ``[0, length)``."""

    n_points: int
    length: float = 2.0 * np.pi
    dealias: bool = False

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 4:
            raise StructuralError(f"n_points must be an integer >= 4, got {self.n_points}")
        if not self.length > 0:
            raise StructuralError(f"length must be positive, got {self.length}")

    @property
    def dx(self) -> float:
        return self.length / self.n_points

    @cached_property
    def x(self) -> np.ndarray:
        return np.arange(self.n_points) * self.dx

    @cached_property
    def k(self) -> np.ndarray:
        """Wavenumbers in FFT ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    @cached_property
    def nyquist_index(self) -> int | None:
        return self.n_points // 2 if self.n_points % 2 == 0 else None

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask; all ones unless ``dealias`` is set."""
        if not self.dealias:
            return np.ones(self.n_points)
        m = np.abs(np.fft.fftfreq(self.n_points, d=1.0 / self.n_points))
        return (m < self.n_points / 3.0).astype(float)

    def check(self, f, name: str = "field") -> np.ndarray:
        f = np.asarray(f)
        if f.shape != (self.n_points,):
            raise StructuralError(
                f"{name} has shape {f.shape}, expected ({self.n_points},) for this grid"
            )
        return f

    def coarsen_factor(self, other: "Grid") -> int:
        """Integer ratio ``self.n_points / other.n_points`` for nested grids."""
        if not np.isclose(self.length, other.length):
            raise StructuralError("grids cover different periods")
        q, r = divmod(self.n_points, other.n_points)
        if r or q < 1:
            raise StructuralError(
                f"grid with {other.n_points} points is not nested in one with {self.n_points}"
            )
        return q


def _as_output(result: np.ndarray, keep_real: bool) -> np.ndarray:
    return result.real.copy() if keep_real else result


def spectral_derivative(grid: Grid, f, order: int = 1) -> np.ndarray:
    """Derivative of the trigonometric interpolant of ``f``.

    Real input gives real output. The Nyquist coefficient is dropped for odd
    ``order`` on even grids.
    """
    f = grid.check(f)
    if int(order) != order or order < 0:
        raise StructuralError(f"derivative order must be a non-negative integer, got {order}")
    if order == 0:
        return f.copy()
    symbol = (1j * grid.k) ** order
    if order % 2 == 1 and grid.nyquist_index is not None:
        symbol[grid.nyquist_index] = 0.0
    symbol = symbol * grid.dealias_mask
    out = np.fft.ifft(symbol * np.fft.fft(f))
    return _as_output(out, np.isrealobj(f))


def laplacian(grid: Grid, f) -> np.ndarray:
    return spectral_derivative(grid, f, 2)


def apply_multiplier(grid: Grid, f, m: Multiplier) -> np.ndarray:
    """Multiply each Fourier coefficient ``f_hat(k)`` by ``m(k)``.

    ``m`` is either an array over ``grid.k`` (FFT ordering) or a callable
    evaluated on ``grid.k``. The output stays real when both ``f`` and the
    symbol are real.
    """
    f = grid.check(f)
    sym = np.asarray(m(grid.k) if callable(m) else m)
    if sym.shape == ():
        sym = np.full(grid.n_points, sym)
    grid.check(sym, "multiplier")
    bad = ~np.isfinite(sym)
    if bad.any():
        kbad = grid.k[np.argmax(bad)]
        raise NonFiniteMultiplierError(f"multiplier is not finite at wavenumber k={kbad:g}")
    if grid.dealias:
        sym = sym * grid.dealias_mask
    out = np.fft.ifft(sym * np.fft.fft(f))
    return _as_output(out, np.isrealobj(f) and np.isrealobj(sym))


def _powers(z: np.ndarray, count: int) -> np.ndarray:
    """Columns ``z**1 .. z**count`` by running products."""
    if count == 0:
        return np.empty((z.size, 0), dtype=complex)
    return np.cumprod(np.broadcast_to(z[:, None], (z.size, count)), axis=1)


def interpolate_trig(grid: Grid, f, points) -> np.ndarray:
    """Evaluate the trigonometric interpolant of ``f`` at arbitrary points.

    Direct summation of the Fourier series, O(N) work per point. Complex
    points are accepted: the interpolant is a trigonometric polynomial and
    therefore entire, which the complex-phase solvers rely on. Real parts of
    the points are reduced modulo the period first.
    """
    f = grid.check(f)
    pts = np.asarray(points)
    shape = pts.shape
    pts = pts.ravel()
    n = grid.n_points
    coef = np.fft.fft(f) / n

    if np.iscomplexobj(pts):
        reduced = np.mod(pts.real, grid.length) + 1j * pts.imag
    else:
        reduced = np.mod(pts, grid.length)
    theta = (2.0 * np.pi / grid.length) * reduced
    z = np.exp(1j * theta)
    zi = np.exp(-1j * theta)

    half = n // 2
    n_side = half - 1 if n % 2 == 0 else half
    zp = _powers(z, half)
    zn = _powers(zi, half)
    result = coef[0] + zp[:, :n_side] @ coef[1 : n_side + 1] + zn[:, :n_side] @ coef[-1 : -n_side - 1 : -1]
    if n % 2 == 0:
        result = result + coef[half] * 0.5 * (zp[:, half - 1] + zn[:, half - 1])

    keep_real = np.isrealobj(f) and np.isrealobj(points)
    return _as_output(result, keep_real).reshape(shape)


def subsample(f, factor: int) -> np.ndarray:
    """Restrict a field to a nested coarse grid (exact at the coarse nodes)."""
    f = np.asarray(f)
    if factor < 1 or f.size % factor:
        raise StructuralError(f"cannot subsample {f.size} samples by {factor}")
    return f[::factor].copy()
