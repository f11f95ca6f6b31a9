"""Uniformly accelerated frames and the matching phase redefinition.

Going to coordinates ``x~ = x - xi(t)`` maps a solution of the free
Schroedinger equation onto a solution with the extra potential
``m x~ xiddot(t)``, provided the wavefunction picks up the phase

    psi~(x~, t) = exp(-i mu (x~ xidot(t) + 1/2 int_tbar^t xidot^2)) psi(x~ + xi(t), t).

The coordinate shift is done by relabeling the grid, never by interpolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid of ``n`` points on ``[x_min, x_max)``."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        if not _is_power_of_two(self.n):
            raise ValueError(f"grid size must be a power of two, got {self.n}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    def shifted(self, offset: float) -> "Grid":
        return Grid(self.x_min + offset, self.x_max + offset, self.n)


@dataclass(frozen=True)
class SampledWavefunction:
    grid: Grid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n,):
            raise ValueError("values must have one entry per grid point")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, grid: Grid, func, time: float = 0.0) -> "SampledWavefunction":
        return cls(grid, func(grid.x), time)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm(self) -> float:
        # trapezoid on a periodic grid is the plain sum
        return float(np.sqrt(np.sum(self.density()) * self.grid.dx))


@dataclass(frozen=True)
class FrameTrajectory:
    """Frame origin ``xi(t)``, its velocity, and ``int_t1^t2 xidot^2``."""

    xi: Callable[[float], float]
    xi_dot: Callable[[float], float]
    kinetic_phase_integral: Callable[[float, float], float]
    t_bar: float = 0.0

    @classmethod
    def constant_acceleration(cls, g: float, t_bar: float = 0.0) -> "FrameTrajectory":
        """``xi(t) = g t^2 / 2``."""
        return cls(
            xi=lambda t: 0.5 * g * t * t,
            xi_dot=lambda t: g * t,
            kinetic_phase_integral=lambda t1, t2: g * g * (t2**3 - t1**3) / 3.0,
            t_bar=t_bar,
        )

    @classmethod
    def polynomial(cls, coefficients, t_bar: float = 0.0) -> "FrameTrajectory":
        """``xi(t) = sum c_k t^k`` with ascending coefficients."""
        xi = Polynomial(np.asarray(coefficients, dtype=float))
        xi_dot = xi.deriv()
        anti = (xi_dot * xi_dot).integ()
        return cls(
            xi=lambda t: float(xi(t)),
            xi_dot=lambda t: float(xi_dot(t)),
            kinetic_phase_integral=lambda t1, t2: float(anti(t2) - anti(t1)),
            t_bar=t_bar,
        )

    def phase_integral(self, t: float) -> float:
        return self.kinetic_phase_integral(self.t_bar, t)


def _frame_phase(x_tilde, frame: FrameTrajectory, t: float, mu: float):
    return mu * (x_tilde * frame.xi_dot(t) + 0.5 * frame.phase_integral(t))


def to_accelerated_frame(psi: SampledWavefunction, frame: FrameTrajectory, mu: float) -> SampledWavefunction:
    """Express ``psi`` in the frame whose origin follows ``frame.xi``.

    The returned grid is the input grid shifted by ``-xi(t)``; values are
    only multiplied by a unimodular phase.
    """
    t = psi.time
    grid = psi.grid.shifted(-frame.xi(t))
    phase = _frame_phase(grid.x, frame, t, mu)
    return SampledWavefunction(grid, np.exp(-1j * phase) * psi.values, t)


def from_accelerated_frame(psi_tilde: SampledWavefunction, frame: FrameTrajectory, mu: float) -> SampledWavefunction:
    """Inverse of :func:`to_accelerated_frame`."""
    t = psi_tilde.time
    phase = _frame_phase(psi_tilde.grid.x, frame, t, mu)
    grid = psi_tilde.grid.shifted(frame.xi(t))
    return SampledWavefunction(grid, np.exp(1j * phase) * psi_tilde.values, t)
