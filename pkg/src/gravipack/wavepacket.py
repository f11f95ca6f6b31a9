"""Analytic free fall of a Gaussian wave packet.

The initial state is

    psi(y) = exp(-(y - x')^2 / (2 sigma^2) + i k0 y) / (pi^(1/4) sqrt(sigma))

and propagating it with the uniform-gravity kernel keeps it Gaussian.  The
evolved wavefunction is stored as complex quadratic-exponent parameters
instead of separate real and imaginary exponent expressions; the density
formulas below are checked against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gravipack.errors import (
    DegenerateComparisonError,
    DegenerateIntervalError,
    InvalidComparisonError,
)
from gravipack.frame import Grid, SampledWavefunction
from gravipack.lagrangian import GravityParams
from gravipack.propagator import complex_gaussian_integral

_SQRT_PI = math.sqrt(math.pi)
U0_RTOL = 1e-12
#: densities are tabulated out to this many widths
WINDOW_WIDTHS = 10.0


@dataclass(frozen=True)
class GaussianPacket:
    """Minimum-uncertainty packet centred at ``x_prime`` with mean wavenumber ``k0``."""

    x_prime: float
    sigma: float
    k0: float = 0.0
    time: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    @classmethod
    def from_velocity(cls, x_prime, sigma, u0, mu, time=0.0) -> "GaussianPacket":
        return cls(x_prime, sigma, mu * u0, time)

    def average_velocity(self, mu: float) -> float:
        """``u0 = hbar k0 / m = k0 / mu``."""
        return self.k0 / mu

    def wavefunction(self, y):
        y = np.asarray(y, dtype=float)
        return np.exp(
            -((y - self.x_prime) ** 2) / (2.0 * self.sigma**2) + 1j * self.k0 * y
        ) / (math.pi**0.25 * math.sqrt(self.sigma))

    def sample(self, grid: Grid) -> SampledWavefunction:
        return SampledWavefunction(grid, self.wavefunction(grid.x), self.time)


@dataclass(frozen=True)
class ComplexGaussianState:
    """``psi(x) = prefactor * exp(a s^2 + b s + c)`` with ``s = x - center``.

    Expanding about the classical landing point keeps the real part of the
    exponent free of cancellation; :attr:`coefficients` gives the
    unshifted ``(A, B, C)`` of ``exp(A x^2 + B x + C)``.
    """

    prefactor: complex
    a: complex
    b: complex
    c: complex
    time: float
    center: float = 0.0

    def __post_init__(self):
        if not self.a.real < 0:
            raise ValueError("state is not normalizable (Re a >= 0)")

    @property
    def coefficients(self):
        x0 = self.center
        A = self.a
        B = self.b - 2.0 * self.a * x0
        C = self.c - self.b * x0 + self.a * x0 * x0
        return A, B, C

    def __call__(self, x):
        s = np.asarray(x, dtype=float) - self.center
        return self.prefactor * np.exp(self.a * s * s + self.b * s + self.c)

    def density(self, x):
        s = np.asarray(x, dtype=float) - self.center
        expo = 2.0 * (self.a.real * s * s + self.b.real * s + self.c.real)
        return abs(self.prefactor) ** 2 * np.exp(expo)

    def norm(self) -> float:
        """``int |psi|^2`` from the parameters alone."""
        ar, br, cr = 2.0 * self.a.real, 2.0 * self.b.real, 2.0 * self.c.real
        return abs(self.prefactor) ** 2 * math.sqrt(math.pi / -ar) * math.exp(cr - br * br / (4.0 * ar))

    def sample(self, grid: Grid) -> SampledWavefunction:
        return SampledWavefunction(grid, self(grid.x), self.time)


@dataclass(frozen=True)
class DensityProfile:
    center: float
    width: float


def _check_dt(dt):
    if not dt > 0:
        raise DegenerateIntervalError(f"time interval must be positive, got {dt}")


def _resolve_u0(packet: GaussianPacket, mu: float, u0):
    expected = packet.average_velocity(mu)
    if u0 is None:
        return expected
    if abs(u0 - expected) > U0_RTOL * max(abs(u0), abs(expected)):
        raise ValueError(f"u0={u0} inconsistent with k0/mu={expected}")
    return u0


def landing_point(x_prime, u0, dt, g):
    """Classical position ``x' + u0 dt - g dt^2 / 2``."""
    return x_prime + u0 * dt - 0.5 * g * dt * dt


def spread_width(sigma, mu, dt):
    """Width of the evolved density; the same with or without gravity."""
    return math.hypot(dt / (mu * sigma), sigma)


def evolve_packet(packet: GaussianPacket, dt: float, gp: GravityParams) -> ComplexGaussianState:
    """Propagate ``packet`` for ``dt`` with the uniform-gravity kernel.

    The integral over the initial coordinate is carried out in closed form.
    With ``y = x' + eta`` and ``x = X + s`` (``X`` the landing point) the
    integrand is ``exp(A eta^2 + beta(s) eta + const(s))`` where
    ``A = -1/(2 sigma^2) + i mu/(2 dt)`` and ``beta`` is linear in ``s``.
    """
    _check_dt(dt)
    mu, g = gp.mu, gp.g
    sigma, xp, k0 = packet.sigma, packet.x_prime, packet.k0
    u0 = packet.average_velocity(mu)
    X = landing_point(xp, u0, dt, g)
    D = X - xp

    a_y = complex(-0.5 / sigma**2, 0.5 * mu / dt)
    beta0 = 1j * (k0 - mu * D / dt - 0.5 * mu * g * dt)
    beta1 = -1j * mu / dt
    # K phase: mu/(2dt) (D + s - eta)^2 - mu g dt (X + s + x' + eta)/2 - mu g^2 dt^3/24
    # plus the i k0 x' piece of the initial state
    a = 0.5j * mu / dt - beta1 * beta1 / (4.0 * a_y)
    b = 1j * (mu * D / dt - 0.5 * mu * g * dt) - beta0 * beta1 / (2.0 * a_y)
    c = 1j * (
        k0 * xp
        + 0.5 * mu * D * D / dt
        - 0.5 * mu * g * dt * (X + xp)
        - mu * g * g * dt**3 / 24.0
    ) - beta0 * beta0 / (4.0 * a_y)

    kernel_pre = np.sqrt(mu / (2.0 * np.pi * dt)) * np.exp(-0.25j * np.pi)
    prefactor = kernel_pre * complex_gaussian_integral(a_y, 0.0) / (math.pi**0.25 * math.sqrt(sigma))
    return ComplexGaussianState(complex(prefactor), complex(a), complex(b), complex(c), packet.time + dt, X)


def density_profile(packet: GaussianPacket, dt: float, gp: GravityParams, u0=None) -> DensityProfile:
    """Center and width of the evolved density; the width ignores ``g``."""
    if dt < 0:
        raise DegenerateIntervalError(f"time interval must be non-negative, got {dt}")
    u0 = _resolve_u0(packet, gp.mu, u0)
    return DensityProfile(
        landing_point(packet.x_prime, u0, dt, gp.g),
        spread_width(packet.sigma, gp.mu, dt),
    )


def gaussian_density(x, center, width):
    """Normalized ``exp(-(x - center)^2 / width^2) / (sqrt(pi) width)``."""
    z = (np.asarray(x, dtype=float) - center) / width
    return np.exp(-z * z) / (_SQRT_PI * width)


def probability_density(x, packet: GaussianPacket, dt: float, gp: GravityParams, u0=None):
    """Closed-form density of the falling packet at ``x``."""
    _check_dt(dt)
    profile = density_profile(packet, dt, gp, u0)
    return gaussian_density(x, profile.center, profile.width)


def peak_density(profile: DensityProfile) -> float:
    return 1.0 / (_SQRT_PI * profile.width)


def crossover_delta(profile1: DensityProfile, profile2: DensityProfile) -> float:
    """Distance from the common center at which two densities cross.

    Inside the crossover the narrower (heavier) density is larger, outside it
    the wider one is.  The order of the arguments does not matter.
    """
    scale = max(abs(profile1.center), abs(profile2.center), profile1.width, profile2.width)
    if abs(profile1.center - profile2.center) > 1e-12 * scale:
        raise InvalidComparisonError("profiles have different centers")
    s1, s2 = sorted((profile1.width, profile2.width))
    if s1 == s2:
        raise DegenerateComparisonError("equal widths never cross")
    d = s2 - s1
    # ln(s2/s1) / (s2^2 - s1^2) in a form that stays accurate as s2 -> s1
    ratio = math.log1p(d / s1) / (d * (s1 + s2))
    return s1 * s2 * math.sqrt(ratio)


def classical_density(x, packet: GaussianPacket, dt: float, g: float, u0: float):
    """Mass-independent limit of the density: the initial width, moved to the landing point."""
    if dt < 0:
        raise DegenerateIntervalError(f"time interval must be non-negative, got {dt}")
    return gaussian_density(x, landing_point(packet.x_prime, u0, dt, g), packet.sigma)
