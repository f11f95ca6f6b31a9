"""Limit scans and two-particle comparisons.

These package the quantitative claims about mass dependence as small
reproducible experiments: the density approaches its classical, mass-free
form as ``mu = m / hbar`` grows, the classical density becomes a delta as
the initial width shrinks, and two particles released together end up
with densities that cross at a computable distance from the center.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from gravipack import constants
from gravipack.errors import DegenerateComparisonError
from gravipack.lagrangian import GravityParams
from gravipack.propagator import propagator_modulus
from gravipack.wavepacket import (
    WINDOW_WIDTHS,
    DensityProfile,
    GaussianPacket,
    classical_density,
    crossover_delta,
    density_profile,
    gaussian_density,
    landing_point,
    peak_density,
    spread_width,
)

_MASS_JITTER = 1e-13
_UNITS = {"MeV": constants.MEV_C2_IN_KG, "kg": 1.0}


@dataclass(frozen=True)
class ParticleSpec:
    name: str
    mass: float
    unit: str = "MeV"

    def __post_init__(self):
        if self.unit not in _UNITS:
            raise ValueError(f"unknown mass unit {self.unit!r}; use one of {sorted(_UNITS)}")
        if not self.mass > 0:
            raise ValueError("mass must be positive")

    @property
    def mass_kg(self) -> float:
        return self.mass * _UNITS[self.unit]

    def mu(self, hbar: float = constants.HBAR) -> float:
        return self.mass_kg / hbar


PION_NEUTRAL = ParticleSpec("pi0", constants.PION_NEUTRAL_MEV)
PION_CHARGED = ParticleSpec("pi+-", constants.PION_CHARGED_MEV)
KAON_NEUTRAL = ParticleSpec("K0", constants.KAON_NEUTRAL_MEV)


def _strictly_decreasing(values) -> bool:
    return bool(np.all(np.diff(values) < 0))


def _strictly_increasing(values) -> bool:
    return bool(np.all(np.diff(values) > 0))


@dataclass
class ScanResult:
    """Outcome of a one-parameter scan.

    ``sigma_values`` holds the density width at each point;
    ``sup_deviation`` the largest distance from the classical density
    (hbar scan only).  Other per-point series live in ``extra``.
    """

    parameter: str
    parameter_values: np.ndarray
    sigma_values: np.ndarray
    sup_deviation: np.ndarray | None = None
    monotone: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.parameter_values = np.asarray(self.parameter_values, dtype=float)
        n = len(self.parameter_values)
        series = [self.sigma_values, self.sup_deviation, *self.extra.values()]
        if any(s is not None and len(s) != n for s in series):
            raise ValueError("scan series must share one length")
        diffs = np.diff(self.parameter_values)
        if not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ValueError("scan parameter must be strictly monotone")


def hbar_limit_scan(packet: GaussianPacket, dt: float, g: float, mu_values, u0: float = 0.0,
                    samples: int = 4001) -> ScanResult:
    """Approach the classical limit by increasing ``mu`` at fixed ``u0``.

    For each ``mu`` the packet keeps its position, width and mean velocity
    ``u0`` (its wavenumber becomes ``mu u0``).  The deviation from the
    classical density is the maximum over ``samples`` points spanning ten
    initial widths on either side of the landing point.
    """
    mu_values = np.asarray(mu_values, dtype=float)
    if mu_values.size == 0:
        raise ValueError("empty scan")
    if np.any(mu_values <= 0) or not _strictly_increasing(mu_values):
        raise ValueError("mu values must be positive and strictly increasing")
    center = landing_point(packet.x_prime, u0, dt, g)
    x = np.linspace(center - WINDOW_WIDTHS * packet.sigma, center + WINDOW_WIDTHS * packet.sigma, samples)
    rho_cl = classical_density(x, packet, dt, g, u0)
    sigmas = np.array([spread_width(packet.sigma, mu, dt) for mu in mu_values])
    deviations = np.array([np.max(np.abs(gaussian_density(x, center, s) - rho_cl)) for s in sigmas])
    if dt == 0:
        flags = {"sigma_decreasing": True, "deviation_decreasing": True}
    else:
        flags = {
            "sigma_decreasing": _strictly_decreasing(sigmas),
            "deviation_decreasing": _strictly_decreasing(deviations),
        }
    flags["sigma_above_initial"] = bool(np.all(sigmas >= packet.sigma))
    return ScanResult(
        "mu", mu_values, sigmas, deviations, flags,
        inputs={"x_prime": packet.x_prime, "sigma": packet.sigma, "u0": u0, "dt": dt, "g": g},
    )


def window_mass(center: float, sigma: float, epsilon: float) -> float:
    """Classical probability inside ``[center - epsilon, center + epsilon]`` by quadrature."""
    # beyond 40 widths the integrand underflows; clipping keeps quad from missing a narrow peak
    reach = min(epsilon, 40.0 * sigma)
    left, _ = quad(gaussian_density, center - reach, center, args=(center, sigma),
                   epsabs=0.0, epsrel=1e-13, limit=200)
    right, _ = quad(gaussian_density, center, center + reach, args=(center, sigma),
                    epsabs=0.0, epsrel=1e-13, limit=200)
    return left + right


def sigma_limit_scan(x_prime: float, u0: float, dt: float, g: float, sigma_values,
                     epsilon: float | None = None) -> ScanResult:
    """Shrink the initial width and watch the classical density concentrate.

    ``epsilon`` defaults to the largest width in the scan.  ``extra`` holds
    the window masses and the density's center of mass.
    """
    sigma_values = np.asarray(sigma_values, dtype=float)
    if sigma_values.size == 0:
        raise ValueError("empty scan")
    if np.any(sigma_values <= 0):
        raise ValueError("sigma values must be positive")
    if not _strictly_decreasing(sigma_values):
        raise ValueError("sigma values must be strictly decreasing")
    if epsilon is None:
        epsilon = float(sigma_values.max())
    center = landing_point(x_prime, u0, dt, g)
    masses = np.array([window_mass(center, s, epsilon) for s in sigma_values])
    means = np.array([
        quad(lambda x, s=s: x * gaussian_density(x, center, s),
             center - WINDOW_WIDTHS * s, center + WINDOW_WIDTHS * s, epsabs=0.0, epsrel=1e-13)[0]
        for s in sigma_values
    ])
    return ScanResult(
        "sigma", sigma_values, sigma_values.copy(), None,
        # once the window holds all the mass, quadrature jitters at its own tolerance
        {"window_mass_increasing": bool(np.all(np.diff(masses) >= -_MASS_JITTER))},
        extra={"window_mass": masses, "center_of_mass": means},
        inputs={"x_prime": x_prime, "u0": u0, "dt": dt, "g": g, "epsilon": epsilon},
    )


def propagator_divergence_check(dt: float, mu_values) -> ScanResult:
    """Growth of the kernel modulus with ``mu``: unbounded, ``sqrt(2)`` per doubling."""
    mu_values = np.asarray(mu_values, dtype=float)
    if mu_values.size == 0:
        raise ValueError("empty scan")
    if np.any(mu_values <= 0) or not _strictly_increasing(mu_values):
        raise ValueError("mu values must be positive and strictly increasing")
    moduli = np.array([propagator_modulus(dt, mu) for mu in mu_values])
    return ScanResult(
        "mu", mu_values, np.full(mu_values.shape, np.nan), None,
        {"modulus_increasing": _strictly_increasing(moduli)},
        extra={"modulus": moduli},
        inputs={"dt": dt},
    )


@dataclass
class WEPReport:
    """Densities of two particles released with identical initial conditions.

    ``heavy`` and ``light`` refer to the two inputs after sorting by mass.
    """

    heavy: ParticleSpec
    light: ParticleSpec
    sigma_heavy: float
    sigma_light: float
    delta: float
    rho_max_heavy: float
    rho_max_light: float
    center: float
    x: np.ndarray
    rho_heavy: np.ndarray
    rho_light: np.ndarray
    checks: dict
    inputs: dict

    def density_of(self, name: str) -> np.ndarray:
        if name == self.heavy.name:
            return self.rho_heavy
        if name == self.light.name:
            return self.rho_light
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def wep_violation_report(p1: ParticleSpec, p2: ParticleSpec, sigma: float, x_prime: float, u0: float,
                         dt: float, g: float = constants.STANDARD_GRAVITY, hbar: float = constants.HBAR,
                         samples: int = 2001, half_width: float | None = None) -> WEPReport:
    """Compare the falling densities of two particles.

    The table spans ``half_width`` around the common center (default: four
    widths of the lighter particle's density).
    """
    if p1.mass_kg == p2.mass_kg:
        raise DegenerateComparisonError("particles have equal masses")
    heavy, light = sorted((p1, p2), key=lambda p: p.mass_kg, reverse=True)
    profiles = {}
    for p in (heavy, light):
        mu = p.mu(hbar)
        packet = GaussianPacket.from_velocity(x_prime, sigma, u0, mu)
        profiles[p.name] = density_profile(packet, dt, GravityParams(g, mu), u0)
    ph, pl = profiles[heavy.name], profiles[light.name]
    # both use the same u0, so the centers coincide exactly
    center = ph.center
    delta = crossover_delta(ph, pl)
    if half_width is None:
        half_width = 4.0 * pl.width
    x = np.linspace(center - half_width, center + half_width, samples)
    rho_h = gaussian_density(x, center, ph.width)
    rho_l = gaussian_density(x, center, pl.width)
    peak_h, peak_l = peak_density(ph), peak_density(pl)

    cross = np.array([center - delta, center + delta])
    gap = np.abs(gaussian_density(cross, center, ph.width) - gaussian_density(cross, center, pl.width))
    inside = np.abs(x - center) < delta
    outside = np.abs(x - center) > delta
    # avoid judging points that sit on the crossing within rounding
    margin = 1e-9 * delta
    inside &= np.abs(x - center) < delta - margin
    outside &= np.abs(x - center) > delta + margin
    outside &= (rho_l > 0) | (rho_h > 0)
    checks = {
        "heavier_narrower": ph.width < pl.width,
        "heavier_higher_peak": peak_h > peak_l,
        "crossing_equal": bool(np.all(gap < 1e-10 * max(peak_h, peak_l))),
        "heavier_dominates_inside": bool(np.all(rho_h[inside] > rho_l[inside])),
        "lighter_dominates_outside": bool(np.all(rho_l[outside] > rho_h[outside])),
    }
    inputs = {
        "particle_heavy": f"{heavy.name} {heavy.mass} {heavy.unit}",
        "particle_light": f"{light.name} {light.mass} {light.unit}",
        "sigma": sigma, "x_prime": x_prime, "u0": u0, "dt": dt, "g": g, "hbar": hbar,
    }
    return WEPReport(heavy, light, ph.width, pl.width, delta, peak_h, peak_l, center,
                     x, rho_h, rho_l, checks, inputs)
