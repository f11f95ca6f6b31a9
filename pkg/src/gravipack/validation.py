"""Self-check suite run by ``gravipack validate``.

Each check compares a closed form against an independent route (grid
solver, quadrature, analytic identity) and reports the measured
discrepancy next to its tolerance.  Random draws use a fixed seed.
"""

from __future__ import annotations

import inspect
import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from gravipack import analysis, constants
from gravipack.errors import CausticError
from gravipack.frame import FrameTrajectory, Grid, to_accelerated_frame
from gravipack.lagrangian import (
    GravityParams,
    QuadraticLagrangian,
    classical_trajectory,
    solve_van_vleck_f,
)
from gravipack.oracle import EvolutionConfig, compare_densities, split_step_evolve
from gravipack.propagator import chapman_kolmogorov, gravity_propagator, quadratic_propagator
from gravipack.wavepacket import (
    DensityProfile,
    GaussianPacket,
    classical_density,
    crossover_delta,
    density_profile,
    evolve_packet,
    gaussian_density,
    probability_density,
)

SEED = 20240531


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: measured={self.measured:.3e} tolerance={self.tolerance:.1e}"
        return f"{text} ({self.detail})" if self.detail else text

    def as_dict(self):
        return asdict(self)


def _max(values):
    return float(max(values)) if len(values) else 0.0


def random_natural_config(rng):
    """One desk-scale configuration in natural units."""
    return dict(
        mu=rng.uniform(0.5, 50.0),
        sigma=rng.uniform(0.2, 2.0),
        dt=rng.uniform(0.1, 5.0),
        g=rng.uniform(0.0, 5.0),
        k0=rng.uniform(-5.0, 5.0),
        x_prime=rng.uniform(-1.0, 1.0),
    )


def oracle_deviation(cfg) -> float:
    packet = GaussianPacket(cfg["x_prime"], cfg["sigma"], cfg["k0"])
    gp = GravityParams(cfg["g"], cfg["mu"])
    evo = EvolutionConfig.for_packet(packet, cfg["mu"], cfg["g"], cfg["dt"])
    out = split_step_evolve(packet.sample(evo.grid), evo)
    return compare_densities(out, lambda x: probability_density(x, packet, cfg["dt"], gp))


def check_oracle(n=50) -> Check:
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    worst = _max([oracle_deviation(random_natural_config(rng)) for _ in range(n)])
    elapsed = time.perf_counter() - start
    return Check("oracle_equivalence", worst < 1e-6 and elapsed < 60.0, worst, 1e-6,
                 f"{n} configs in {elapsed:.1f} s")


def sep_deviation(cfg, n=1024) -> float:
    """Free evolution viewed from the falling frame against direct gravity evolution."""
    packet = GaussianPacket(cfg["x_prime"], cfg["sigma"], cfg["k0"])
    mu, g, dt = cfg["mu"], cfg["g"], cfg["dt"]
    free = evolve_packet(packet, dt, GravityParams(0.0, mu))
    falling = evolve_packet(packet, dt, GravityParams(g, mu))
    prof = density_profile(packet, dt, GravityParams(0.0, mu))
    grid = Grid(prof.center - 8 * prof.width, prof.center + 8 * prof.width, n)
    tilde = to_accelerated_frame(free.sample(grid), FrameTrajectory.constant_acceleration(g), mu)
    return float(np.max(np.abs(tilde.density() - falling.density(tilde.x))))


def check_sep(n=10) -> Check:
    rng = np.random.default_rng(SEED + 1)
    worst = _max([sep_deviation(random_natural_config(rng)) for _ in range(n)])
    return Check("sep_equivalence", worst < 1e-8, worst, 1e-8, f"{n} configs")


def check_chapman_kolmogorov(n=100) -> Check:
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(n):
        gp = GravityParams(rng.uniform(0.0, 9.8), rng.uniform(0.5, 5.0))
        dt = rng.uniform(0.5, 5.0)
        xe, xs = rng.uniform(-3.0, 3.0, 2)
        frac = rng.uniform(0.1, 0.9)
        direct = gravity_propagator(xe, xs, dt, gp)
        composed = chapman_kolmogorov(xe, xs, frac, dt, gp)
        worst = max(worst, abs(composed - direct) / abs(direct))
    return Check("chapman_kolmogorov", worst < 1e-10, worst, 1e-10, f"{n} splits")


def check_normalization(n=100) -> Check:
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for _ in range(n):
        cfg = random_natural_config(rng)
        packet = GaussianPacket(cfg["x_prime"], cfg["sigma"], cfg["k0"])
        gp = GravityParams(cfg["g"], cfg["mu"])
        prof = density_profile(packet, cfg["dt"], gp)
        x = np.linspace(prof.center - 10 * prof.width, prof.center + 10 * prof.width, 4001)
        total = np.trapezoid(probability_density(x, packet, cfg["dt"], gp), x)
        worst = max(worst, abs(total - 1.0))
    return Check("normalization", worst < 1e-9, worst, 1e-9, f"{n} configs")


def check_width() -> Check:
    rng = np.random.default_rng(SEED + 4)
    ok = True
    worst = 0.0
    for _ in range(50):
        cfg = random_natural_config(rng)
        packet = GaussianPacket(cfg["x_prime"], cfg["sigma"], cfg["k0"])
        w0 = density_profile(packet, cfg["dt"], GravityParams(0.0, cfg["mu"])).width
        wg = density_profile(packet, cfg["dt"], GravityParams(cfg["g"], cfg["mu"])).width
        ok &= w0 == wg
        ok &= density_profile(packet, 0.0, GravityParams(cfg["g"], cfg["mu"])).width == packet.sigma
        hbar_over_m = 1.0 / cfg["mu"]
        textbook = cfg["sigma"] * math.sqrt(1.0 + hbar_over_m**2 * cfg["dt"] ** 2 / cfg["sigma"] ** 4)
        worst = max(worst, abs(w0 - textbook) / textbook)
        dts = np.linspace(0.1, 5.0, 20)
        ws = [density_profile(packet, d, GravityParams(0.0, cfg["mu"])).width for d in dts]
        ok &= bool(np.all(np.diff(ws) > 0))
        mus = np.linspace(0.5, 50.0, 20)
        ws = [density_profile(GaussianPacket(packet.x_prime, packet.sigma), cfg["dt"], GravityParams(0.0, m)).width
              for m in mus]
        ok &= bool(np.all(np.diff(ws) < 0))
    return Check("width_properties", ok and worst < 1e-12, worst, 1e-12)


def check_crossover(n=100) -> Check:
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    ordered = True
    for _ in range(n):
        s1, s2 = np.sort(rng.uniform(0.1, 10.0, 2))
        c = rng.uniform(-5.0, 5.0)
        delta = crossover_delta(DensityProfile(c, s1), DensityProfile(c, s2))
        for x in (c - delta, c + delta):
            r1, r2 = gaussian_density(x, c, s1), gaussian_density(x, c, s2)
            worst = max(worst, abs(r1 - r2) / r2)
        x = np.linspace(c - 5 * s2, c + 5 * s2, 1001)
        r1, r2 = gaussian_density(x, c, s1), gaussian_density(x, c, s2)
        d = np.abs(x - c)
        ordered &= bool(np.all(r1[d < delta * (1 - 1e-9)] > r2[d < delta * (1 - 1e-9)]))
        ordered &= bool(np.all(r1[d > delta * (1 + 1e-9)] < r2[d > delta * (1 + 1e-9)]))
    return Check("crossover", ordered and worst < 1e-10, worst, 1e-10, f"{n} pairs")


def check_classical_limits() -> Check:
    packet = GaussianPacket(0.0, 1.0)
    mus = 4.0 * 2.0 ** np.arange(7)
    scan = analysis.hbar_limit_scan(packet, 1.0, 9.8, mus, u0=0.5)
    sig = analysis.sigma_limit_scan(0.0, 0.5, 1.0, 9.8, 2.0 ** -np.arange(7))
    masses = sig.extra["window_mass"]
    ok = all(scan.monotone.values()) and all(sig.monotone.values())
    ok &= bool(np.all(np.diff(masses) > -1e-13)) and masses[-1] > 1.0 - 1e-12
    ok &= "mu" not in inspect.signature(classical_density).parameters
    return Check("classical_limits", ok, float(scan.sup_deviation[-1]), 0.0,
                 "monotone approach, window mass -> 1")


def check_figures(dt=0.02) -> Check:
    ok = True
    worst = 0.0
    for other in (analysis.PION_CHARGED, analysis.KAON_NEUTRAL):
        u0 = 0.5 * constants.STANDARD_GRAVITY * dt
        rep = analysis.wep_violation_report(analysis.PION_NEUTRAL, other, 1e2 * constants.ANGSTROM,
                                            0.0, u0, dt)
        ok &= rep.passed and rep.heavy.name == other.name
        i0 = int(np.argmin(np.abs(rep.x)))
        ok &= rep.rho_heavy[i0] > rep.rho_light[i0]
        ratio = rep.rho_max_heavy / rep.rho_max_light
        worst = max(worst, abs(ratio - rep.sigma_light / rep.sigma_heavy) / ratio)
    return Check("figure_structure", ok and worst < 1e-9, worst, 1e-9)


def check_modulus_law() -> Check:
    mus = 2.0 ** np.arange(20)
    worst = 0.0
    for dt in (0.1, 1.0, 7.0):
        scan = analysis.propagator_divergence_check(dt, mus)
        mod = scan.extra["modulus"]
        for mu, m in zip(mus, mod):
            kernel = abs(gravity_propagator(1.3, -0.4, dt, GravityParams(3.0, mu)))
            worst = max(worst, abs(kernel - math.sqrt(mu / (2 * math.pi * dt))) / kernel)
        worst = max(worst, float(np.max(np.abs(mod[1:] / mod[:-1] - math.sqrt(2.0)))))
    return Check("modulus_law", worst < 1e-12, worst, 1e-12)


def check_van_vleck(n=50) -> Check:
    rng = np.random.default_rng(SEED + 6)
    worst = 0.0
    for _ in range(n):
        m = rng.uniform(0.5, 3.0)
        q = rng.uniform(-4.0, 4.0)
        eta = rng.uniform(-1.0, 1.0)
        span = rng.uniform(0.1, 2.5)
        if q > 0:
            span = min(span, 0.95 * math.pi / math.sqrt(q))
        lag = QuadraticLagrangian(m, c=m * q)
        num = solve_van_vleck_f(lag, eta, eta + span, method="numeric")
        ana = solve_van_vleck_f(lag, eta, eta + span, method="analytic")
        worst = max(worst, abs(num - ana) / abs(ana))
    omega = 2.0
    caustic = False
    try:
        path = classical_trajectory(0.1, 0.3, 0.0, math.pi / omega, 0.0)
        quadratic_propagator(QuadraticLagrangian.harmonic(1.0, omega), path)
    except CausticError:
        caustic = True
    return Check("van_vleck", caustic and worst < 1e-9, worst, 1e-9,
                 "caustic detected" if caustic else "caustic missed")


ALL_CHECKS = (
    check_oracle,
    check_sep,
    check_chapman_kolmogorov,
    check_normalization,
    check_width,
    check_crossover,
    check_classical_limits,
    check_figures,
    check_modulus_law,
    check_van_vleck,
)


def run_all():
    return [check() for check in ALL_CHECKS]
