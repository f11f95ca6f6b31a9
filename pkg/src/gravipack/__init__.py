"""Closed-form propagators and Gaussian free fall in a uniform gravity field.

The library evaluates Feynman propagators for quadratic Lagrangians, evolves
Gaussian wave packets analytically under uniform gravity, measures how the
resulting density depends on mass, and checks all of it against a split-step
Schroedinger solver.
"""

from gravipack.errors import (
    BoundaryLeakError,
    CausticError,
    DegenerateComparisonError,
    DegenerateIntervalError,
    DivergentIntegralError,
    GravipackError,
    InvalidComparisonError,
)
from gravipack.lagrangian import (
    ClassicalPath,
    GravityParams,
    QuadraticLagrangian,
    classical_action,
    classical_trajectory,
    solve_van_vleck_f,
)
from gravipack.propagator import (
    chapman_kolmogorov,
    complex_gaussian_integral,
    free_propagator,
    gravity_propagator,
    quadratic_propagator,
)
from gravipack.frame import (
    FrameTrajectory,
    Grid,
    SampledWavefunction,
    from_accelerated_frame,
    to_accelerated_frame,
)
from gravipack.wavepacket import (
    ComplexGaussianState,
    DensityProfile,
    GaussianPacket,
    classical_density,
    crossover_delta,
    density_profile,
    evolve_packet,
    probability_density,
)
from gravipack.oracle import EvolutionConfig, compare_densities, split_step_evolve
from gravipack.analysis import (
    ParticleSpec,
    ScanResult,
    WEPReport,
    hbar_limit_scan,
    propagator_divergence_check,
    sigma_limit_scan,
    wep_violation_report,
)

__version__ = "0.1.0"
