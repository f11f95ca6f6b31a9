"""Closed-form Feynman propagators in one dimension.

All square roots of complex numbers are principal, so
``sqrt(1 / i) = exp(-i pi / 4)``.  Only densities are compared downstream,
so no attempt is made to keep the phase continuous across parameter scans.
"""

from __future__ import annotations

import numpy as np

from gravipack.errors import (
    CausticError,
    DegenerateIntervalError,
    DivergentIntegralError,
)
from gravipack.lagrangian import (
    ClassicalPath,
    GravityParams,
    QuadraticLagrangian,
    lagrangian_path,
    van_vleck_f,
)

_SQRT_MINUS_I = np.exp(-0.25j * np.pi)


def complex_gaussian_integral(a, b=0.0):
    """``int exp(a y^2 + b y) dy`` over the real line.

    Valid for ``Re(a) < 0`` and, as the limit of damped integrals, on the
    Fresnel boundary ``Re(a) = 0, Im(a) != 0``.  ``b`` may be an array.

    Examples
    --------
    >>> complex_gaussian_integral(-1.0)
    (1.7724538509055159+0j)
    """
    a = complex(a)
    if a == 0:
        raise DivergentIntegralError("quadratic coefficient is zero")
    if a.real > 0:
        raise DivergentIntegralError(f"Re(a) = {a.real} > 0, integral diverges")
    b = np.asarray(b, dtype=complex)
    out = np.sqrt(np.pi / -a) * np.exp(-(b * b) / (4.0 * a))
    return out[()] if out.ndim == 0 else out


def _check_dt(dt):
    if not dt > 0:
        raise DegenerateIntervalError(f"time interval must be positive, got {dt}")


def _prefactor(mu, dt):
    # sqrt(mu / (2 pi i dt)) on the principal branch
    return np.sqrt(mu / (2.0 * np.pi * dt)) * _SQRT_MINUS_I


def _gravity_phase(x_end, x_start, dt, g, mu):
    x_end = np.asarray(x_end, dtype=float)
    x_start = np.asarray(x_start, dtype=float)
    bracket = ((x_end - x_start) / dt) ** 2
    if g != 0.0:
        bracket = bracket - g * (x_end + x_start) - g * g * dt * dt / 12.0
    return 0.5 * mu * dt * bracket


def free_propagator(dx, dt, mu):
    """Free-particle kernel ``K0(dx, dt; mu)``."""
    _check_dt(dt)
    out = _prefactor(mu, dt) * np.exp(1j * _gravity_phase(dx, 0.0, dt, 0.0, mu))
    return out[()] if np.ndim(out) == 0 else out


def gravity_propagator(x_end, x_start, dt, gp: GravityParams):
    """Kernel for the potential ``m g x``; reduces bit-for-bit to the free one at ``g = 0``."""
    _check_dt(dt)
    if gp.g == 0.0:
        return free_propagator(np.asarray(x_end, dtype=float) - np.asarray(x_start, dtype=float), dt, gp.mu)
    out = _prefactor(gp.mu, dt) * np.exp(1j * _gravity_phase(x_end, x_start, dt, gp.g, gp.mu))
    return out[()] if np.ndim(out) == 0 else out


def propagator_modulus(dt, mu):
    """``|K| = sqrt(mu / (2 pi dt))`` for every quadratic-in-velocity kernel with ``f = dt``."""
    _check_dt(dt)
    return np.sqrt(mu / (2.0 * np.pi * dt))


def quadratic_propagator(lagrangian: QuadraticLagrangian, path: ClassicalPath, hbar: float = 1.0) -> complex:
    """Propagator of a general quadratic Lagrangian between the endpoints of ``path``.

    The classical path is recomputed for ``lagrangian``; only the endpoints
    of ``path`` are used.

    Raises
    ------
    CausticError
        If the van Vleck factor vanishes on ``(t_start, t_end]``.
    """
    _check_dt(path.t_end - path.t_start)
    f_val, caustic = van_vleck_f(lagrangian, path.t_start, path.t_end)
    if caustic or not f_val > 0.0:
        raise CausticError(
            f"van Vleck factor vanishes on ({path.t_start}, {path.t_end}]"
        )
    _, action, _, _ = lagrangian_path(lagrangian, path.x_start, path.x_end, path.t_start, path.t_end)
    m = lagrangian.mass
    pre = np.sqrt(m / (2.0 * np.pi * hbar * f_val)) * _SQRT_MINUS_I
    return complex(pre * np.exp(1j * action / hbar))


def chapman_kolmogorov(x_end, x_start, fraction, dt, gp: GravityParams) -> complex:
    """Compose two gravity kernels through an intermediate time and integrate it out.

    The intermediate time sits at ``t_start + fraction * dt``.  The
    ``y``-integral is purely oscillatory (Fresnel boundary) and is done with
    :func:`complex_gaussian_integral`.
    """
    _check_dt(dt)
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must lie in (0, 1)")
    mu, g = gp.mu, gp.g
    t1 = fraction * dt
    t2 = dt - t1
    _check_dt(t1)
    _check_dt(t2)
    # exponent of K(x_end, t2; y) K(y, t1; x_start) as a quadratic in y
    a = 0.5j * mu * (1.0 / t1 + 1.0 / t2)
    b = -1j * mu * (x_end / t2 + x_start / t1) - 0.5j * mu * g * (t1 + t2)
    c = 1j * (
        0.5 * mu * x_end**2 / t2
        - 0.5 * mu * g * t2 * x_end
        - mu * g * g * t2**3 / 24.0
        + 0.5 * mu * x_start**2 / t1
        - 0.5 * mu * g * t1 * x_start
        - mu * g * g * t1**3 / 24.0
    )
    pre = _prefactor(mu, t1) * _prefactor(mu, t2)
    return complex(pre * np.exp(c) * complex_gaussian_integral(a, b))
