"""Quadratic Lagrangians, classical paths, actions and the van Vleck factor.

A quadratic Lagrangian is

    L = m/2 xdot^2 + b(t) x xdot + d(t) xdot - c(t)/2 x^2 - e(t) x - f(t)

and its propagator prefactor is fixed by ``f(xi, eta)``, the solution of

    d^2 f / d xi^2 + (bdot(xi) + c(xi)) / m * f = 0,
    f(eta, eta) = 0,  df/dxi (eta, eta) = 1.

Coefficients are given either as numbers, as ascending polynomial
coefficient lists in ``t`` (up to degree 8) or as callables.  Polynomial
input lets us detect exactly when ``bdot + c`` is constant, in which case the
closed forms ``xi - eta``, ``sin`` and ``sinh`` are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import quad
from scipy.interpolate import CubicHermiteSpline

from gravipack.errors import DegenerateIntervalError

Coefficient = Union[float, Sequence[float], Polynomial, Callable[[float], float]]

MAX_POLY_DEGREE = 8
ODE_RTOL = 1e-10
_MAX_REFINEMENTS = 14
# |f| below this fraction of its running maximum counts as a zero
CAUSTIC_RTOL = 1e-12


def _as_coefficient(value: Coefficient) -> Polynomial | Callable[[float], float]:
    if isinstance(value, Polynomial):
        poly = value
    elif callable(value):
        return value
    elif np.ndim(value) == 0:
        poly = Polynomial([float(value)])
    else:
        poly = Polynomial(np.asarray(value, dtype=float))
    poly = poly.trim()
    if poly.degree() > MAX_POLY_DEGREE:
        raise ValueError(f"polynomial coefficients limited to degree {MAX_POLY_DEGREE}")
    return poly


def _is_zero(coef) -> bool:
    return isinstance(coef, Polynomial) and coef.degree() == 0 and coef.coef[0] == 0.0


def _is_constant(coef) -> bool:
    return isinstance(coef, Polynomial) and coef.degree() == 0


def _derivative(coef) -> Polynomial | Callable[[float], float]:
    if isinstance(coef, Polynomial):
        return coef.deriv()

    def deriv(t):
        h = 1e-5 * max(1.0, abs(t))
        return (coef(t + h) - coef(t - h)) / (2.0 * h)

    return deriv


@dataclass(frozen=True)
class QuadraticLagrangian:
    """Coefficient set ``(m, b, c, d, e, f)`` of a quadratic Lagrangian."""

    mass: float
    b: Coefficient = 0.0
    c: Coefficient = 0.0
    d: Coefficient = 0.0
    e: Coefficient = 0.0
    f: Coefficient = 0.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        for name in "bcdef":
            object.__setattr__(self, name, _as_coefficient(getattr(self, name)))

    @classmethod
    def gravity(cls, mass: float, g: float) -> "QuadraticLagrangian":
        """``L = m/2 xdot^2 - m g x``."""
        return cls(mass, e=mass * g)

    @classmethod
    def harmonic(cls, mass: float, omega: float) -> "QuadraticLagrangian":
        return cls(mass, c=mass * omega**2)

    def stiffness(self, t: float) -> float:
        """``(bdot(t) + c(t)) / m``."""
        return (_derivative(self.b)(t) + self.c(t)) / self.mass

    def constant_stiffness(self) -> float | None:
        """Value of ``(bdot + c)/m`` if it is provably constant, else None."""
        if not (isinstance(self.b, Polynomial) and isinstance(self.c, Polynomial)):
            return None
        q = (self.b.deriv() + self.c).trim()
        if q.degree() > 0:
            return None
        return float(q.coef[0]) / self.mass

    def is_linear_potential(self) -> bool:
        """True when only a constant force acts, ``b = c = 0`` and ``d, e`` constant."""
        return (
            _is_zero(self.b)
            and _is_zero(self.c)
            and _is_constant(self.d)
            and _is_constant(self.e)
        )

    def value(self, x, xdot, t):
        return (
            0.5 * self.mass * xdot**2
            + self.b(t) * x * xdot
            + self.d(t) * xdot
            - 0.5 * self.c(t) * x**2
            - self.e(t) * x
            - self.f(t)
        )


@dataclass(frozen=True)
class GravityParams:
    """Field strength ``g`` (potential ``+m g x``) and ``mu = m / hbar``."""

    g: float
    mu: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be positive")


@dataclass(frozen=True)
class ClassicalPath:
    x_start: float
    x_end: float
    t_start: float
    t_end: float
    v0: float
    _position: Callable = field(repr=False, compare=False, default=None)
    _velocity: Callable = field(repr=False, compare=False, default=None)

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    def evaluate(self, t):
        return self._position(t)

    def velocity(self, t):
        return self._velocity(t)


def _check_interval(t_start: float, t_end: float) -> float:
    dt = t_end - t_start
    if not dt > 0:
        raise DegenerateIntervalError(f"need t_end > t_start, got [{t_start}, {t_end}]")
    return dt


def classical_trajectory(x_start, x_end, t_start, t_end, g) -> ClassicalPath:
    """Classical path under the potential ``m g x`` through both endpoints."""
    T = _check_interval(t_start, t_end)
    v0 = (x_end - x_start) / T + 0.5 * g * T

    def position(t):
        s = np.asarray(t, dtype=float) - t_start
        return x_start + v0 * s - 0.5 * g * s**2

    def velocity(t):
        return v0 - g * (np.asarray(t, dtype=float) - t_start)

    return ClassicalPath(x_start, x_end, t_start, t_end, v0, position, velocity)


def classical_action(path: ClassicalPath, mass: float, g: float) -> float:
    """Action of ``m/2 xdot^2 - m g x`` along ``path`` (closed form)."""
    T = path.duration
    xs, xe = path.x_start, path.x_end
    return 0.5 * mass * T * (((xe - xs) / T) ** 2 - g * (xe + xs) - g**2 * T**2 / 12.0)


# -- ODE machinery ---------------------------------------------------------

def _rk4_linear(accel, y0, v0, t0, t1, n):
    """Integrate ``y'' = accel(t, y)`` with n RK4 steps; return nodes, y, y'."""
    h = (t1 - t0) / n
    ts = t0 + h * np.arange(n + 1)
    ys = np.empty(n + 1)
    vs = np.empty(n + 1)
    y, v = y0, v0
    ys[0], vs[0] = y, v
    for i in range(n):
        t = ts[i]
        k1y, k1v = v, accel(t, y)
        k2y, k2v = v + 0.5 * h * k1v, accel(t + 0.5 * h, y + 0.5 * h * k1y)
        k3y, k3v = v + 0.5 * h * k2v, accel(t + 0.5 * h, y + 0.5 * h * k2y)
        k4y, k4v = v + h * k3v, accel(t + h, y + h * k3y)
        y = y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
        v = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        ys[i + 1], vs[i + 1] = y, v
    return ts, ys, vs


def _has_zero(values) -> bool:
    """Sign change or vanishing value after the starting node."""
    scale = np.max(np.abs(values))
    if scale == 0:
        return True
    tail = values[1:]
    if np.any(np.abs(tail) <= CAUSTIC_RTOL * scale):
        return True
    return bool(np.any(np.sign(tail[1:]) != np.sign(tail[:-1])))


def _van_vleck_numeric(lagrangian, eta, xi):
    q = lagrangian.stiffness

    def accel(t, y):
        return -q(t) * y

    n = 32
    _, prev, _ = _rk4_linear(accel, 0.0, 1.0, eta, xi, n)
    for _ in range(_MAX_REFINEMENTS):
        n *= 2
        _, ys, _ = _rk4_linear(accel, 0.0, 1.0, eta, xi, n)
        scale = np.max(np.abs(ys))
        if abs(ys[-1] - prev[-1]) < ODE_RTOL * scale:
            return float(ys[-1]), _has_zero(ys)
        prev = ys
    return float(ys[-1]), _has_zero(ys)


def _van_vleck_analytic(q, eta, xi):
    s = xi - eta
    if q == 0.0:
        return s, False
    if q > 0:
        w = math.sqrt(q)
        # a zero of sin(w s) inside (0, s]
        return math.sin(w * s) / w, abs(w * s) >= math.pi * (1.0 - CAUSTIC_RTOL)
    w = math.sqrt(-q)
    return math.sinh(w * s) / w, False


def van_vleck_f(lagrangian: QuadraticLagrangian, eta: float, xi: float, method: str = "auto"):
    """Return ``(f(xi, eta), caustic)``.

    ``caustic`` is True when ``f`` vanishes somewhere in ``(eta, xi]``.
    ``method`` is ``"auto"`` (closed form whenever ``bdot + c`` is a known
    constant), ``"analytic"`` or ``"numeric"``.
    """
    if xi == eta:
        return 0.0, False
    q = lagrangian.constant_stiffness()
    if method == "numeric" or (method == "auto" and q is None):
        return _van_vleck_numeric(lagrangian, eta, xi)
    if q is None:
        raise ValueError("analytic branch needs a constant bdot + c")
    return _van_vleck_analytic(q, eta, xi)


def solve_van_vleck_f(lagrangian: QuadraticLagrangian, eta: float, xi: float, method: str = "auto") -> float:
    """Solution ``f(xi, eta)`` of the van Vleck equation.

    The raw value is returned even past a caustic; use
    :func:`van_vleck_f` to learn whether a zero was crossed.
    """
    return van_vleck_f(lagrangian, eta, xi, method)[0]


def lagrangian_path(lagrangian: QuadraticLagrangian, x_start, x_end, t_start, t_end):
    """Classical path of a general quadratic Lagrangian and its action.

    The Euler-Lagrange equation ``m xddot + (bdot + c) x = -(e + ddot)`` is
    linear, so the boundary value problem is solved as one particular
    solution plus a multiple of the homogeneous solution ``f(t, t_start)``.
    Returns ``(path, action, f_end, caustic)``.
    """
    T = _check_interval(t_start, t_end)
    m = lagrangian.mass
    if lagrangian.is_linear_potential():
        g = float(lagrangian.e.coef[0]) / m
        path = classical_trajectory(x_start, x_end, t_start, t_end, g)
        action = classical_action(path, m, g)
        action += float(lagrangian.d.coef[0]) * (x_end - x_start)
        action -= _integrate_coefficient(lagrangian.f, t_start, t_end)
        return path, action, T, False

    q = lagrangian.stiffness
    ddot = _derivative(lagrangian.d)
    e = lagrangian.e

    def hom(t, y):
        return -q(t) * y

    def inhom(t, y):
        return -q(t) * y - (e(t) + ddot(t)) / m

    n = 64
    prev = None
    for _ in range(_MAX_REFINEMENTS):
        ts, hy, hv = _rk4_linear(hom, 0.0, 1.0, t_start, t_end, n)
        _, py, pv = _rk4_linear(inhom, x_start, 0.0, t_start, t_end, n)
        f_end = hy[-1]
        alpha = (x_end - py[-1]) / f_end
        xs = py + alpha * hy
        vs = pv + alpha * hv
        lag = np.array([lagrangian.value(x, v, t) for x, v, t in zip(xs, vs, ts)])
        kinetic = 0.5 * m * vs**2
        h = T / n
        weights = np.ones(n + 1)
        weights[1:-1:2] = 4.0
        weights[2:-1:2] = 2.0
        action = h / 3.0 * np.dot(weights, lag)
        scale = max(abs(action), h / 3.0 * np.dot(weights, kinetic))
        if prev is not None and abs(action - prev) < ODE_RTOL * scale:
            break
        prev = action
        n *= 2

    spline = CubicHermiteSpline(ts, xs, vs)
    path = ClassicalPath(
        x_start, x_end, t_start, t_end, float(vs[0]),
        lambda t: spline(t), lambda t: spline(t, 1),
    )
    return path, float(action), float(f_end), _has_zero(hy)


def _integrate_coefficient(coef, t0, t1) -> float:
    if isinstance(coef, Polynomial):
        anti = coef.integ()
        return float(anti(t1) - anti(t0))
    return quad(coef, t0, t1, epsabs=0.0, epsrel=1e-13)[0]
