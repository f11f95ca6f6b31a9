import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gravipack import (
    FrameTrajectory,
    GaussianPacket,
    Grid,
    GravityParams,
    SampledWavefunction,
    evolve_packet,
    from_accelerated_frame,
    to_accelerated_frame,
)


@pytest.fixture
def packet_state():
    grid = Grid(-16.0, 16.0, 1024)
    return GaussianPacket(0.4, 1.1, 0.8).sample(grid)


class TestGrid:
    def test_spacing(self):
        grid = Grid(-1.0, 1.0, 8)
        assert grid.dx == 0.25
        np.testing.assert_array_equal(grid.x, [-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75])

    @pytest.mark.parametrize("n", [0, 3, 100])
    def test_power_of_two(self, n):
        with pytest.raises(ValueError):
            Grid(0.0, 1.0, n)

    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            Grid(1.0, 1.0, 8)

    def test_shape_check(self):
        with pytest.raises(ValueError):
            SampledWavefunction(Grid(0.0, 1.0, 8), np.zeros(7))


def test_identity_frame(packet_state):
    frame = FrameTrajectory.polynomial([0.0])
    out = to_accelerated_frame(packet_state, frame, 3.0)
    np.testing.assert_array_equal(out.values, packet_state.values)
    assert out.grid == packet_state.grid


@settings(max_examples=40, deadline=None)
@given(st.floats(-5, 5), st.floats(0, 3), st.floats(0.1, 20), st.floats(-2, 2))
def test_norm_preserved(g, t, mu, t_bar):
    grid = Grid(-16.0, 16.0, 512)
    psi = GaussianPacket(0.2, 1.0, 0.5, time=t).sample(grid)
    out = to_accelerated_frame(psi, FrameTrajectory.constant_acceleration(g, t_bar), mu)
    assert abs(out.norm() - psi.norm()) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(-5, 5), st.floats(0, 3), st.floats(0.1, 20))
def test_round_trip(g, t, mu):
    grid = Grid(-16.0, 16.0, 512)
    psi = GaussianPacket(0.2, 1.0, 0.5, time=t).sample(grid)
    frame = FrameTrajectory.constant_acceleration(g)
    back = from_accelerated_frame(to_accelerated_frame(psi, frame, mu), frame, mu)
    assert np.max(np.abs(back.values - psi.values)) < 1e-12
    assert back.grid.x_min == pytest.approx(grid.x_min, abs=1e-12)


def test_density_is_translated():
    grid = Grid(-16.0, 16.0, 1024)
    psi = GaussianPacket(0.0, 1.0, time=2.0).sample(grid)
    out = to_accelerated_frame(psi, FrameTrajectory.constant_acceleration(1.5), 2.0)
    # xi(2) = 3: the same samples now sit three units to the left
    np.testing.assert_allclose(out.x, grid.x - 3.0, rtol=0, atol=1e-13)
    np.testing.assert_allclose(out.density(), psi.density(), rtol=1e-14, atol=0)


class TestEquivalence:
    """A freely evolving packet seen from a falling frame is a packet in gravity."""

    @pytest.mark.parametrize("g", [1.5, -2.0, 9.8])
    def test_free_to_gravity(self, g):
        packet = GaussianPacket(0.3, 0.8, 1.2)
        mu, dt = 2.0, 1.3
        free = evolve_packet(packet, dt, GravityParams(0.0, mu))
        falling = evolve_packet(packet, dt, GravityParams(g, mu))
        grid = Grid(-24.0, 24.0, 2048)
        tilde = to_accelerated_frame(free.sample(grid), FrameTrajectory.constant_acceleration(g), mu)
        # wavefunctions agree including phase
        assert np.max(np.abs(tilde.values - falling(tilde.x))) < 1e-12

    def test_gravity_to_free(self):
        packet = GaussianPacket(-0.5, 1.3, -0.4)
        mu, dt, g = 0.7, 2.1, 3.0
        free = evolve_packet(packet, dt, GravityParams(0.0, mu))
        falling = evolve_packet(packet, dt, GravityParams(g, mu))
        grid = Grid(-30.0, 10.0, 2048)
        back = from_accelerated_frame(falling.sample(grid), FrameTrajectory.constant_acceleration(g), mu)
        assert np.max(np.abs(back.values - free(back.x))) < 1e-12

    def test_t_bar_only_changes_global_phase(self):
        grid = Grid(-16.0, 16.0, 512)
        psi = GaussianPacket(0.2, 1.0, 0.5, time=1.5).sample(grid)
        a = to_accelerated_frame(psi, FrameTrajectory.constant_acceleration(2.0, 0.0), 1.2)
        b = to_accelerated_frame(psi, FrameTrajectory.constant_acceleration(2.0, 0.7), 1.2)
        np.testing.assert_allclose(a.density(), b.density(), rtol=1e-14, atol=0)
        ratio = b.values[200:300] / a.values[200:300]
        expected = np.exp(0.5j * 1.2 * 4.0 * 0.7**3 / 3.0)
        np.testing.assert_allclose(ratio, expected, rtol=1e-12)


def test_polynomial_frame():
    frame = FrameTrajectory.polynomial([0.5, -1.0, 0.0, 0.25])
    t, h = 1.3, 1e-6
    slope = (frame.xi(t + h) - frame.xi(t - h)) / (2 * h)
    assert slope == pytest.approx(frame.xi_dot(t), rel=1e-9)
    # int_0^t xidot^2 by a fine trapezoid
    s = np.linspace(0.0, t, 20001)
    v = np.array([frame.xi_dot(u) for u in s])
    assert frame.phase_integral(t) == pytest.approx(np.trapezoid(v * v, s), rel=1e-8)


def test_constant_acceleration_matches_polynomial():
    g = 2.7
    a = FrameTrajectory.constant_acceleration(g)
    b = FrameTrajectory.polynomial([0.0, 0.0, 0.5 * g])
    for t in (0.0, 0.4, 2.2):
        assert a.xi(t) == pytest.approx(b.xi(t))
        assert a.xi_dot(t) == pytest.approx(b.xi_dot(t))
        assert a.phase_integral(t) == pytest.approx(b.phase_integral(t))
    assert math.isclose(a.phase_integral(1.0), g * g / 3.0)
