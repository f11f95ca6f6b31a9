import numpy as np
import pytest

from gravipack import (
    BoundaryLeakError,
    EvolutionConfig,
    FrameTrajectory,
    GaussianPacket,
    Grid,
    GravityParams,
    compare_densities,
    evolve_packet,
    probability_density,
    split_step_evolve,
    to_accelerated_frame,
)


def run(packet, mu, g, dt, steps=64, grid=None):
    cfg = EvolutionConfig.for_packet(packet, mu, g, dt, steps=steps)
    if grid is not None:
        cfg = EvolutionConfig(grid, dt / steps, steps, mu, g)
    return split_step_evolve(packet.sample(cfg.grid), cfg)


def test_norm_conserved():
    out = run(GaussianPacket(0.0, 0.8, 1.5), 2.0, 3.0, 1.5)
    assert abs(out.norm() - 1.0) < 1e-12


def test_zero_steps_is_identity():
    grid = Grid(-20.0, 20.0, 512)
    psi = GaussianPacket(0.1, 1.0, 0.3).sample(grid)
    out = split_step_evolve(psi, EvolutionConfig(grid, 0.1, 0, 1.0, 9.8))
    np.testing.assert_array_equal(out.values, psi.values)
    assert out.values is not psi.values


def test_falls_to_expected_center():
    # x' = 0, u0 = 0, g = 2, T = 1: lands at -1
    out = run(GaussianPacket(0.0, 1.0), 1.0, 2.0, 1.0)
    mean = np.sum(out.x * out.density()) * out.grid.dx
    assert mean == pytest.approx(-1.0, abs=1e-10)


def test_free_density_matches_closed_form():
    packet = GaussianPacket(0.0, 1.0, 1.0)
    out = run(packet, 1.0, 0.0, 2.0)
    err = compare_densities(out, lambda x: probability_density(x, packet, 2.0, GravityParams(0.0, 1.0)))
    assert err < 1e-8


def test_second_order_in_time_step():
    packet = GaussianPacket(0.2, 0.9, 0.7)
    mu, g, dt = 1.3, 2.0, 1.1
    exact = evolve_packet(packet, dt, GravityParams(g, mu))
    grid = EvolutionConfig.for_packet(packet, mu, g, dt).grid
    phase_err, dens_err = [], []
    for steps in (16, 32, 64, 128):
        out = run(packet, mu, g, dt, steps, grid)
        ref = exact(out.x)
        i = np.argmax(np.abs(ref))
        phase_err.append(abs(np.angle(out.values[i] / ref[i])))
        dens_err.append(np.max(np.abs(out.density() - np.abs(ref) ** 2)))
    ratios = np.array(phase_err[:-1]) / np.array(phase_err[1:])
    np.testing.assert_allclose(ratios, 4.0, rtol=0.05)
    # the splitting error is a pure global phase, so densities sit at round-off
    assert max(dens_err) < 1e-12


def test_grid_refinement_converged():
    packet = GaussianPacket(0.0, 0.7, 2.0)
    mu, g, dt = 3.0, 1.0, 1.0
    cfg = EvolutionConfig.for_packet(packet, mu, g, dt)
    fine = Grid(cfg.grid.x_min, cfg.grid.x_max, 2 * cfg.grid.n)
    coarse_out = run(packet, mu, g, dt)
    fine_out = run(packet, mu, g, dt, grid=fine)
    assert np.max(np.abs(coarse_out.density() - fine_out.density()[::2])) < 1e-10


def test_gravity_is_a_frame_change():
    # free evolution viewed from the falling frame versus direct evolution in gravity
    grid = Grid(-32.0, 32.0, 1024)
    packet = GaussianPacket(0.0, 1.0, 0.5)
    mu, g, T = 1.0, 2.0, 1.0
    # the Strang global phase error under gravity is O(h^2); 2048 steps keep it near 1e-8
    free = run(packet, mu, 0.0, T, steps=2048, grid=grid)
    falling = run(packet, mu, g, T, steps=2048, grid=grid)
    tilde = to_accelerated_frame(free, FrameTrajectory.constant_acceleration(g), mu)
    shift = round((grid.x_min - tilde.grid.x_min) / grid.dx)
    assert shift == 16
    # tilde.x[j + 16] == grid.x[j]
    diff = tilde.values[shift:] - falling.values[:-shift]
    assert np.max(np.abs(diff)) < 1e-7


def test_boundary_leak():
    grid = Grid(-4.0, 4.0, 512)
    psi = GaussianPacket(0.0, 1.0).sample(grid)
    with pytest.raises(BoundaryLeakError):
        split_step_evolve(psi, EvolutionConfig(grid, 0.01, 10, 1.0, 0.0))


def test_grid_mismatch():
    psi = GaussianPacket(0.0, 1.0).sample(Grid(-20.0, 20.0, 512))
    with pytest.raises(ValueError):
        split_step_evolve(psi, EvolutionConfig(Grid(-20.0, 20.0, 1024), 0.01, 1, 1.0))


def test_config_validation():
    grid = Grid(-1.0, 1.0, 8)
    with pytest.raises(ValueError):
        EvolutionConfig(grid, 0.0, 1, 1.0)
    with pytest.raises(ValueError):
        EvolutionConfig(grid, 0.1, -1, 1.0)
    with pytest.raises(ValueError):
        EvolutionConfig(grid, 0.1, 1, 0.0)


def test_auto_grid_shape():
    cfg = EvolutionConfig.for_packet(GaussianPacket(0.0, 1.0, 3.0), 2.0, 4.0, 2.0)
    assert cfg.grid.n >= 512 and cfg.grid.n & (cfg.grid.n - 1) == 0
    assert cfg.duration == pytest.approx(2.0)
    assert not cfg.within_conservative_budget()
