"""Command-line front end.

Usage::

    gravipack density --mu 1 --sigma 1 --dt 1 --g 0 --x 0
    gravipack figures --out figs/
    gravipack validate

Settings come from ``--config FILE`` (``key = value`` lines, ``#``
comments) and flags; flags win.  Every output file starts with ``#``
comment lines listing the resolved configuration.

Exit status: 0 on success, 1 when a check fails, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from gravipack import analysis, constants, validation
from gravipack.frame import Grid
from gravipack.lagrangian import GravityParams
from gravipack.oracle import EvolutionConfig, compare_densities, split_step_evolve
from gravipack.wavepacket import (
    WINDOW_WIDTHS,
    GaussianPacket,
    density_profile,
    evolve_packet,
    probability_density,
)

logger = logging.getLogger("gravipack")

MODES = ("evolve", "density", "compare", "scan-hbar", "scan-sigma", "validate", "figures")
ORACLE_TOL = 1e-6
_KNOWN = {
    constants.PION_NEUTRAL_MEV: "pi0",
    constants.PION_CHARGED_MEV: "pi+-",
    constants.KAON_NEUTRAL_MEV: "K0",
}


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    mode: str
    units: str = "natural"
    mu: float | None = None
    mass_mev: list = field(default_factory=list)
    mass_kg: float | None = None
    sigma: float | None = None
    xprime: float = 0.0
    k0: float | None = None
    u0: float | None = None
    dt: float | None = None
    g: float | None = None
    x: float | None = None
    grid_n: int | None = None
    grid_min: float | None = None
    grid_max: float | None = None
    steps: int = 64
    octaves: int = 6
    out: str | None = None
    format: str | None = None

    def resolved(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def parse_config_file(path) -> dict:
    """Read flat ``key = value`` settings."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


_FLOAT_KEYS = {"mu", "mass_kg", "sigma", "xprime", "k0", "u0", "dt", "g", "x", "grid_min", "grid_max"}
_INT_KEYS = {"grid_n", "steps", "octaves"}


def _coerce(key, value):
    if value is None:
        return None
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
        if key == "mass_mev":
            if isinstance(value, str):
                return [float(v) for v in value.replace(",", " ").split()]
            return [float(v) for v in value]
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {value!r}") from exc
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gravipack", description=__doc__.split("\n\n")[0])
    p.add_argument("mode_arg", nargs="?", choices=MODES, metavar="MODE",
                   help="one of: " + ", ".join(MODES))
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--units", choices=("natural", "SI"))
    p.add_argument("--mu", type=float, help="m/hbar (natural units)")
    p.add_argument("--mass-mev", type=float, action="append", dest="mass_mev")
    p.add_argument("--mass-kg", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--xprime", type=float)
    vel = p.add_mutually_exclusive_group()
    vel.add_argument("--k0", type=float)
    vel.add_argument("--u0", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--g", type=float)
    p.add_argument("--x", type=float, help="single evaluation point")
    p.add_argument("--grid-n", type=int)
    p.add_argument("--grid-min", type=float)
    p.add_argument("--grid-max", type=float)
    p.add_argument("--steps", type=int, help="split-step count for compare")
    p.add_argument("--octaves", type=int, help="doublings in the scan modes")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("csv", "svg", "both"))
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def make_config(args: argparse.Namespace) -> ExperimentConfig:
    merged = parse_config_file(args.config) if args.config else {}
    merged = {k: _coerce(k, v) for k, v in merged.items()}
    unknown = set(merged) - {f.name for f in fields(ExperimentConfig)}
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for f in fields(ExperimentConfig):
        value = getattr(args, f.name, None)
        if value is not None and f.name != "mode":
            merged[f.name] = value
    mode = args.mode or args.mode_arg or merged.get("mode")
    if args.mode and args.mode_arg and args.mode != args.mode_arg:
        raise UsageError("conflicting modes given")
    if mode not in MODES:
        raise UsageError("a mode is required (" + ", ".join(MODES) + ")")
    merged["mode"] = mode
    if merged.get("k0") is not None and merged.get("u0") is not None:
        raise UsageError("give k0 or u0, not both")
    cfg = ExperimentConfig(**merged)
    if cfg.mode == "figures":
        cfg.units = "SI"
    if cfg.units not in ("natural", "SI"):
        raise UsageError(f"unknown unit system {cfg.units!r}")
    _apply_defaults(cfg)
    _validate(cfg)
    return cfg


def _apply_defaults(cfg: ExperimentConfig):
    if cfg.g is None:
        cfg.g = constants.STANDARD_GRAVITY if cfg.units == "SI" else 0.0
    if cfg.mode == "figures":
        cfg.sigma = cfg.sigma if cfg.sigma is not None else 1e2 * constants.ANGSTROM
        cfg.dt = cfg.dt if cfg.dt is not None else 0.02
        if not cfg.mass_mev:
            cfg.mass_mev = [constants.PION_NEUTRAL_MEV, constants.PION_CHARGED_MEV, constants.KAON_NEUTRAL_MEV]
        if cfg.u0 is None:
            # lands at x = 0
            cfg.u0 = (0.5 * cfg.g * cfg.dt**2 - cfg.xprime) / cfg.dt
        cfg.format = cfg.format or "both"
        cfg.out = cfg.out or "figures"
    cfg.format = cfg.format or "csv"


def _positive(cfg, *names):
    for name in names:
        value = getattr(cfg, name)
        if value is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for mode {cfg.mode}")
        if not value > 0:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")


def _validate(cfg: ExperimentConfig):
    if cfg.mode == "validate":
        return
    if cfg.mode == "figures":
        _positive(cfg, "sigma", "dt")
        if len(cfg.mass_mev) < 2:
            raise UsageError("figures needs at least two masses")
        return
    if cfg.mode == "scan-sigma":
        _positive(cfg, "sigma", "dt")
    elif cfg.mode == "scan-hbar":
        _positive(cfg, "sigma", "dt")
        if cfg.units == "natural":
            _positive(cfg, "mu")
    else:
        _positive(cfg, "sigma", "dt")
        cfg_mu(cfg)
    if cfg.grid_n is not None and cfg.grid_n < 2:
        raise UsageError("--grid-n must be at least 2")
    if (cfg.grid_min is None) != (cfg.grid_max is None):
        raise UsageError("--grid-min and --grid-max go together")
    if cfg.grid_min is not None and not cfg.grid_max > cfg.grid_min:
        raise UsageError("--grid-max must exceed --grid-min")
    if cfg.steps < 0 or cfg.octaves < 0:
        raise UsageError("--steps and --octaves must be non-negative")


def cfg_mu(cfg: ExperimentConfig) -> float:
    if cfg.units == "natural":
        if cfg.mu is None or not cfg.mu > 0:
            raise UsageError("natural units need a positive --mu")
        return cfg.mu
    if cfg.mass_kg is not None:
        mass = cfg.mass_kg
    elif cfg.mass_mev:
        mass = constants.mev_to_kg(cfg.mass_mev[0])
    else:
        raise UsageError("SI units need --mass-mev or --mass-kg")
    if not mass > 0:
        raise UsageError("mass must be positive")
    return constants.mu_from_mass(mass)


def _packet(cfg: ExperimentConfig, mu: float) -> GaussianPacket:
    if cfg.u0 is not None:
        return GaussianPacket.from_velocity(cfg.xprime, cfg.sigma, cfg.u0, mu)
    return GaussianPacket(cfg.xprime, cfg.sigma, cfg.k0 or 0.0)


# -- output -----------------------------------------------------------------

def _fmt(value) -> str:
    return f"{value:.16e}"


def format_csv(config: dict, columns: dict, notes: dict | None = None) -> str:
    lines = ["# gravipack"]
    lines += [f"# {key} = {config[key]}" for key in sorted(config)]
    for key, value in (notes or {}).items():
        lines.append(f"# {key} = {value}")
    names = list(columns)
    lines.append(",".join(names))
    rows = zip(*(np.atleast_1d(columns[n]) for n in names))
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None, stdout):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        stdout.write(text)


def _grid_x(cfg, center, width, n_default=1025):
    if cfg.grid_min is not None:
        return np.linspace(cfg.grid_min, cfg.grid_max, cfg.grid_n or n_default)
    half = WINDOW_WIDTHS * width
    return np.linspace(center - half, center + half, cfg.grid_n or n_default)


# -- modes ------------------------------------------------------------------

def run_density(cfg, stdout):
    mu = cfg_mu(cfg)
    packet = _packet(cfg, mu)
    gp = GravityParams(cfg.g, mu)
    prof = density_profile(packet, cfg.dt, gp)
    x = np.array([cfg.x]) if cfg.x is not None else _grid_x(cfg, prof.center, prof.width)
    rho = probability_density(x, packet, cfg.dt, gp)
    notes = {"center": _fmt(prof.center), "Sigma": _fmt(prof.width)}
    _emit(format_csv(cfg.resolved(), {"x": x, "rho": rho}, notes), cfg.out, stdout)
    return 0


def run_evolve(cfg, stdout):
    mu = cfg_mu(cfg)
    packet = _packet(cfg, mu)
    gp = GravityParams(cfg.g, mu)
    state = evolve_packet(packet, cfg.dt, gp)
    prof = density_profile(packet, cfg.dt, gp)
    x = np.array([cfg.x]) if cfg.x is not None else _grid_x(cfg, prof.center, prof.width)
    psi = state(x)
    columns = {"x": x, "re_psi": psi.real, "im_psi": psi.imag, "rho": state.density(x)}
    _emit(format_csv(cfg.resolved(), columns), cfg.out, stdout)
    return 0


def run_compare(cfg, stdout):
    mu = cfg_mu(cfg)
    packet = _packet(cfg, mu)
    gp = GravityParams(cfg.g, mu)
    evo = EvolutionConfig.for_packet(packet, mu, cfg.g, cfg.dt, steps=max(cfg.steps, 1))
    if cfg.grid_min is not None:
        n = cfg.grid_n or evo.grid.n
        evo = EvolutionConfig(Grid(cfg.grid_min, cfg.grid_max, n), evo.dt_step, evo.steps, mu, cfg.g)
    elif cfg.grid_n is not None:
        evo = EvolutionConfig(Grid(evo.grid.x_min, evo.grid.x_max, cfg.grid_n), evo.dt_step, evo.steps, mu, cfg.g)
    out = split_step_evolve(packet.sample(evo.grid), evo)

    def analytic(x):
        return probability_density(x, packet, cfg.dt, gp)

    deviation = compare_densities(out, analytic)
    x = evo.grid.x
    notes = {
        "grid": f"[{evo.grid.x_min}, {evo.grid.x_max}) n={evo.grid.n}",
        "steps": evo.steps,
        "sup_relative_deviation": f"{deviation:.6e}",
    }
    columns = {"x": x, "rho_oracle": out.density(), "rho_analytic": analytic(x)}
    _emit(format_csv(cfg.resolved(), columns, notes), cfg.out, stdout)
    print(f"sup relative deviation {deviation:.3e} (tolerance {ORACLE_TOL:g})", file=sys.stderr)
    return 0 if deviation < ORACLE_TOL else 1


def run_scan_hbar(cfg, stdout):
    mu0 = cfg.mu if cfg.units == "natural" else cfg_mu(cfg)
    mus = mu0 * 2.0 ** np.arange(cfg.octaves + 1)
    packet = GaussianPacket(cfg.xprime, cfg.sigma)
    u0 = cfg.u0 if cfg.u0 is not None else (cfg.k0 or 0.0) / mu0
    scan = analysis.hbar_limit_scan(packet, cfg.dt, cfg.g, mus, u0=u0)
    notes = {k: v for k, v in scan.monotone.items()}
    columns = {"mu": scan.parameter_values, "Sigma": scan.sigma_values, "sup_deviation": scan.sup_deviation}
    _emit(format_csv(cfg.resolved(), columns, notes), cfg.out, stdout)
    return 0


def run_scan_sigma(cfg, stdout):
    sigmas = cfg.sigma * 2.0 ** -np.arange(cfg.octaves + 1)
    u0 = cfg.u0 if cfg.u0 is not None else 0.0
    scan = analysis.sigma_limit_scan(cfg.xprime, u0, cfg.dt, cfg.g, sigmas)
    notes = dict(scan.monotone, epsilon=scan.inputs["epsilon"])
    columns = {
        "sigma": scan.parameter_values,
        "window_mass": scan.extra["window_mass"],
        "center_of_mass": scan.extra["center_of_mass"],
    }
    _emit(format_csv(cfg.resolved(), columns, notes), cfg.out, stdout)
    return 0


def run_validate(cfg, stdout):
    checks = validation.run_all()
    for check in checks:
        stdout.write(check.line() + "\n")
    failures = [c.as_dict() for c in checks if not c.passed]
    if failures:
        stdout.write(json.dumps({"failures": failures}) + "\n")
        return 1
    return 0


def _particle(mass_mev: float) -> analysis.ParticleSpec:
    return analysis.ParticleSpec(_KNOWN.get(mass_mev, f"m{mass_mev:g}MeV"), mass_mev)


def run_figures(cfg, stdout):
    from gravipack.plotting import plot_density_pair

    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    reference = _particle(cfg.mass_mev[0])
    status = 0
    for index, mass in enumerate(cfg.mass_mev[1:], start=1):
        other = _particle(mass)
        report = analysis.wep_violation_report(reference, other, cfg.sigma, cfg.xprime, cfg.u0, cfg.dt, cfg.g)
        stem = out_dir / f"fig{index}"
        rho_a, rho_b = report.density_of(reference.name), report.density_of(other.name)
        notes = {
            f"Sigma_{report.heavy.name}": _fmt(report.sigma_heavy),
            f"Sigma_{report.light.name}": _fmt(report.sigma_light),
            "Delta": _fmt(report.delta),
            "center": _fmt(report.center),
            f"rho_max_{report.heavy.name}": _fmt(report.rho_max_heavy),
            f"rho_max_{report.light.name}": _fmt(report.rho_max_light),
        }
        notes.update({f"check_{k}": v for k, v in report.checks.items()})
        if cfg.format in ("csv", "both"):
            columns = {"x_m": report.x, f"rho_{reference.name}": rho_a, f"rho_{other.name}": rho_b}
            stem.with_suffix(".csv").write_text(format_csv(cfg.resolved(), columns, notes))
        if cfg.format in ("svg", "both"):
            plot_density_pair(
                stem.with_suffix(".svg"), report.x,
                [(reference.name, rho_a), (other.name, rho_b)],
                title=f"{reference.name} vs {other.name}",
                crossings=(report.center - report.delta, report.center + report.delta),
            )
        stdout.write(
            f"fig{index}: {reference.name} vs {other.name}  Delta={report.delta:.6e} m  "
            f"upper at center: {report.heavy.name}  checks={'ok' if report.passed else 'FAILED'}\n"
        )
        if not report.passed:
            status = 1
    return status


RUNNERS = {
    "density": run_density,
    "evolve": run_evolve,
    "compare": run_compare,
    "scan-hbar": run_scan_hbar,
    "scan-sigma": run_scan_sigma,
    "validate": run_validate,
    "figures": run_figures,
}


def run(cfg: ExperimentConfig, stdout=None) -> int:
    return RUNNERS[cfg.mode](cfg, stdout or sys.stdout)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(args)
    except (UsageError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"gravipack: error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(cfg)
    except ValueError as exc:
        print(f"gravipack: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
