"""Command-line surface: experiment presets, TOML configs, output sinks.

Each experiment writes one directory per run containing

    series.csv      diagnostics time series (schema in CSV_COLUMNS; the
                    remainder column of a row covers the step ending at that
                    row and is NaN on the first row)
    equilibrium.csv phase-space snapshot of the stationary state
    snapshot_*.csv  phase-space snapshots at the requested times

plus a top-level manifest.json (resolved config, software version, wall
clock and factorization timings, snapshot color ranges) and, for sweeps, a
summary.json with per-run contraction factors.  Reloading the manifest's
config section as a custom config reproduces the run bit-identically.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .diagnostics import CSV_COLUMNS
from .equilibrium import (Equilibrium, IonDensity, NonConvergence,
                          from_potential, solve_poisson_boltzmann)
from .expressions import Expression, ExpressionError
from .hermite import (equilibrium_state, project_modulated_maxwellian,
                      reconstruct, state_from_mode_coefficients,
                      write_snapshot_binary, write_snapshot_csv)
from .integrator import (LINEARIZED, NonFiniteState, SimulationParams, run,
                         run_echo_protocol)
from .mesh import uniform_mesh
from .operators import IncompatibleRHS, SingularSystem
from .stepper_linear import (BACKWARD_EULER, IMPLICIT_MIDPOINT,
                             FactorizationFailure, LinearStepOperator,
                             StepParams)

PRESETS = ("ap_sweep", "nonuniform_perturbation", "plasma_echo", "two_stream")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_IO = 4

REMAINDER_NOTE = ("the remainder column of row n is the numeric-dissipation "
                  "term of the step ending at row n; the first row is NaN")


class ConfigError(ValueError):
    """Configuration failed validation; the message names the field."""


# -- configuration schema ----------------------------------------------------

_SCHEMA = {
    "mesh": {"a", "b", "n_cells"},
    "equilibrium": {"temperature", "mean_density", "potential",
                    "ion_density_csv"},
    "initial": {"mode_coefficients", "density_perturbation", "modulated",
                "quad_order"},
    "simulation": {"eps", "tau0", "dt", "t_end", "t_start", "n_modes",
                   "integrator", "linearized_scheme", "diag_every",
                   "snapshot_times", "track_hypocoercivity", "beta0",
                   "diag_pivot_thresh", "equilibrate"},
    "sweep": {"eps", "tau0", "runs"},
    "protocol": {"kind", "t0", "k1", "k2", "delta", "variants"},
    "output": {"directory", "snapshot_format", "v_min", "v_max", "n_v"},
}

_SIM_DEFAULTS = dict(t_start=0.0, integrator="strang",
                     linearized_scheme=IMPLICIT_MIDPOINT, diag_every=1,
                     snapshot_times=[], track_hypocoercivity=True, beta0=None,
                     diag_pivot_thresh=None, equilibrate=None)

_OUTPUT_DEFAULTS = dict(directory="runs", snapshot_format="csv",
                        v_min=-6.0, v_max=6.0, n_v=256)


class ExperimentConfig:
    """Validated, fully resolved experiment description."""

    def __init__(self, data: dict):
        self.data = _validate(data)

    @property
    def preset(self) -> str:
        return self.data.get("preset", "custom")

    def to_dict(self) -> dict:
        return json.loads(json.dumps(self.data))

    def __getitem__(self, key):
        return self.data[key]


def _validate(data: dict) -> dict:
    if not isinstance(data, dict):
        raise ConfigError("config must be a table")
    known_top = set(_SCHEMA) | {"preset"}
    for key in data:
        if key not in known_top:
            raise ConfigError(f"unknown section or key {key!r}")
    for section, allowed in _SCHEMA.items():
        if section in data:
            if not isinstance(data[section], dict):
                raise ConfigError(f"section {section!r} must be a table")
            for key in data[section]:
                if key not in allowed:
                    raise ConfigError(f"unknown key {section}.{key}")
    for section in ("mesh", "equilibrium", "simulation"):
        if section not in data:
            raise ConfigError(f"missing required section {section!r}")
    for key in ("a", "b", "n_cells"):
        if key not in data["mesh"]:
            raise ConfigError(f"missing mesh.{key}")
    for key in ("eps", "tau0", "dt", "t_end", "n_modes"):
        if key not in data["simulation"]:
            raise ConfigError(f"missing simulation.{key}")
    eq = data["equilibrium"]
    if "temperature" not in eq:
        raise ConfigError("missing equilibrium.temperature")
    if ("potential" not in eq) and ("ion_density_csv" not in eq):
        raise ConfigError("equilibrium needs either potential or ion_density_csv")
    init = data.get("initial", {})
    sources = [k for k in ("mode_coefficients", "density_perturbation",
                           "modulated") if k in init]
    if data.get("protocol", {}).get("kind", "standard") == "echo":
        for key in ("t0", "k1", "k2", "delta"):
            if key not in data["protocol"]:
                raise ConfigError(f"missing protocol.{key} for the echo protocol")
    elif len(sources) != 1:
        raise ConfigError("initial needs exactly one of mode_coefficients, "
                          "density_perturbation, modulated")
    sim = dict(_SIM_DEFAULTS)
    sim.update(data["simulation"])
    data["simulation"] = sim
    out = dict(_OUTPUT_DEFAULTS)
    out.update(data.get("output", {}))
    data["output"] = out
    return data


def load_config(path) -> ExperimentConfig:
    """Parse and validate a TOML config file (preset or custom)."""
    with open(path, "rb") as fh:
        try:
            raw = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"TOML parse error in {path}: {exc}") from exc
    preset = raw.get("preset", "custom")
    if preset != "custom":
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r}; valid presets: {', '.join(PRESETS)}")
        base = preset_config(preset).data
        base_out = dict(base["output"])
        for section, content in raw.items():
            if section == "preset":
                continue
            if not isinstance(content, dict):
                raise ConfigError(f"section {section!r} must be a table")
            base.setdefault(section, {}).update(content)
        if "output" in raw:
            base_out.update(raw["output"])
            base["output"] = base_out
        return ExperimentConfig(base)
    return ExperimentConfig(raw)


def config_from_dict(data: dict) -> ExperimentConfig:
    """Rebuild a config from a manifest's resolved config section."""
    return ExperimentConfig(json.loads(json.dumps(data)))


# -- presets -----------------------------------------------------------------

def _ap_sweep_runs():
    runs = []
    for k in range(0, 7):
        eps = 10.0 ** (-k)
        t_end = min(100.0, max(0.1, 1e5 * eps))
        runs.append({"label": f"eps1e-{k}", "eps": eps, "t_end": t_end})
    return runs


def preset_config(name: str) -> ExperimentConfig:
    """Fully resolved configuration of one of the paper-style experiments."""
    mesh = {"a": -6.0, "b": 6.0, "n_cells": 128}
    if name == "ap_sweep":
        data = {
            "preset": name,
            "mesh": mesh,
            "equilibrium": {"temperature": 1.0, "mean_density": 1.0,
                            "potential": "0.2*sin(pi*x/L)"},
            "initial": {"density_perturbation": "0.01*cos(pi*x/L)"},
            # lie is the L-stable composition: it is the one that reaches
            # the stationary state in a single step when eps << dt
            "simulation": {"eps": 1.0, "tau0": 1e5, "dt": 0.1, "t_end": 100.0,
                           "n_modes": 80, "integrator": "lie"},
            "sweep": {"runs": _ap_sweep_runs()},
        }
    elif name == "nonuniform_perturbation":
        runs = []
        for expo in range(0, 5):
            tau0 = 10.0 ** expo
            runs.append({"label": f"tau1e{expo}", "tau0": tau0,
                         "n_modes": 400 if tau0 >= 1e3 else 50})
        runs.append({"label": "tau1e4_linearized", "tau0": 1e4,
                     "n_modes": 400, "integrator": "linearized"})
        data = {
            "preset": name,
            "mesh": mesh,
            "equilibrium": {"temperature": 1.0, "mean_density": 1.0,
                            "potential": "0.2*sin(pi*x/L)"},
            "initial": {"density_perturbation": "0.01*cos(pi*x/L)"},
            "simulation": {"eps": 1.0, "tau0": 1e4, "dt": 0.1, "t_end": 70.0,
                           "n_modes": 400, "integrator": "strang",
                           "snapshot_times": [4.0, 8.0, 16.0, 30.0, 40.0, 70.0]},
            "sweep": {"runs": runs},
        }
    elif name == "plasma_echo":
        k1 = math.pi / 6.0
        data = {
            "preset": name,
            "mesh": mesh,
            "equilibrium": {"temperature": 1.0, "mean_density": 1.0,
                            "potential": "0"},
            "initial": {},
            "simulation": {"eps": 1.0, "tau0": 1e6, "dt": 0.1, "t_end": 120.0,
                           "n_modes": 8000, "integrator": "strang",
                           "linearized_scheme": IMPLICIT_MIDPOINT,
                           "snapshot_times": [0.0, 20.0, 30.0, 40.0, 50.0]},
            "protocol": {"kind": "echo", "t0": -30.0, "k1": k1, "k2": 2.0 * k1,
                         "delta": 0.01, "variants": ["nonlinear", "linearized"]},
        }
    elif name == "two_stream":
        data = {
            "preset": name,
            "mesh": mesh,
            "equilibrium": {"temperature": 1.0, "mean_density": 1.0,
                            "potential": "0.1*(1-cos(pi*x/L))"},
            "initial": {"mode_coefficients": {
                "0": "1+0.01*cos(pi*x/L)",
                "2": "(5*2^0.5/6)*(1+0.01*cos(pi*x/L))"}},
            "simulation": {"eps": 1.0, "tau0": 1e4, "dt": 0.1, "t_end": 60.0,
                           "n_modes": 800, "integrator": "strang",
                           "snapshot_times": [8.0, 16.0, 30.0, 60.0]},
        }
    else:
        raise ConfigError(
            f"unknown preset {name!r}; valid presets: {', '.join(PRESETS)}")
    return ExperimentConfig(data)


# -- building pieces from the config ------------------------------------------

def _build_equilibrium(config: ExperimentConfig) -> Equilibrium:
    m = config["mesh"]
    mesh = uniform_mesh(float(m["a"]), float(m["b"]), int(m["n_cells"]))
    eq = config["equilibrium"]
    t0 = float(eq["temperature"])
    half_length = 0.5 * mesh.length
    if eq.get("potential") is not None:
        pot = eq["potential"]
        if isinstance(pot, str):
            expr = Expression(pot, constants={"L": half_length})
            phi = expr(x=mesh.centers) * np.ones(mesh.n_cells)
        else:
            phi = np.asarray(pot, dtype=float)
        return from_potential(mesh, phi, t0,
                              mean_density=float(eq.get("mean_density", 1.0)))
    values = _read_column_csv(eq["ion_density_csv"], mesh.n_cells)
    ion = IonDensity(mesh=mesh, values=values)
    return solve_poisson_boltzmann(ion, t0)


def _read_column_csv(path, expected: int) -> np.ndarray:
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            tok = line.split(",")[-1]
            try:
                values.append(float(tok))
            except ValueError:
                continue  # header line
    arr = np.asarray(values)
    if arr.size != expected:
        raise ConfigError(
            f"ion density CSV {path} holds {arr.size} values, mesh needs {expected}")
    return arr


def _build_initial(config: ExperimentConfig, equilibrium: Equilibrium,
                   n_modes: int):
    init = config.data.get("initial", {})
    mesh = equilibrium.mesh
    half_length = 0.5 * mesh.length
    consts = {"L": half_length}
    if init.get("density_perturbation") is not None:
        expr = Expression(init["density_perturbation"], constants=consts)
        rho_cells = equilibrium.rho

        def c0(x):
            # rho at cell centers plus the perturbation, evaluated pointwise;
            # interpolate rho by nearest cell (x comes from this mesh anyway)
            idx = np.clip(((x - mesh.a) / mesh.widths[0] - 0.5).round().astype(int),
                          0, mesh.n_cells - 1)
            return rho_cells[idx] + expr(x=x) * np.ones_like(x)

        return state_from_mode_coefficients({0: c0}, equilibrium, n_modes)
    if init.get("mode_coefficients") is not None:
        modes = {}
        for key, text in init["mode_coefficients"].items():
            k = int(key)
            if isinstance(text, str):
                expr = Expression(text, constants=consts)
                modes[k] = (lambda e: lambda x: e(x=x) * np.ones_like(x))(expr)
            else:
                modes[k] = np.asarray(text, dtype=float)
        return state_from_mode_coefficients(modes, equilibrium, n_modes)
    if init.get("modulated") is not None:
        expr = Expression(init["modulated"], constants=consts)

        def h(x, v):
            return expr(x=x, v=v) * np.ones(np.broadcast_shapes(np.shape(x),
                                                                np.shape(v)))

        return project_modulated_maxwellian(h, equilibrium, n_modes,
                                            quad_order=init.get("quad_order"))
    raise ConfigError("no initial data specified")


def _simulation_params(config: ExperimentConfig, overrides: dict | None = None
                       ) -> SimulationParams:
    sim = dict(config["simulation"])
    if overrides:
        sim.update({k: v for k, v in overrides.items() if k != "label"})
    return SimulationParams(
        eps=float(sim["eps"]), tau0=float(sim["tau0"]), dt=float(sim["dt"]),
        t_end=float(sim["t_end"]), n_modes=int(sim["n_modes"]),
        integrator=sim["integrator"], diag_every=int(sim["diag_every"]),
        snapshot_times=tuple(float(t) for t in sim["snapshot_times"]),
        t_start=float(sim["t_start"]),
        linearized_scheme=sim["linearized_scheme"],
        track_hypocoercivity=bool(sim["track_hypocoercivity"]),
        beta0=sim["beta0"],
        diag_pivot_thresh=sim["diag_pivot_thresh"],
        equilibrate=sim["equilibrate"])


# -- output sinks --------------------------------------------------------------

def _format_value(x: float) -> str:
    return f"{x:.17g}"


def write_series_csv(path, records):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\r\n")
        for rec in records:
            fh.write(",".join(_format_value(v) for v in rec.as_row()) + "\r\n")


class _SnapshotWriter:
    def __init__(self, run_dir: Path, equilibrium: Equilibrium, config):
        out = config["output"]
        self.run_dir = run_dir
        self.equilibrium = equilibrium
        self.fmt = out["snapshot_format"]
        self.v_grid = np.linspace(float(out["v_min"]), float(out["v_max"]),
                                  int(out["n_v"]))
        self.entries = []
        self.f_inf = None

    def write_equilibrium(self):
        from .hermite import equilibrium_state as eq_state
        eq = self.equilibrium
        state = eq_state(eq, 0)
        self.f_inf = reconstruct(state, eq, self.v_grid)
        path = self.run_dir / f"equilibrium.{self._ext()}"
        self._dump(path, self.f_inf)
        self.entries.append({
            "file": path.name, "t": None, "kind": "equilibrium",
            "min": float(self.f_inf.min()), "max": float(self.f_inf.max()),
            "diff_min": 0.0, "diff_max": 0.0})

    def __call__(self, state):
        values = reconstruct(state, self.equilibrium, self.v_grid)
        path = self.run_dir / f"snapshot_{len(self.entries):03d}.{self._ext()}"
        self._dump(path, values)
        diff = values - self.f_inf
        self.entries.append({
            "file": path.name, "t": state.time, "kind": "state",
            "min": float(values.min()), "max": float(values.max()),
            "diff_min": float(diff.min()), "diff_max": float(diff.max())})

    def _ext(self):
        return "csv" if self.fmt == "csv" else "bin"

    def _dump(self, path, values):
        x = self.equilibrium.mesh.centers
        if self.fmt == "csv":
            write_snapshot_csv(path, x, self.v_grid, values)
        else:
            write_snapshot_binary(path, x, self.v_grid, values)


# -- experiment driver ----------------------------------------------------------

def _expand_runs(config: ExperimentConfig):
    sweep = config.data.get("sweep", {})
    if "runs" in sweep and sweep["runs"]:
        return list(sweep["runs"])
    eps_list = sweep.get("eps")
    tau_list = sweep.get("tau0")
    if eps_list or tau_list:
        runs = []
        for eps in (eps_list or [config["simulation"]["eps"]]):
            for tau0 in (tau_list or [config["simulation"]["tau0"]]):
                runs.append({"label": f"eps{eps:g}_tau{tau0:g}",
                             "eps": eps, "tau0": tau0})
        return runs
    return [{"label": "run"}]


def _one_standard_run(config, equilibrium, overrides, out_dir, dump_matrix):
    label = overrides.get("label", "run")
    run_dir = out_dir / label
    run_dir.mkdir(parents=True, exist_ok=True)
    params = _simulation_params(config, overrides)
    initial = _build_initial(config, equilibrium, params.n_modes)

    snapshots = _SnapshotWriter(run_dir, equilibrium, config)
    snapshots.write_equilibrium()
    info = {}
    started = time.perf_counter()
    final, records = run(params, equilibrium, initial,
                         on_snapshot=snapshots, info=info)
    wall = time.perf_counter() - started
    write_series_csv(run_dir / "series.csv", records)
    if dump_matrix:
        op = LinearStepOperator(
            StepParams(params.eps, params.tau0, params.dt, BACKWARD_EULER),
            equilibrium, params.n_modes)
        op.dump_matrix(run_dir / "matrix.mtx")
    entry = {"label": label, "directory": label, "csv": "series.csv",
             "params": {"eps": params.eps, "tau0": params.tau0,
                        "dt": params.dt, "t_end": params.t_end,
                        "n_modes": params.n_modes,
                        "integrator": params.integrator},
             "wall_clock_s": wall,
             "factorization_s": info.get("factorization_s"),
             "n_steps": params.n_steps,
             "snapshots": snapshots.entries}
    contraction = None
    if len(records) >= 2 and records[0].l2_f > 0.0:
        contraction = records[1].l2_f / records[0].l2_f
    entry["one_step_contraction"] = contraction
    return entry


def _one_echo_run(config, equilibrium, variant, out_dir):
    proto = config["protocol"]
    label = f"echo_{variant}"
    run_dir = out_dir / label
    run_dir.mkdir(parents=True, exist_ok=True)

    overrides = {}
    if variant == "linearized":
        overrides["integrator"] = LINEARIZED
    base = _simulation_params(config, overrides)
    from dataclasses import replace
    params1 = replace(base, t_start=float(proto["t0"]), t_end=0.0,
                      snapshot_times=(), track_hypocoercivity=False)
    params2 = replace(base, t_start=0.0)

    snapshots = _SnapshotWriter(run_dir, equilibrium, config)
    snapshots.write_equilibrium()
    started = time.perf_counter()
    rec1, rec2, final = run_echo_protocol(
        params1, params2, float(proto["delta"]), float(proto["k1"]),
        float(proto["k2"]), equilibrium, on_snapshot=snapshots)
    wall = time.perf_counter() - started
    write_series_csv(run_dir / "phase1.csv", rec1)
    write_series_csv(run_dir / "series.csv", rec2)
    entry = {"label": label, "directory": label, "csv": "series.csv",
             "phase1_csv": "phase1.csv",
             "params": {"eps": base.eps, "tau0": base.tau0, "dt": base.dt,
                        "t_end": base.t_end, "n_modes": base.n_modes,
                        "integrator": params2.integrator,
                        "t0": proto["t0"], "k1": proto["k1"],
                        "k2": proto["k2"], "delta": proto["delta"]},
             "wall_clock_s": wall,
             "n_steps": params1.n_steps + params2.n_steps,
             "quality": "converged" if base.n_modes >= 8000 else "qualitative",
             "snapshots": snapshots.entries}
    return entry


def run_experiment(config: ExperimentConfig, threads: int = 1,
                   dump_matrix: bool = False) -> int:
    """Execute every run of the experiment; returns a process exit code."""
    out_dir = Path(config["output"]["directory"])
    out_dir.mkdir(parents=True, exist_ok=True)
    equilibrium = _build_equilibrium(config)

    is_echo = config.data.get("protocol", {}).get("kind") == "echo"
    if is_echo:
        variants = config["protocol"].get("variants", ["nonlinear"])
        jobs = [(_one_echo_run, (config, equilibrium, v, out_dir))
                for v in variants]
    else:
        jobs = [(_one_standard_run,
                 (config, equilibrium, ov, out_dir, dump_matrix))
                for ov in _expand_runs(config)]

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(fn, *args) for fn, args in jobs]
            entries = [f.result() for f in futures]
    else:
        entries = [fn(*args) for fn, args in jobs]

    manifest = {
        "software": {"name": "vpfp1d", "version": __version__},
        "preset": config.preset,
        "config": config.to_dict(),
        "csv_schema": list(CSV_COLUMNS),
        "remainder_convention": REMAINDER_NOTE,
        "runs": entries,
    }
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)

    summary = {"runs": [{"label": e["label"],
                         "one_step_contraction": e.get("one_step_contraction")}
                        for e in entries]}
    with open(out_dir / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------

def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vpfp1d",
        description="Structure-preserving Hermite/finite-volume solver for the "
                    "1D Vlasov-Poisson-Fokker-Planck system.",
        epilog=f"CSV schema: {','.join(CSV_COLUMNS)}. Note: {REMAINDER_NOTE}.")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="{" + ",".join(PRESETS + ("custom",)) + "}")

    def add_common(p):
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for sweep members")
        p.add_argument("--dump-matrix", action="store_true",
                       help="write the implicit-step matrix in matrix-market format")
        p.add_argument("--n-modes", type=int, default=None,
                       help="override the Hermite mode count")
        p.add_argument("--t-end", type=float, default=None,
                       help="override the final time")
        p.add_argument("--dt", type=float, default=None,
                       help="override the time step")

    for name in PRESETS:
        p = sub.add_parser(name, help=f"run the {name} experiment preset")
        add_common(p)
        if name == "plasma_echo":
            p.add_argument("--full", action="store_true",
                           help="converged deep-hierarchy mode (8000 modes; "
                                "hours); default is the desk-scale qualitative "
                                "mode with 800 modes")
    p = sub.add_parser("custom", help="run a custom TOML config")
    p.add_argument("--config", required=True, help="path to the TOML config")
    add_common(p)
    return parser


def main(argv=None) -> int:
    parser = _make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "custom":
            config = load_config(args.config)
        else:
            config = preset_config(args.command)
            if args.command == "plasma_echo" and not args.full:
                config.data["simulation"]["n_modes"] = 800
        if args.n_modes is not None:
            config.data["simulation"]["n_modes"] = args.n_modes
            for run_over in config.data.get("sweep", {}).get("runs", []):
                run_over.pop("n_modes", None)
        if args.t_end is not None:
            config.data["simulation"]["t_end"] = args.t_end
            config.data["simulation"]["snapshot_times"] = [
                t for t in config.data["simulation"]["snapshot_times"]
                if t <= args.t_end]
            for run_over in config.data.get("sweep", {}).get("runs", []):
                run_over.pop("t_end", None)
        if args.dt is not None:
            config.data["simulation"]["dt"] = args.dt
        if args.out is not None:
            config.data["output"]["directory"] = args.out
        else:
            config.data["output"]["directory"] = str(
                Path("runs") / config.preset)
        return run_experiment(config, threads=args.threads,
                              dump_matrix=args.dump_matrix)
    except (ConfigError, ExpressionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FactorizationFailure, SingularSystem, IncompatibleRHS,
            NonConvergence, NonFiniteState) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
