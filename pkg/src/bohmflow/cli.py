"""Scenario-driven command line: one config file in, one result table out.

Subcommands ``propagate``, ``bohm``, ``convergence``, ``zeno``, and ``mott``
each read a TOML config (sections ``[system]``, ``[potential]``,
``[initial]``, ``[grid]``, ``[time]``, ``[task]``, ``[output]``), run a single
study, and write a table as CSV (17-significant-digit floats, LF endings,
``#``-prefixed metadata) or as JSON carrying the same rows plus metadata.
Sweeps live inside the config, so one file fully describes one study and
identical (config, seed) pairs reproduce identical numbers.

Validation reports every violation at once; failures print a machine-readable
JSON error record to stderr (exit 2 for bad configs, 1 for runtime errors).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import platform
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10: stdlib tomllib arrived in 3.11
    import tomli as tomllib

from . import __version__
from .bohm import integrate_bohm_trajectory
from .core import ComplexField, SpatialGrid, SystemConfig, TimeWindow, l2_distance
from .gaussian import GaussianWavepacket
from .numerics import fit_convergence_order, trapezoid_integral
from .potentials import Free, Harmonic, Potential, Quartic, Tabulated
from .propagators import KERNEL_KINDS, reference_evolve, time_slice_evolve
from .zeno import MeasurementSchedule, mott_track, zeno_run_flow

__all__ = ["ConfigError", "ScenarioConfig", "ResultTable", "parse_config",
           "run_scenario", "main"]

TASKS = ("propagate", "bohm", "convergence", "zeno", "mott")
PROPAGATORS = KERNEL_KINDS + ("crank-nicolson",)
POTENTIAL_VARIANTS = ("free", "harmonic", "quartic", "tabulated")
#: metadata keys that legitimately differ between reruns of the same config
VOLATILE_METADATA = ("created_utc", "wall_time_s")


class ConfigError(ValueError):
    """Carries the full list of config violations, not just the first."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid configuration")


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated study: which task, on what system, with what output."""

    task: str
    system: SystemConfig
    potential: Potential
    initial: GaussianWavepacket | None
    initial_file: str | None
    grid: SpatialGrid | None
    window: TimeWindow | None
    options: dict
    output_path: str | None
    output_format: str
    seed: int | None
    config_sha256: str


@dataclass
class ResultTable:
    columns: list
    rows: list
    metadata: dict

    def _json_cell(self, value):
        if isinstance(value, (int, np.integer)):
            return int(value)
        if isinstance(value, (float, np.floating)):
            v = float(value)
            return v if math.isfinite(v) else None
        return value

    def to_csv_text(self) -> str:
        lines = [f"# {key}: {value}" for key, value in self.metadata.items()]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(_format_cell(value) for value in row))
        return "\n".join(lines) + "\n"

    def to_json_text(self) -> str:
        payload = {
            "metadata": self.metadata,
            "columns": list(self.columns),
            "rows": [[self._json_cell(v) for v in row] for row in self.rows],
        }
        return json.dumps(payload, indent=2, allow_nan=False) + "\n"

    def write(self, path: str | None, fmt: str) -> str:
        text = self.to_csv_text() if fmt == "csv" else self.to_json_text()
        if path is None or path == "-":
            sys.stdout.write(text)
            return "-"
        with open(path, "w", newline="\n") as handle:
            handle.write(text)
        return path


def _format_cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


# --------------------------------------------------------------------------
# config parsing: every check appends to `errs`, nothing raises until the end


def _section(doc, name, errs, *, known):
    sec = doc.get(name, {})
    if not isinstance(sec, dict):
        errs.append(f"{name}: must be a table")
        return {}
    for key in sec:
        if key not in known:
            errs.append(
                f"{name}.{key}: unknown key; known keys: {', '.join(sorted(known))}"
            )
    return sec


def _number(sec, section, key, errs, default=None, *, positive=False, integer=False):
    if key not in sec:
        if default is None:
            errs.append(f"{section}.{key}: required")
        return default
    value = sec[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        errs.append(f"{section}.{key}: must be a number")
        return default
    if not math.isfinite(value):
        errs.append(f"{section}.{key}: must be finite")
        return default
    if integer:
        if value != int(value):
            errs.append(f"{section}.{key}: must be an integer")
            return default
        value = int(value)
    if positive and not value > 0:
        errs.append(f"{section}.{key}: must be positive")
        return default
    return value


def _number_list(sec, section, key, errs, default=None, *, positive=False):
    if key not in sec:
        return default
    raw = sec[key]
    if not isinstance(raw, list) or not raw:
        errs.append(f"{section}.{key}: must be a non-empty list of numbers")
        return default
    out = []
    for i, value in enumerate(raw):
        if isinstance(value, bool) or not isinstance(value, (int, float)) \
                or not math.isfinite(value):
            errs.append(f"{section}.{key}[{i}]: must be a finite number")
            return default
        if positive and not value > 0:
            errs.append(f"{section}.{key}[{i}]: must be positive")
            return default
        out.append(float(value))
    return out


def _choice(sec, section, key, errs, allowed, default):
    value = sec.get(key, default)
    if value not in allowed:
        errs.append(
            f"{section}.{key}: unknown value {value!r}; "
            f"choose from {', '.join(allowed)}"
        )
        return default
    return value


def _parse_system(doc, errs) -> SystemConfig | None:
    sec = _section(doc, "system", errs, known={"hbar", "masses"})
    hbar = _number(sec, "system", "hbar", errs, default=1.0, positive=True)
    masses = _number_list(sec, "system", "masses", errs, default=[1.0], positive=True)
    if hbar is None or masses is None:
        return None
    return SystemConfig(hbar=float(hbar), masses=tuple(masses))


def _parse_potential(doc, errs, system) -> Potential:
    sec = _section(
        doc, "potential", errs,
        known={"variant", "mass", "omega", "coefficient", "file"},
    )
    variant = _choice(sec, "potential", "variant", errs, POTENTIAL_VARIANTS, "free")
    if variant == "harmonic":
        default_mass = system.masses[0] if system is not None else 1.0
        mass = _number(sec, "potential", "mass", errs, default=default_mass,
                       positive=True)
        omega = _number(sec, "potential", "omega", errs, default=1.0, positive=True)
        if mass is None or omega is None:
            return Free()
        return Harmonic(mass=float(mass), omega=float(omega))
    if variant == "quartic":
        c = _number(sec, "potential", "coefficient", errs, default=1.0)
        return Quartic(c=float(c if c is not None else 1.0))
    if variant == "tabulated":
        path = sec.get("file")
        if not isinstance(path, str):
            errs.append("potential.file: tabulated variant needs a CSV file path")
            return Free()
        try:
            nodes, values = _load_two_columns(path)
            return Tabulated(nodes, values)
        except (OSError, ValueError) as exc:
            errs.append(f"potential.file: {exc}")
            return Free()
    return Free()


def _parse_initial(doc, errs):
    sec = _section(
        doc, "initial", errs, known={"center", "sigma", "momentum", "file"}
    )
    path = sec.get("file")
    if path is not None:
        if not isinstance(path, str):
            errs.append("initial.file: must be a file path")
            return None, None
        for key in ("center", "sigma", "momentum"):
            if key in sec:
                errs.append(f"initial.{key}: not allowed together with initial.file")
        return None, path
    center = _number(sec, "initial", "center", errs, default=0.0)
    sigma = _number(sec, "initial", "sigma", errs, default=1.0, positive=True)
    momentum = _number(sec, "initial", "momentum", errs, default=0.0)
    if None in (center, sigma, momentum):
        return None, None
    return (float(center), float(sigma), float(momentum)), None


def _parse_grid(doc, errs, *, required) -> SpatialGrid | None:
    if "grid" not in doc:
        if required:
            errs.append("grid: section required for this task")
        return None
    sec = _section(doc, "grid", errs, known={"x_min", "x_max", "points"})
    x_min = _number(sec, "grid", "x_min", errs)
    x_max = _number(sec, "grid", "x_max", errs)
    points = _number(sec, "grid", "points", errs, integer=True)
    if None in (x_min, x_max, points):
        return None
    if not x_max > x_min:
        errs.append("grid.x_max: must exceed grid.x_min")
        return None
    if points < 8:
        errs.append("grid.points: must be >= 8")
        return None
    return SpatialGrid(float(x_min), float(x_max), int(points))


def _parse_time(doc, errs, *, required, slices_required) -> TimeWindow | None:
    if "time" not in doc:
        if required:
            errs.append("time: section required for this task")
        return None
    sec = _section(doc, "time", errs, known={"t_start", "t_end", "n_slices"})
    t_start = _number(sec, "time", "t_start", errs, default=0.0)
    t_end = _number(sec, "time", "t_end", errs)
    default_slices = None if slices_required else 1
    n_slices = _number(sec, "time", "n_slices", errs, default=default_slices,
                       integer=True, positive=True)
    if None in (t_start, t_end, n_slices):
        return None
    if not t_end > t_start:
        errs.append("time.t_end: must exceed time.t_start")
        return None
    return TimeWindow(float(t_start), float(t_end), int(n_slices))


_TASK_KEYS = {
    "propagate": {"name", "kernel", "steps_per_slice"},
    "convergence": {"name", "kernel", "dt_values", "reference_steps"},
    "bohm": {"name", "x_starts", "steps_per_slice", "steps_per_interval"},
    "zeno": {"name", "x0", "p0", "sigma_meas", "n_observations", "q_model",
             "steps_per_segment", "seed"},
    "mott": {"name", "n_observations", "sigma_meas", "momentum", "duration",
             "n_tracks", "steps_per_segment", "seed"},
}


def _parse_task_options(doc, task, errs) -> tuple[dict, int | None]:
    sec = _section(doc, "task", errs, known=_TASK_KEYS[task])
    name = sec.get("name")
    if name is not None and name != task:
        errs.append(f"task.name: config is for task {name!r}, invoked as {task!r}")
    seed = _number(sec, "task", "seed", errs, default=0, integer=True) \
        if "seed" in sec else None
    opts: dict = {}
    if task == "propagate":
        opts["kernel"] = _choice(sec, "task", "kernel", errs, PROPAGATORS,
                                 "kerner-sutcliffe")
        opts["steps_per_slice"] = _number(sec, "task", "steps_per_slice", errs,
                                          default=64, integer=True, positive=True)
    elif task == "convergence":
        opts["kernel"] = _choice(sec, "task", "kernel", errs, KERNEL_KINDS,
                                 "kerner-sutcliffe")
        opts["dt_values"] = _number_list(
            sec, "task", "dt_values", errs,
            default=[0.2, 0.1, 0.05, 0.025], positive=True,
        )
        opts["reference_steps"] = _number(sec, "task", "reference_steps", errs,
                                          default=256, integer=True, positive=True)
    elif task == "bohm":
        starts = _number_list(sec, "task", "x_starts", errs)
        if starts is None:
            errs.append("task.x_starts: required for bohm runs")
        opts["x_starts"] = starts or []
        opts["steps_per_slice"] = _number(sec, "task", "steps_per_slice", errs,
                                          default=64, integer=True, positive=True)
        opts["steps_per_interval"] = _number(sec, "task", "steps_per_interval",
                                             errs, default=4, integer=True,
                                             positive=True)
    elif task == "zeno":
        opts["x0"] = _number(sec, "task", "x0", errs, default=1.0)
        opts["p0"] = _number(sec, "task", "p0", errs, default=0.0)
        opts["q_model"] = _choice(sec, "task", "q_model", errs,
                                  ("frozen", "thawed"), "frozen")
        opts["steps_per_segment"] = _number(sec, "task", "steps_per_segment",
                                            errs, default=64, integer=True,
                                            positive=True)
        # exactly one of the two may sweep; scalars run a one-row study
        sweep_n = isinstance(sec.get("n_observations"), list)
        sweep_sigma = isinstance(sec.get("sigma_meas"), list)
        if sweep_n and sweep_sigma:
            errs.append("task: n_observations and sigma_meas cannot both sweep")
            sweep_sigma = False
        if sweep_n:
            counts = _number_list(sec, "task", "n_observations", errs,
                                  positive=True) or [1.0]
            bad = [n for n in counts if n != int(n)]
            if bad:
                errs.append("task.n_observations: entries must be integers")
            opts["n_observations"] = [int(n) for n in counts if n == int(n)] or [1]
        else:
            opts["n_observations"] = [
                _number(sec, "task", "n_observations", errs, default=16,
                        integer=True, positive=True) or 16
            ]
        if sweep_sigma:
            opts["sigma_meas"] = _number_list(sec, "task", "sigma_meas", errs,
                                              positive=True) or [0.5]
        else:
            opts["sigma_meas"] = [
                _number(sec, "task", "sigma_meas", errs, default=0.5,
                        positive=True) or 0.5
            ]
    elif task == "mott":
        opts["n_observations"] = _number(sec, "task", "n_observations", errs,
                                         default=64, integer=True, positive=True)
        opts["sigma_meas"] = _number(sec, "task", "sigma_meas", errs, default=0.5,
                                     positive=True)
        opts["momentum"] = _number(sec, "task", "momentum", errs, default=1.0,
                                   positive=True)
        opts["duration"] = _number(sec, "task", "duration", errs, default=4.0,
                                   positive=True)
        opts["n_tracks"] = _number(sec, "task", "n_tracks", errs, default=10,
                                   integer=True, positive=True)
        opts["steps_per_segment"] = _number(sec, "task", "steps_per_segment",
                                            errs, default=32, integer=True,
                                            positive=True)
    return opts, seed


def parse_config(
    text: str,
    task: str,
    *,
    seed: int | None = None,
    output_path: str | None = None,
    output_format: str | None = None,
) -> ScenarioConfig:
    """Parse and validate a config document for the given task.

    Raises ConfigError carrying *all* violations. Keyword arguments are the
    command-line overrides (flags win over the file).
    """
    if task not in TASKS:
        raise ConfigError([f"task: unknown task {task!r}; choose from {TASKS}"])
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError([f"syntax: {exc}"]) from exc

    errs: list = []
    known_sections = {"system", "potential", "initial", "grid", "time", "task",
                      "output"}
    for key in doc:
        if key not in known_sections:
            errs.append(f"{key}: unknown section")

    system = _parse_system(doc, errs)
    potential = _parse_potential(doc, errs, system)
    gaussian, initial_file = _parse_initial(doc, errs)

    needs_grid = task in ("propagate", "bohm", "convergence")
    grid = _parse_grid(doc, errs, required=needs_grid)
    window = _parse_time(
        doc, errs,
        required=task in ("propagate", "bohm", "zeno"),
        slices_required=task in ("propagate", "bohm"),
    )

    opts, config_seed = _parse_task_options(doc, task, errs)

    out = _section(doc, "output", errs, known={"path", "format"})
    fmt = output_format or _choice(out, "output", "format", errs,
                                   ("csv", "json"), "csv")
    path = output_path or out.get("path")
    if path is not None and not isinstance(path, str):
        errs.append("output.path: must be a string")
        path = None

    effective_seed = seed if seed is not None else config_seed
    if task == "mott" and effective_seed is None:
        errs.append("task.seed: required for mott (or pass --seed)")
    if task == "zeno" and system is not None and system.dof != 1:
        errs.append("system.masses: zeno runs are one-dimensional")
    if task == "mott" and system is not None and system.dof != 2:
        errs.append("system.masses: mott tracks need exactly two masses")
    if task in ("propagate", "bohm", "convergence") and gaussian is None \
            and initial_file is None:
        errs.append("initial: section required for this task")

    if errs:
        raise ConfigError(errs)

    initial = None
    if gaussian is not None:
        center, sigma, momentum = gaussian
        initial = GaussianWavepacket.from_width(
            center=center, sigma=sigma, momentum=momentum, config=system
        )
    return ScenarioConfig(
        task=task,
        system=system,
        potential=potential,
        initial=initial,
        initial_file=initial_file,
        grid=grid,
        window=window,
        options=opts,
        output_path=path,
        output_format=fmt,
        seed=effective_seed,
        config_sha256=hashlib.sha256(text.encode()).hexdigest(),
    )


# --------------------------------------------------------------------------
# runners


def _load_two_columns(path):
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        try:
            rows.append([float(part) for part in parts])
        except ValueError:
            continue  # header row
    if not rows:
        raise ValueError(f"{path}: no numeric rows")
    data = np.asarray(rows, dtype=float)
    return data[:, 0], data[:, 1]


def _load_field(path, grid: SpatialGrid) -> ComplexField:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        try:
            rows.append([float(part) for part in parts])
        except ValueError:
            continue
    data = np.asarray(rows, dtype=float)
    if data.ndim != 2 or data.shape[1] != 3:
        raise ValueError(f"{path}: expected rows of x,re,im")
    if data.shape[0] != grid.n or not np.allclose(data[:, 0], grid.points,
                                                  atol=1e-9):
        raise ValueError(f"{path}: sample points do not match the config grid")
    return ComplexField(grid, data[:, 1] + 1j * data[:, 2])


def _initial_field(cfg: ScenarioConfig) -> ComplexField:
    if cfg.initial is not None:
        return cfg.initial.sample(cfg.grid, cfg.system)
    return _load_field(cfg.initial_file, cfg.grid)


def _field_moments(field: ComplexField):
    x = field.grid.points
    rho = field.density()
    total = float(trapezoid_integral(rho, x).real)
    mean = float(trapezoid_integral(x * rho, x).real) / total
    var = float(trapezoid_integral((x - mean) ** 2 * rho, x).real) / total
    return mean, math.sqrt(max(var, 0.0))


def _run_propagate(cfg: ScenarioConfig) -> ResultTable:
    field = _initial_field(cfg)
    kernel = cfg.options["kernel"]
    if kernel == "crank-nicolson":
        evolution = reference_evolve(
            cfg.potential, field, cfg.window, cfg.system,
            steps_per_slice=cfg.options["steps_per_slice"],
        )
    else:
        evolution = time_slice_evolve(
            kernel, cfg.potential, field, cfg.window, cfg.system
        )
    rows = []
    for t, snapshot, norm in zip(evolution.times, evolution.fields,
                                 evolution.norms):
        mean, sigma = _field_moments(snapshot)
        rows.append((float(t), float(norm), mean, sigma))
    return ResultTable(columns=["t", "norm", "mean_x", "sigma_x"], rows=rows,
                       metadata={})


def _run_convergence(cfg: ScenarioConfig) -> ResultTable:
    field = _initial_field(cfg)
    t0 = cfg.window.t_start if cfg.window is not None else 0.0
    dts = cfg.options["dt_values"]
    errors = []
    rows = []
    for dt in dts:
        window = TimeWindow(t0, t0 + dt, 1)
        approx = time_slice_evolve(
            cfg.options["kernel"], cfg.potential, field, window, cfg.system
        )
        reference = reference_evolve(
            cfg.potential, field, window, cfg.system,
            steps_per_slice=cfg.options["reference_steps"],
        )
        err = l2_distance(approx.final, reference.final)
        errors.append(err)
        rows.append((float(dt), float(err), float("nan")))
    order = fit_convergence_order(np.asarray(dts), np.asarray(errors))
    rows.append((float("nan"), float("nan"), float(order)))
    return ResultTable(columns=["dt", "l2_error", "fitted_order"], rows=rows,
                       metadata={})


def _run_bohm(cfg: ScenarioConfig) -> ResultTable:
    field = _initial_field(cfg)
    evolution = reference_evolve(
        cfg.potential, field, cfg.window, cfg.system,
        steps_per_slice=cfg.options["steps_per_slice"],
    )
    rows = []
    for index, x_start in enumerate(cfg.options["x_starts"]):
        trajectory = integrate_bohm_trajectory(
            evolution, float(x_start), cfg.system,
            steps_per_interval=cfg.options["steps_per_interval"],
        )
        for t, x, p, q in zip(trajectory.times, trajectory.positions,
                              trajectory.momenta,
                              trajectory.quantum_potentials):
            rows.append((index, float(t), float(x), float(p), float(q)))
    return ResultTable(
        columns=["trajectory", "t", "x", "p", "quantum_potential"],
        rows=rows, metadata={},
    )


def _run_zeno(cfg: ScenarioConfig) -> ResultTable:
    window = cfg.window
    if window is None:
        raise ConfigError(["time: section required for zeno runs"])
    z0 = [cfg.options["x0"], cfg.options["p0"]]
    rows = []
    for n in cfg.options["n_observations"]:
        for sigma in cfg.options["sigma_meas"]:
            schedule = MeasurementSchedule(
                t_start=window.t_start, t_end=window.t_end,
                n_observations=int(n), sigma_meas=float(sigma),
                q_model=cfg.options["q_model"],
            )
            result = zeno_run_flow(
                cfg.potential, schedule, z0, cfg.system,
                steps_per_segment=cfg.options["steps_per_segment"],
            )
            rows.append((
                int(n), float(sigma),
                float(result.positions[-1, 0]), float(result.momenta[-1, 0]),
                result.endpoint_error,
            ))
    return ResultTable(
        columns=["n_observations", "sigma_meas", "endpoint_x", "endpoint_p",
                 "classical_error"],
        rows=rows, metadata={},
    )


def _run_mott(cfg: ScenarioConfig) -> ResultTable:
    rows = []
    for offset in range(cfg.options["n_tracks"]):
        track = mott_track(
            n_observations=cfg.options["n_observations"],
            sigma_meas=cfg.options["sigma_meas"],
            momentum=cfg.options["momentum"],
            duration=cfg.options["duration"],
            seed=int(cfg.seed) + offset,
            config=cfg.system,
            steps_per_segment=cfg.options["steps_per_segment"],
        )
        rows.append((
            track.seed,
            float(track.direction[0]), float(track.direction[1]),
            track.straightness,
            float(track.positions[-1, 0]), float(track.positions[-1, 1]),
        ))
    return ResultTable(
        columns=["seed", "direction_x", "direction_y", "straightness",
                 "final_x", "final_y"],
        rows=rows, metadata={},
    )


_RUNNERS = {
    "propagate": _run_propagate,
    "bohm": _run_bohm,
    "convergence": _run_convergence,
    "zeno": _run_zeno,
    "mott": _run_mott,
}


def run_scenario(cfg: ScenarioConfig) -> ResultTable:
    """Run one validated study and attach the run metadata."""
    started = time.perf_counter()
    table = _RUNNERS[cfg.task](cfg)
    elapsed = time.perf_counter() - started
    table.metadata = {
        "task": cfg.task,
        "config_sha256": cfg.config_sha256,
        "seed": "none" if cfg.seed is None else str(int(cfg.seed)),
        "package_version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "wall_time_s": "%.3f" % elapsed,
    }
    return table


def _emit_error(stage: str, messages) -> None:
    record = {"error": {"stage": stage, "messages": list(messages)}}
    print(json.dumps(record), file=sys.stderr)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bohmflow",
        description="Short-time propagators, Bohmian trajectories, and "
                    "measurement studies from TOML scenario configs.",
    )
    sub = parser.add_subparsers(dest="task", required=True)
    descriptions = {
        "propagate": "time-sliced kernel (or Crank-Nicolson) evolution",
        "bohm": "Bohmian trajectories through a reference evolution",
        "convergence": "single-slice kernel error against the reference",
        "zeno": "repeated-measurement flow runs (N or sigma_meas sweep)",
        "mott": "2-D straight-track demo with seeded emission directions",
    }
    for task in TASKS:
        p = sub.add_parser(task, help=descriptions[task])
        p.add_argument("--config", required=True, help="TOML scenario file")
        p.add_argument("--output", default=None,
                       help="output path ('-' for stdout; default from config)")
        p.add_argument("--format", default=None, choices=("csv", "json"),
                       help="output format (default from config, else csv)")
        p.add_argument("--seed", default=None, type=int,
                       help="seed override recorded in metadata")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        _emit_error("config-io", [str(exc)])
        return 2
    try:
        cfg = parse_config(
            text, args.task,
            seed=args.seed, output_path=args.output, output_format=args.format,
        )
    except ConfigError as exc:
        _emit_error("config", exc.violations)
        return 2
    try:
        table = run_scenario(cfg)
        table.write(cfg.output_path, cfg.output_format)
    except ConfigError as exc:
        _emit_error("config", exc.violations)
        return 2
    except Exception as exc:  # surfaced as a machine-readable record
        _emit_error("runtime", [f"{type(exc).__name__}: {exc}"])
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
