"""Reproducible runs driven by JSON configs.

Subcommands: run, spectrum, stability, instability, sweep, minimize,
validate.  Every run is a pure function of (config, seed): numeric
output files are byte-identical across repeats, floats are written with
17 significant digits (lossless double round-trip), and each file
embeds the config hash and package version.

Exit codes: 0 success; 1 malformed config (schema); 2 physics rejection
(a modelling rule, cited in the message); 3 runtime numeric failure.
On any error a machine-parsable JSON record goes to stderr.

Formats: time series and tables are comma-separated text with one
header row (metadata travels in leading '#' comment lines); structured
reports are JSON.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .core import FieldState, Grid1D, ImpurityParams, deviation_norm, make_grid, make_state, zero_state
from .dynamics import evolve
from .errors import (
    CflError,
    ConfigError,
    GridError,
    NoH1WaveError,
    NumericsError,
    PhysicsError,
    SgDeltaError,
    SubluminalError,
)
from .experiments import (
    band_limited_noise,
    instability_trial,
    minimize_energy,
    scattering_sweep,
    stability_trial,
)
from .spectrum import assemble_linearized, eigen_bottom
from .waves import boosted_kink_state, ground_state, kink_profile

__all__ = ["RunConfig", "parse_config", "serialize_config", "config_hash", "dispatch", "main"]

SUBCOMMANDS = ("run", "spectrum", "stability", "instability", "sweep", "minimize", "validate")
_SCENARIO_ALIASES = {"scatter": "sweep", "ground_state": "run", "kink": "run"}
WAVE_KINDS = ("kink", "ground_state", "boosted_kink", "zero")


@dataclass(frozen=True)
class RunConfig:
    """Fully validated run description with documented defaults."""

    scenario: str = "run"
    q: float = -1.0
    delta_mode: str = "sharp"
    eps: float | None = None
    pairing: str = "scalar"
    L: float = 20.0
    N: int = 4001
    dt: float | None = None  # None -> dx/2
    T: float = 10.0
    wave: str = "kink"
    x0: float = 0.0
    v: float = 0.0
    amplitudes: tuple[float, ...] = (1e-3, 1e-2)
    speeds: tuple[float, ...] = (0.1, 0.3, 0.5, 0.8)
    seed_amplitude: float = 1e-4
    sector: str = "degree1"
    init_wave: str = "kink"
    init_shift: float = 0.0
    init_scale: float = 1.0
    k_eigen: int = 6
    criteria: tuple[int, ...] | None = None
    seed: int = 0
    output_stride: int = 100
    snapshot_stride: int | None = None
    threads: int = 1

    @property
    def spacing(self) -> float:
        return 2.0 * self.L / (self.N - 1)

    @property
    def timestep(self) -> float:
        return 0.5 * self.spacing if self.dt is None else self.dt


_FIELD_TYPES = {f.name: f for f in dataclasses.fields(RunConfig)}


def _coerce(name: str, value):
    """Schema-level coercion with field-based messages."""
    if value is None:
        return None
    try:
        if name in ("N", "seed", "output_stride", "snapshot_stride", "threads", "k_eigen"):
            out = int(value)
            if out != float(value):
                raise ValueError
            return out
        if name in ("amplitudes", "speeds"):
            return tuple(float(x) for x in value)
        if name == "criteria":
            return tuple(int(x) for x in value)
        if name in ("scenario", "delta_mode", "pairing", "wave", "sector", "init_wave"):
            return str(value)
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"field '{name}': cannot read {value!r}") from None


def parse_config(document: str | dict | None) -> RunConfig:
    """Validate a JSON document (or dict) into a RunConfig.

    Unknown keys are rejected; physics-invalid values are rejected with
    the governing rule cited.  An empty document yields all defaults.
    """
    if document is None:
        raw = {}
    elif isinstance(document, str):
        try:
            raw = json.loads(document) if document.strip() else {}
        except json.JSONDecodeError as err:
            raise ConfigError(f"config is not valid JSON: {err}") from None
    else:
        raw = dict(document)
    if not isinstance(raw, dict):
        raise ConfigError("config document must be a JSON object")

    unknown = sorted(set(raw) - set(_FIELD_TYPES))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    values = {}
    for name, value in raw.items():
        values[name] = _coerce(name, value)

    scenario = values.get("scenario", "run")
    if scenario in _SCENARIO_ALIASES:
        if scenario == "ground_state":
            values.setdefault("wave", "ground_state")
        values["scenario"] = _SCENARIO_ALIASES[scenario]
    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.scenario not in SUBCOMMANDS:
        raise ConfigError(
            f"scenario must be one of {', '.join(SUBCOMMANDS)}, got {cfg.scenario!r}"
        )
    if not cfg.L > 0:
        raise ConfigError(f"L must be positive, got {cfg.L}")
    if cfg.N < 3 or cfg.N % 2 == 0:
        raise GridError(
            f"N must be an odd integer >= 3 so a node sits at x = 0 "
            f"(impurity quadrature and gluing condition), got {cfg.N}"
        )
    if cfg.wave not in WAVE_KINDS:
        raise ConfigError(f"wave must be one of {', '.join(WAVE_KINDS)}, got {cfg.wave!r}")
    if cfg.delta_mode not in ("sharp", "mollified"):
        raise ConfigError(f"delta_mode must be sharp|mollified, got {cfg.delta_mode!r}")
    if cfg.pairing not in ("scalar", "pointwise"):
        raise ConfigError(f"pairing must be scalar|pointwise, got {cfg.pairing!r}")
    if cfg.sector not in ("free", "degree1"):
        raise ConfigError(f"sector must be free|degree1, got {cfg.sector!r}")
    if cfg.init_wave not in ("kink", "ground_state", "zero", "noise"):
        raise ConfigError(f"init_wave must be kink|ground_state|zero|noise, got {cfg.init_wave!r}")
    if cfg.T <= 0:
        raise PhysicsError(f"horizon T must be positive, got {cfg.T}")
    if cfg.dt is not None and not 0 < cfg.dt <= 0.9 * cfg.spacing:
        raise CflError(
            f"dt={cfg.dt} violates the stability bound dt <= 0.9*dx = {0.9 * cfg.spacing:.6g}"
        )
    if cfg.delta_mode == "mollified":
        if cfg.eps is None:
            raise ConfigError("mollified mode needs eps")
        if cfg.eps < 2.0 * cfg.spacing:
            raise PhysicsError(
                f"mollifier width eps={cfg.eps} under-resolved: need eps >= 2*dx = "
                f"{2.0 * cfg.spacing:.6g}"
            )
    if cfg.wave == "boosted_kink" and not abs(cfg.v) < 1.0:
        raise SubluminalError(
            f"|v| < 1 required: traveling kinks are subluminal, got v={cfg.v}"
        )
    if cfg.wave == "ground_state" and not abs(cfg.q) > 2.0:
        raise NoH1WaveError(
            f"no H1 stationary wave exists for |q| <= 2 (existence classification); "
            f"got q={cfg.q}"
        )
    if cfg.scenario == "sweep":
        bad = [v for v in cfg.speeds if not 0 < v < 1]
        if bad:
            raise SubluminalError(
                f"sweep speeds must lie in (0, 1) (subluminal, incoming): {bad}"
            )
    if cfg.scenario == "stability":
        amps = cfg.amplitudes
        if any(a < 0 for a in amps) or list(amps) != sorted(amps):
            raise PhysicsError("amplitudes must be nonnegative and increasing")
    if cfg.scenario == "instability" and cfg.wave == "zero":
        raise ConfigError("instability trials need a stationary wave background")
    if cfg.k_eigen < 1:
        raise ConfigError("k_eigen must be >= 1")
    if cfg.criteria is not None and any(not 1 <= c <= 12 for c in cfg.criteria):
        raise ConfigError("criteria must be a list of numbers in 1..12")
    if cfg.output_stride < 1 or (cfg.snapshot_stride is not None and cfg.snapshot_stride < 1):
        raise ConfigError("strides must be >= 1")
    if cfg.threads < 1:
        raise ConfigError("threads must be >= 1")


def serialize_config(cfg: RunConfig) -> dict:
    """Default-expanded, JSON-ready view; parse_config round-trips it."""
    out = dataclasses.asdict(cfg)
    for key in ("amplitudes", "speeds", "criteria"):
        if out[key] is not None:
            out[key] = list(out[key])
    return out


def config_hash(cfg: RunConfig) -> str:
    doc = json.dumps(serialize_config(cfg), sort_keys=True)
    return hashlib.sha256(doc.encode()).hexdigest()[:16]


# -- artifact writers -----------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _write_csv(path: Path, header: list[str], rows, cfg: RunConfig) -> None:
    lines = [
        f"# sgdelta {__version__}",
        f"# config_sha256 {config_hash(cfg)}",
        ",".join(header),
    ]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n")


def _write_json(path: Path, payload: dict, cfg: RunConfig) -> None:
    doc = {
        "_meta": {
            "version": __version__,
            "config_sha256": config_hash(cfg),
            "config": serialize_config(cfg),
        },
        **payload,
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# -- scenario plumbing ------------------------------------------------------------

def _build_grid(cfg: RunConfig) -> Grid1D:
    return make_grid(cfg.L, cfg.N)


def _build_wave(cfg: RunConfig, grid: Grid1D) -> FieldState:
    if cfg.wave == "kink":
        return kink_profile(grid, x0=cfg.x0)
    if cfg.wave == "ground_state":
        return ground_state(grid, cfg.q)
    if cfg.wave == "boosted_kink":
        return boosted_kink_state(grid, v=cfg.v, x0=cfg.x0)
    return zero_state(grid)


def _params(cfg: RunConfig) -> ImpurityParams:
    return ImpurityParams(q=cfg.q, delta_mode=cfg.delta_mode, eps=cfg.eps, pairing=cfg.pairing)


def _cmd_run(cfg: RunConfig, out: Path) -> int:
    grid = _build_grid(cfg)
    wave = _build_wave(cfg, grid)
    traj = evolve(
        wave,
        _params(cfg),
        cfg.T,
        dt=cfg.timestep,
        output_stride=cfg.output_stride,
        snapshot_stride=cfg.snapshot_stride,
        probe=lambda s: {"dev_from_datum": deviation_norm(s, wave).total},
    )
    rows = [
        (
            rec["t"], e.kinetic, e.gradient, e.potential, e.delta_term, e.total,
            rec["drift"], rec["norm_ratio"], rec["dev_from_datum"],
        )
        for rec, e in zip(traj.records, traj.energies)
    ]
    _write_csv(
        out / "energies.csv",
        ["t", "kinetic", "gradient", "potential", "delta_term", "total",
         "drift", "norm_ratio", "dev_from_datum"],
        rows,
        cfg,
    )
    snap_rows = []
    for s in traj.snapshots:
        snap_rows.extend(zip([s.t] * grid.node_count, grid.x, s.u1, s.u2))
    _write_csv(out / "snapshots.csv", ["t", "x", "u1", "u2"], snap_rows, cfg)
    _write_json(out / "summary.json", {"metadata": traj.metadata}, cfg)
    return 0


def _cmd_spectrum(cfg: RunConfig, out: Path) -> int:
    if cfg.wave == "boosted_kink":
        raise PhysicsError("spectrum needs a stationary background (kink, ground_state, zero)")
    grid = _build_grid(cfg)
    wave = _build_wave(cfg, grid)
    rep = eigen_bottom(assemble_linearized(wave, cfg.q), k=cfg.k_eigen)
    _write_json(
        out / "spectrum.json",
        {
            "background": cfg.wave,
            "q": cfg.q,
            "eigenvalues": [float(v) for v in rep.eigenvalues],
            "morse_index": rep.morse_index,
            "has_zero_mode": rep.has_zero_mode,
            "tol_zero": rep.tol_zero,
            "ess_edge_estimate": rep.ess_edge_estimate,
            "growth_rate": rep.growth_rate,
            "max_residual": rep.max_residual,
        },
        cfg,
    )
    header = ["x"] + [f"v{i+1}" for i in range(cfg.k_eigen)]
    rows = np.column_stack([grid.x, rep.eigenvectors])
    _write_csv(out / "eigenvectors.csv", header, rows, cfg)
    return 0


def _cmd_stability(cfg: RunConfig, out: Path) -> int:
    grid = _build_grid(cfg)
    wave = _build_wave(cfg, grid)
    rep = stability_trial(
        wave, cfg.q, cfg.amplitudes, cfg.T, dt=cfg.timestep, seed=cfg.seed,
        wave_kind=cfg.wave,
    )
    _write_json(out / "stability.json", dataclasses.asdict(rep), cfg)
    _write_csv(
        out / "stability.csv",
        ["amplitude", "sup_deviation", "ratio"],
        zip(rep.amplitudes, rep.sup_deviations, rep.ratios),
        cfg,
    )
    return 0


def _cmd_instability(cfg: RunConfig, out: Path) -> int:
    grid = _build_grid(cfg)
    wave = _build_wave(cfg, grid)
    rep = instability_trial(
        wave, cfg.q, cfg.seed_amplitude, cfg.T, dt=cfg.timestep, wave_kind=cfg.wave
    )
    _write_json(out / "instability.json", dataclasses.asdict(rep), cfg)
    return 0


def _cmd_sweep(cfg: RunConfig, out: Path) -> int:
    grid = _build_grid(cfg)
    # launch point defaults to -10 (kink well clear of the impurity)
    launch = cfg.x0 if cfg.x0 != 0.0 else -10.0
    outs = scattering_sweep(
        cfg.q, cfg.speeds, grid, dt=cfg.timestep, x0=launch, threads=cfg.threads,
    )
    _write_csv(
        out / "sweep.csv",
        ["q", "speed", "outcome", "final_center", "mean_velocity", "energy_drift", "t_end"],
        [
            (o.q, o.speed, o.outcome, o.final_center, o.mean_velocity, o.energy_drift, o.horizon)
            for o in outs
        ],
        cfg,
    )
    _write_json(out / "sweep.json", {"outcomes": [dataclasses.asdict(o) for o in outs]}, cfg)
    return 0


def _cmd_minimize(cfg: RunConfig, out: Path) -> int:
    grid = _build_grid(cfg)
    if cfg.init_wave == "kink":
        init = kink_profile(grid, x0=cfg.init_shift)
    elif cfg.init_wave == "ground_state":
        init = ground_state(grid, cfg.q)
    elif cfg.init_wave == "noise":
        rng = np.random.default_rng(cfg.seed)
        init = make_state(grid, 0.05 * band_limited_noise(grid, rng), np.zeros(grid.node_count))
    else:
        init = zero_state(grid)
    if cfg.init_scale != 1.0:
        init = make_state(grid, cfg.init_scale * init.u1, init.u2)
    rep = minimize_energy(cfg.q, cfg.sector, init)
    payload = {
        "sector": rep.sector,
        "q": rep.q,
        "final_energy": rep.final_energy,
        "nearest_wave": rep.nearest_wave,
        "distance": rep.distance,
        "iterations": rep.iterations,
        "converged": rep.converged,
        "residual_interior": rep.residual_interior,
        "residual_interface": rep.residual_interface,
    }
    _write_json(out / "minimize.json", payload, cfg)
    _write_csv(out / "energy_series.csv", ["iteration", "energy"],
               list(enumerate(rep.energy_series)), cfg)
    _write_csv(out / "profile.csv", ["x", "u1"], zip(grid.x, rep.final_profile), cfg)
    return 0


def _cmd_validate(cfg: RunConfig, out: Path) -> int:
    from .acceptance import run_criteria

    results = run_criteria(cfg.criteria, echo=print)
    payload = {
        "results": [dataclasses.asdict(r) for r in results],
        "all_passed": all(r.passed for r in results),
    }
    _write_json(out / "validate.json", payload, cfg)
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return 0 if payload["all_passed"] else 3


_COMMANDS = {
    "run": _cmd_run,
    "spectrum": _cmd_spectrum,
    "stability": _cmd_stability,
    "instability": _cmd_instability,
    "sweep": _cmd_sweep,
    "minimize": _cmd_minimize,
    "validate": _cmd_validate,
}


def dispatch(cfg: RunConfig, out_dir: str | Path = "sgdelta-out") -> int:
    """Run the configured scenario, writing artifacts into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return _COMMANDS[cfg.scenario](cfg, out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sgdelta",
        description="sine-Gordon + point impurity laboratory (reproducible runs)",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None, help="JSON config path")
        p.add_argument("--out", type=str, default="sgdelta-out", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override RNG seed")
        p.add_argument("--threads", type=int, default=None, help="parallel sweep jobs")
        if name == "validate":
            p.add_argument(
                "--criteria", type=str, default=None,
                help="comma-separated criterion numbers (default: all)",
            )
    args = parser.parse_args(argv)

    try:
        doc = {}
        if args.config is not None:
            doc = json.loads(Path(args.config).read_text())
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")
        doc["scenario"] = args.subcommand
        if args.seed is not None:
            doc["seed"] = args.seed
        if args.threads is not None:
            doc["threads"] = args.threads
        if getattr(args, "criteria", None):
            doc["criteria"] = [int(c) for c in args.criteria.split(",")]
        cfg = parse_config(doc)
        return dispatch(cfg, args.out)
    except SgDeltaError as err:
        code = 1 if isinstance(err, ConfigError) else 2 if isinstance(err, PhysicsError) else 3
        record = {"error": type(err).__name__, "message": str(err), "exit_code": code}
        print(json.dumps(record), file=sys.stderr)
        return code
    except json.JSONDecodeError as err:
        record = {"error": "ConfigError", "message": f"config is not valid JSON: {err}", "exit_code": 1}
        print(json.dumps(record), file=sys.stderr)
        return 1
    except NumericsError as err:  # pragma: no cover - SgDeltaError covers it
        record = {"error": type(err).__name__, "message": str(err), "exit_code": 3}
        print(json.dumps(record), file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
