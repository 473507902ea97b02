"""Command-line front end: scenario files in, CSV/JSON artifacts out.

A scenario is one TOML file describing the system, the coils, the target
region, the placement, and solver knobs.  Commands:

  params      derived electrical parameters of both coils
  mutual      coupling curves over the region grid (exact and approximate)
  profile     delivered-power profile of a fixed placement + metrics
  place       placement optimization, then profile + report of the result
  structures  candidate ring-structure catalog for n_tx transmitters

Flags override config fields; --seed overrides solver.seed.  Exit codes:
0 success, 2 validation error, 3 I/O error, 4 internal numeric failure.

Reported metrics are recomputed from the rounded values written to
profile.csv, so re-ingesting the CSV reproduces metrics.json exactly.
"""

from __future__ import annotations

import argparse
import json
import math
import platform
import sys
import time
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .beamforming import Strategy
from .coils import CoilSpec, SystemConfig, derive_electrical
from .metrics import PowerProfile, Region, profile, sample_points, summarize
from .mutual import coupling_beta, mutual_field
from .placement_1d import SearchParams, optimize_placement_1d
from .placement_2d import (SearchParams2D, enumerate_structures,
                           is_rotationally_symmetric, optimize_placement_2d,
                           symmetry_order)

_PACKAGE_VERSION = "0.1.0"

_STRATEGIES = {
    "optimal": Strategy.OPTIMAL,
    "equal": Strategy.EQUAL,
    "selection": Strategy.SELECTION,
}


class ConfigError(ValueError):
    """Scenario content failed validation; message names the field path."""


def _section(doc: dict, name: str, required: bool = True) -> dict:
    sec = doc.get(name)
    if sec is None:
        if required:
            raise ConfigError(f"missing section [{name}]")
        return {}
    if not isinstance(sec, dict):
        raise ConfigError(f"[{name}] must be a table")
    return sec


_REQUIRED = object()


def _field(sec: dict, sec_name: str, key: str, kinds, default=_REQUIRED):
    if key not in sec:
        if default is _REQUIRED:
            raise ConfigError(f"{sec_name}.{key}: missing")
        return default
    value = sec[key]
    if kinds is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kinds) or isinstance(value, bool):
        names = kinds.__name__ if isinstance(kinds, type) else "/".join(
            k.__name__ for k in kinds)
        raise ConfigError(f"{sec_name}.{key}: expected {names}")
    return value


def _positive(sec, sec_name, key, kinds, default=_REQUIRED):
    value = _field(sec, sec_name, key, kinds, default)
    if value is not None and not value > 0:
        raise ConfigError(f"{sec_name}.{key}: must be > 0")
    return value


def _coil(doc: dict, name: str) -> CoilSpec:
    sec = _section(doc, name)
    try:
        return CoilSpec(
            coil_radius=_positive(sec, name, "radius_mm", float) / 1000.0,
            turns=_field(sec, name, "turns", int),
            wire_radius=_positive(sec, name, "wire_radius_mm", float) / 1000.0,
            resistivity=_positive(sec, name, "resistivity", float),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{name}: {exc}") from exc


class ScenarioConfig:
    """Parsed and validated scenario file."""

    def __init__(self, doc: dict):
        self.raw = doc
        system = _section(doc, "system")
        try:
            self.system = SystemConfig(
                angular_frequency=_positive(system, "system", "angular_frequency", float),
                power_budget=_positive(system, "system", "power_budget", float),
                receiver_height=_positive(system, "system", "receiver_height", float),
                load_resistance=_positive(system, "system", "load_resistance", float),
                tx_coil=_coil(doc, "tx_coil"),
                rx_coil=_coil(doc, "rx_coil"),
            )
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"system: {exc}") from exc

        region = _section(doc, "region")
        kind = _field(region, "region", "kind", str)
        if kind not in ("line", "disk"):
            raise ConfigError("region.kind: expected 'line' or 'disk'")
        sampling = dict(
            line_points=_field(region, "region", "line_points", int, 2001),
            disk_radial=_field(region, "region", "disk_radial", int, 101),
            disk_angular=_field(region, "region", "disk_angular", int, 360),
        )
        try:
            if kind == "line":
                self.region = Region(kind="line", height=self.system.receiver_height,
                                     half_length=_positive(region, "region", "half_length", float),
                                     **sampling)
            else:
                self.region = Region(kind="disk", height=self.system.receiver_height,
                                     radius=_positive(region, "region", "radius", float),
                                     **sampling)
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"region: {exc}") from exc

        run = _section(doc, "run", required=False)
        strategy = _field(run, "run", "strategy", str, "optimal")
        if strategy not in _STRATEGIES:
            raise ConfigError("run.strategy: expected optimal, equal, or selection")
        self.strategy = _STRATEGIES[strategy]
        self.mode = _field(run, "run", "mode", str, "exact")
        if self.mode not in ("exact", "approx"):
            raise ConfigError("run.mode: expected 'exact' or 'approx'")

        placement = _section(doc, "placement")
        self.placement_kind = _field(placement, "placement", "kind", str)
        if self.placement_kind not in ("explicit", "uniform", "optimized"):
            raise ConfigError(
                "placement.kind: expected explicit, uniform, or optimized")
        self.n_tx = _field(placement, "placement", "n_tx", int,
                           None if self.placement_kind == "explicit" else _REQUIRED)
        if self.n_tx is not None and self.n_tx < 1:
            raise ConfigError("placement.n_tx: must be >= 1")
        self.positions = None
        if self.placement_kind == "explicit":
            rows = _field(placement, "placement", "positions", list)
            self.positions = self._parse_positions(rows)

        solver = _section(doc, "solver", required=False)
        self.seed = _field(solver, "solver", "seed", int, 0)
        if self.seed < 0:
            raise ConfigError("solver.seed: must be >= 0")
        kw_1d = {}
        kw_2d = {}
        for key in ("epsilon", "delta"):
            if key in solver:
                kw_1d[key] = _positive(solver, "solver", key, float)
        for key in ("itr_max", "rpt_max"):
            if key in solver:
                kw_1d[key] = _field(solver, "solver", key, int)
        if "epsilon" in kw_1d:
            kw_2d["epsilon"] = kw_1d["epsilon"]
        for key in ("itr_max", "rpt_max"):
            if key in kw_1d:
                kw_2d[key] = kw_1d[key]
        try:
            self.solver_1d = SearchParams(**kw_1d)
            self.solver_2d = SearchParams2D(**kw_2d)
        except ValueError as exc:
            raise ConfigError(f"solver: {exc}") from exc

    def _parse_positions(self, rows) -> np.ndarray:
        pts = []
        for i, row in enumerate(rows):
            ok = isinstance(row, list) and len(row) == 2 and all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in row)
            if not ok:
                raise ConfigError(f"placement.positions[{i}]: expected [x, y] in m")
            pts.append([float(row[0]), float(row[1])])
        if not pts:
            raise ConfigError("placement.positions: must not be empty")
        arr = np.asarray(pts)
        if not np.all(np.isfinite(arr)):
            raise ConfigError("placement.positions: values must be finite")
        if self.region.kind == "line":
            if np.any(arr[:, 1] != 0.0):
                raise ConfigError("placement.positions: line scenarios need y = 0")
            if np.any(np.abs(arr[:, 0]) > self.region.half_length):
                raise ConfigError(
                    "placement.positions: x must lie within the target line")
        else:
            if np.any(np.hypot(arr[:, 0], arr[:, 1]) > self.region.radius + 1e-12):
                raise ConfigError(
                    "placement.positions: must lie within the transmitter disk")
        return arr

    def resolved_placement(self) -> np.ndarray:
        """Transmitter centers for non-optimizing commands."""
        if self.placement_kind == "explicit":
            return self.positions
        if self.placement_kind == "uniform":
            if self.region.kind != "line":
                raise ConfigError("placement.kind: uniform placement needs a line region")
            d = self.region.half_length
            x = np.linspace(-d, d, self.n_tx) if self.n_tx > 1 else np.zeros(1)
            return np.stack([x, np.zeros_like(x)], axis=1)
        raise ConfigError(
            "placement.kind: 'optimized' placements are produced by the place "
            "command; profile/mutual need explicit or uniform")

    @classmethod
    def load(cls, path: str) -> "ScenarioConfig":
        with open(path, "rb") as fh:
            try:
                doc = tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
        return cls(doc)


def _fmt9(value: float) -> str:
    value = float(value)
    if value == 0.0:
        value = 0.0
    return format(value, ".9g")


def _write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    lines.extend(",".join(_fmt9(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _read_profile_csv(path: Path) -> np.ndarray:
    lines = path.read_text().strip().splitlines()
    if not lines or lines[0] != "x,y,p0_watts":
        raise ConfigError(f"{path}: not a profile CSV")
    return np.array([[float(v) for v in line.split(",")] for line in lines[1:]])


def _metrics_dict(samples: np.ndarray, prof: PowerProfile) -> dict:
    rounded = PowerProfile(samples=samples, strategy=prof.strategy,
                           placement=prof.placement, region=prof.region)
    m = summarize(rounded)
    return {"p_avg_w": m.p_avg, "p_min_w": m.p_min, "p_max_w": m.p_max, "xi": m.xi}


def _versions() -> dict:
    import scipy
    return {
        "mrcwpt": _PACKAGE_VERSION,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def _write_json(path: Path, data: dict) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def _emit_profile(cfg: ScenarioConfig, placement: np.ndarray, out: Path) -> dict:
    prof = profile(placement, cfg.region, cfg.system, cfg.strategy, mode=cfg.mode)
    csv_path = out / "profile.csv"
    _write_csv(csv_path, "x,y,p0_watts", prof.samples)
    metrics = _metrics_dict(_read_profile_csv(csv_path), prof)
    _write_json(out / "metrics.json", metrics)
    return metrics


def _report(cfg: ScenarioConfig, command: str, results: dict, outputs: list,
            started: float) -> dict:
    return {
        "command": command,
        "config": cfg.raw,
        "seed": cfg.seed,
        "mode": cfg.mode,
        "outputs": sorted(outputs),
        "results": results,
        "versions": _versions(),
        "wall_clock_s": round(time.perf_counter() - started, 3),
    }


def cmd_params(cfg: ScenarioConfig, out: Path | None) -> int:
    w = cfg.system.angular_frequency
    data = {}
    for name, coil in (("tx", cfg.system.tx_coil), ("rx", cfg.system.rx_coil)):
        p = derive_electrical(coil, w)
        data[name] = {
            "resistance_ohm": p.resistance,
            "self_inductance_h": p.self_inductance,
            "compensator_capacitance_f": p.compensator_capacitance,
        }
    data["coupling_beta"] = coupling_beta(cfg.system.tx_coil, cfg.system.rx_coil)
    data["delivery_ceiling_w"] = (cfg.system.load_resistance / cfg.system.rx_resistance
                                  ) * cfg.system.power_budget
    text = json.dumps(data, indent=2, sort_keys=True)
    print(text)
    if out is not None:
        _write_json(out / "params.json", data)
    return 0


def cmd_mutual(cfg: ScenarioConfig, out: Path) -> int:
    placement = cfg.resolved_placement()
    pts = sample_points(cfg.region)
    z0 = cfg.system.receiver_height
    exact = mutual_field(placement, pts, cfg.system.tx_coil, cfg.system.rx_coil, z0,
                         mode="exact")
    approx = mutual_field(placement, pts, cfg.system.tx_coil, cfg.system.rx_coil, z0,
                          mode="approx")
    rows = []
    for n in range(placement.shape[0]):
        for k in range(pts.shape[0]):
            rows.append((n + 1, pts[k, 0], pts[k, 1], exact[k, n], approx[k, n]))
    _write_csv(out / "mutual.csv", "tx,x,y,h_exact,h_approx", rows)
    print(f"wrote {out / 'mutual.csv'} ({len(rows)} rows)")
    return 0


def cmd_profile(cfg: ScenarioConfig, out: Path) -> int:
    started = time.perf_counter()
    placement = cfg.resolved_placement()
    metrics = _emit_profile(cfg, placement, out)
    results = {"metrics": metrics,
               "placement": [[float(x), float(y)] for x, y in placement]}
    _write_json(out / "report.json",
                _report(cfg, "profile", results,
                        ["profile.csv", "metrics.json", "report.json"], started))
    print(f"p_avg={metrics['p_avg_w']:.4f} W  p_min={metrics['p_min_w']:.4f} W  "
          f"p_max={metrics['p_max_w']:.4f} W  xi={metrics['xi']:.4f}")
    return 0


def _place_line(cfg: ScenarioConfig) -> tuple:
    res = optimize_placement_1d(cfg.n_tx, cfg.system, cfg.region.half_length,
                                cfg.solver_1d, seed=cfg.seed)
    x = res.placement.positions()
    placement = np.stack([x, np.zeros_like(x)], axis=1)
    results = {
        "half_positions_m": [float(v) for v in res.placement.half_positions],
        "positions_m": [float(v) for v in x],
        "tau_star_w": res.tau_star,
        "certified_min_w": res.certified_min,
        "iterations": res.iterations,
    }
    return placement, results


def _place_disk(cfg: ScenarioConfig, threads: int) -> tuple:
    res = optimize_placement_2d(cfg.n_tx, cfg.system, cfg.region.radius,
                                cfg.solver_2d, seed=cfg.seed, threads=threads)
    entries = []
    for r in res.results:
        s = r.structure
        entries.append({
            "ring_size": symmetry_order(s),
            "rings": [{"count": ring.count, "radius_m": ring.radius,
                       "rotation_rad": ring.rotation} for ring in s.rings],
            "origin_count": s.origin_count,
            "tau_star_w": r.tau_star,
            "certified_min_w": r.certified_min,
            "iterations": r.iterations,
        })
    placement = res.selected.structure.positions()
    results = {"structures": entries, "selected_index": res.selected_index}
    return placement, results


def cmd_place(cfg: ScenarioConfig, out: Path, threads: int) -> int:
    started = time.perf_counter()
    if cfg.placement_kind != "optimized":
        raise ConfigError("placement.kind: place command needs 'optimized'")
    if cfg.region.kind == "line":
        if cfg.n_tx < 2:
            raise ConfigError("placement.n_tx: line optimization needs >= 2")
        placement, results = _place_line(cfg)
    else:
        placement, results = _place_disk(cfg, threads)
    results["metrics"] = _emit_profile(cfg, placement, out)
    _write_json(out / "report.json",
                _report(cfg, "place", results,
                        ["profile.csv", "metrics.json", "report.json"], started))
    if cfg.region.kind == "line":
        print(f"positions: {results['positions_m']}")
        print(f"tau_star={results['tau_star_w']:.4f} W  "
              f"certified_min={results['certified_min_w']:.4f} W")
    else:
        sel = results["structures"][results["selected_index"]]
        print(f"selected structure {results['selected_index']} "
              f"(ring_size={sel['ring_size']})  tau_star={sel['tau_star_w']:.4f} W  "
              f"certified_min={sel['certified_min_w']:.4f} W")
    return 0


def cmd_structures(cfg: ScenarioConfig, out: Path | None) -> int:
    if cfg.n_tx is None:
        raise ConfigError("placement.n_tx: required for the structures command")
    catalog = enumerate_structures(cfg.n_tx)
    entries = []
    for s in catalog.structures:
        entries.append({
            "ring_size": symmetry_order(s),
            "ring_counts": [r.count for r in s.rings],
            "origin_count": s.origin_count,
            "rotationally_symmetric": is_rotationally_symmetric(s),
        })
    data = {"n_tx": cfg.n_tx, "structures": entries}
    text = json.dumps(data, indent=2, sort_keys=True)
    print(text)
    if out is not None:
        _write_json(out / "structures.json", data)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mrcwpt",
        description="Magnetic-resonant wireless power transfer: beamforming, "
                    "power profiles, and transmitter placement.")
    parser.add_argument("command",
                        choices=["params", "mutual", "profile", "place", "structures"])
    parser.add_argument("--config", required=True, help="scenario TOML file")
    parser.add_argument("--seed", type=int, default=None,
                        help="override solver.seed")
    parser.add_argument("--mode", choices=["exact", "approx"], default=None,
                        help="override run.mode")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--threads", type=int, default=1,
                        help="parallel structure optimizations (place, disk)")
    return parser


def _dispatch(args) -> int:
    cfg = ScenarioConfig.load(args.config)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed: must be >= 0")
        cfg.seed = args.seed
    if args.mode is not None:
        cfg.mode = args.mode
    if args.threads < 1:
        raise ConfigError("--threads: must be >= 1")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.command == "params":
        return cmd_params(cfg, out)
    if args.command == "mutual":
        return cmd_mutual(cfg, out)
    if args.command == "profile":
        return cmd_profile(cfg, out)
    if args.command == "place":
        return cmd_place(cfg, out, args.threads)
    return cmd_structures(cfg, out)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with np.errstate(invalid="raise", over="raise"):
            return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # numeric or programming failure
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
