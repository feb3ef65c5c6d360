"""Command-line runner: scenario execution, CSV outputs, run manifest.

Scenarios map to the standard result sets: far-user outage with and without
relaying (fig2), spectral-efficiency and outage power sweeps (fig3, fig4),
and per-realization traces for each user (trace-near, trace-far). Every run
writes a plain-text manifest with the resolved configuration, checksums of
each output file, and derived metrics, enough to reproduce every CSV byte
for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path

from . import __version__
from .channel import Geometry, NoiseModel, PathLossParams
from .link import SwiptConfig
from .montecarlo import (
    ScenarioConfig,
    SweepResult,
    TraceResult,
    default_config,
    run_sweep,
    run_trace,
)
from .power_allocation import RateTarget

SCENARIOS = ("fig2", "fig3", "fig4", "trace-near", "trace-far", "all")

SWEEP_HEADER = "scenario,power_dbm,scheme,user,avg_se_bps_hz,outage_prob,dps_infeasible_frac,n_trials,seed"
TRACE_HEADER = "scenario,realization,scheme,user,se_bps_hz,reference_rate"


class ConfigError(ValueError):
    """Configuration file or value rejected; message names the offending field."""


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"expected a boolean (true/false), got {text!r}")


def _parse_power_list(text: str) -> tuple[float, ...]:
    parts = [p for p in (chunk.strip() for chunk in text.split(",")) if p]
    if not parts:
        raise ValueError("expected a comma-separated list of dBm values")
    return tuple(float(p) for p in parts)


_KEY_PARSERS = {
    "d_near_m": float,
    "d_far_m": float,
    "d_relay_m": float,
    "path_loss_exponent": float,
    "reference_distance_m": float,
    "shadowing_sigma_db": float,
    "bandwidth_hz": float,
    "noise_power_w": float,
    "target_rate_bps_hz": float,
    "fps_alpha_far": float,
    "harvest_fraction": float,
    "harvest_efficiency": float,
    "relay_enabled": _parse_bool,
    "half_rate_factor": float,
    "blocking_attenuation": float,
    "power_levels_dbm": _parse_power_list,
    "n_trials": int,
    "seed": int,
    "trace_power_dbm": float,
    "trace_realizations": int,
}


def _read_key_values(path: Path) -> dict:
    values = {}
    for lineno, raw_line in enumerate(path.read_text().splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw_line!r}")
        key, _, raw_value = line.partition("=")
        key = key.strip()
        if key not in _KEY_PARSERS:
            known = ", ".join(sorted(_KEY_PARSERS))
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}; known keys: {known}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _KEY_PARSERS[key](raw_value.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {key}: {exc}") from exc
    return values


def load_config(path) -> ScenarioConfig:
    """Parse a flat key = value scenario file; unset keys take the defaults.

    An empty file yields the full default configuration.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values = _read_key_values(path)
    defaults = default_config()
    try:
        geometry = Geometry(
            d_near=values.get("d_near_m", defaults.geometry.d_near),
            d_far=values.get("d_far_m"),
            d_relay=values.get("d_relay_m"),
        )
        path_loss = PathLossParams(
            exponent=values.get("path_loss_exponent", defaults.path_loss.exponent),
            reference_distance=values.get(
                "reference_distance_m", defaults.path_loss.reference_distance
            ),
            shadowing_sigma_db=values.get(
                "shadowing_sigma_db", defaults.path_loss.shadowing_sigma_db
            ),
        )
        bandwidth_hz = values.get("bandwidth_hz", defaults.noise.bandwidth_hz)
        if "noise_power_w" in values:
            noise = NoiseModel(noise_power_w=values["noise_power_w"], bandwidth_hz=bandwidth_hz)
        else:
            noise = NoiseModel.thermal(bandwidth_hz)
        return ScenarioConfig(
            geometry=geometry,
            path_loss=path_loss,
            noise=noise,
            target=RateTarget(values.get("target_rate_bps_hz", defaults.target.target_rate)),
            fps_alpha_far=values.get("fps_alpha_far", defaults.fps_alpha_far),
            swipt=SwiptConfig(
                harvest_fraction=values.get("harvest_fraction", defaults.swipt.harvest_fraction),
                harvest_efficiency=values.get(
                    "harvest_efficiency", defaults.swipt.harvest_efficiency
                ),
            ),
            relay_enabled=values.get("relay_enabled", defaults.relay_enabled),
            half_rate_factor=values.get("half_rate_factor", defaults.half_rate_factor),
            blocking_attenuation=values.get(
                "blocking_attenuation", defaults.blocking_attenuation
            ),
            power_levels_dbm=values.get("power_levels_dbm", defaults.power_levels_dbm),
            n_trials=values.get("n_trials", defaults.n_trials),
            seed=values.get("seed", defaults.seed),
            trace_power_dbm=values.get("trace_power_dbm", defaults.trace_power_dbm),
            trace_realizations=values.get("trace_realizations", defaults.trace_realizations),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def config_snapshot(config: ScenarioConfig) -> dict[str, str]:
    """Config as the flat key = value pairs accepted back by load_config.

    Floats use shortest round-trip repr so the snapshot reproduces the exact
    configuration (and therefore the exact output bytes).
    """
    return {
        "d_near_m": repr(config.geometry.d_near),
        "d_far_m": repr(config.geometry.d_far),
        "d_relay_m": repr(config.geometry.d_relay),
        "path_loss_exponent": repr(config.path_loss.exponent),
        "reference_distance_m": repr(config.path_loss.reference_distance),
        "shadowing_sigma_db": repr(config.path_loss.shadowing_sigma_db),
        "bandwidth_hz": repr(config.noise.bandwidth_hz),
        "noise_power_w": repr(config.noise.noise_power_w),
        "target_rate_bps_hz": repr(config.target.target_rate),
        "fps_alpha_far": repr(config.fps_alpha_far),
        "harvest_fraction": repr(config.swipt.harvest_fraction),
        "harvest_efficiency": repr(config.swipt.harvest_efficiency),
        "relay_enabled": "true" if config.relay_enabled else "false",
        "half_rate_factor": repr(config.half_rate_factor),
        "blocking_attenuation": repr(config.blocking_attenuation),
        "power_levels_dbm": ",".join(repr(p) for p in config.power_levels_dbm),
        "n_trials": str(config.n_trials),
        "seed": str(config.seed),
        "trace_power_dbm": repr(config.trace_power_dbm),
        "trace_realizations": str(config.trace_realizations),
    }


@dataclass(frozen=True)
class RunManifest:
    scenario: str
    seed: int
    version: str
    duration_s: float
    config: dict[str, str]
    files: dict[str, str]
    metrics: dict[str, str]

    def lines(self) -> list[str]:
        out = [
            f"tool = noma-swipt {self.version}",
            f"scenario = {self.scenario}",
            f"seed = {self.seed}",
            f"duration_s = {self.duration_s:.3f}",
        ]
        out.extend(f"config.{key} = {value}" for key, value in self.config.items())
        out.extend(f"file.{name}.sha256 = {digest}" for name, digest in self.files.items())
        out.extend(f"metric.{key} = {value}" for key, value in self.metrics.items())
        return out

    def write(self, path: Path) -> None:
        path.write_text("\n".join(self.lines()) + "\n")


def _fmt(value: float) -> str:
    return format(float(value), ".9g")


def _sweep_csv(label: str, sweeps: list[tuple[str, SweepResult]]) -> str:
    lines = [SWEEP_HEADER]
    for scenario_label, sweep in sweeps:
        for row in sweep.rows:
            lines.append(
                ",".join(
                    (
                        scenario_label,
                        _fmt(row.power_dbm),
                        row.scheme,
                        row.user,
                        _fmt(row.avg_se_bps_hz),
                        _fmt(row.outage_prob),
                        _fmt(row.dps_infeasible_frac),
                        str(row.n_trials),
                        str(row.seed),
                    )
                )
            )
    return "\n".join(lines) + "\n"


def _trace_csv(label: str, trace: TraceResult, user: str) -> str:
    lines = [TRACE_HEADER]
    for row in trace.rows:
        if row.user != user:
            continue
        lines.append(
            ",".join(
                (
                    label,
                    str(row.realization),
                    row.scheme,
                    row.user,
                    _fmt(row.se_bps_hz),
                    _fmt(row.reference_rate),
                )
            )
        )
    return "\n".join(lines) + "\n"


def _write_output(out_dir: Path, name: str, text: str, files: dict[str, str]) -> None:
    (out_dir / name).write_text(text)
    files[name] = hashlib.sha256(text.encode()).hexdigest()


def _se_ratio_metrics(sweep: SweepResult, metrics: dict[str, str]) -> None:
    # Low-power comparison points; reported, not asserted.
    for power_dbm in (0.0, 5.0, 10.0):
        if power_dbm not in sweep.config.power_levels_dbm:
            continue
        dps = sweep.point(power_dbm, "DPS", "near").avg_se_bps_hz
        fps = sweep.point(power_dbm, "FPS", "near").avg_se_bps_hz
        key = f"se_ratio_dps_over_fps_near_{_fmt(power_dbm)}dbm"
        metrics[key] = _fmt(dps / fps) if fps > 0 else "inf"


def _dps_outage_trend_metric(sweep: SweepResult, metrics: dict[str, str]) -> None:
    powers = sweep.config.power_levels_dbm
    first = sweep.point(powers[0], "DPS", "near").outage_prob
    last = sweep.point(powers[-1], "DPS", "near").outage_prob
    if last < first:
        trend = "decreasing"
    elif last > first:
        trend = "increasing"
    else:
        trend = "flat"
    metrics["dps_near_outage_trend"] = (
        f"{trend} ({_fmt(first)} at {_fmt(powers[0])} dBm -> {_fmt(last)} at {_fmt(powers[-1])} dBm)"
    )


def run_scenario(name: str, config: ScenarioConfig, output_dir, workers: int = 1) -> RunManifest:
    """Run one named scenario (or 'all') and write its CSVs plus the manifest."""
    if name not in SCENARIOS:
        raise ConfigError(f"scenario: expected one of {SCENARIOS}, got {name!r}")
    out_dir = Path(output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    files: dict[str, str] = {}
    metrics: dict[str, str] = {}

    wants = SCENARIOS[:-1] if name == "all" else (name,)

    if "fig2" in wants:
        with_relay = run_sweep(replace(config, relay_enabled=True), workers=workers)
        without_relay = run_sweep(replace(config, relay_enabled=False), workers=workers)
        text = _sweep_csv(
            "fig2", [("fig2-relay", with_relay), ("fig2-norelay", without_relay)]
        )
        _write_output(out_dir, "fig2.csv", text, files)

    if "fig3" in wants or "fig4" in wants:
        sweep = run_sweep(config, workers=workers)
        if "fig3" in wants:
            _write_output(out_dir, "fig3.csv", _sweep_csv("fig3", [("fig3", sweep)]), files)
            _se_ratio_metrics(sweep, metrics)
        if "fig4" in wants:
            _write_output(out_dir, "fig4.csv", _sweep_csv("fig4", [("fig4", sweep)]), files)
            _dps_outage_trend_metric(sweep, metrics)

    if "trace-near" in wants or "trace-far" in wants:
        trace = run_trace(config, config.trace_power_dbm, config.trace_realizations)
        if "trace-near" in wants:
            _write_output(out_dir, "trace-near.csv", _trace_csv("trace-near", trace, "near"), files)
        if "trace-far" in wants:
            _write_output(out_dir, "trace-far.csv", _trace_csv("trace-far", trace, "far"), files)

    manifest = RunManifest(
        scenario=name,
        seed=config.seed,
        version=__version__,
        duration_s=time.perf_counter() - started,
        config=config_snapshot(config),
        files=files,
        metrics=metrics,
    )
    manifest.write(out_dir / "run_manifest.txt")
    return manifest


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="noma-swipt",
        description="Two-user downlink NOMA Monte Carlo simulator with SWIPT relaying",
    )
    parser.add_argument("--config", type=Path, help="scenario file (flat key = value lines)")
    parser.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    parser.add_argument("--seed", type=int, help="override the configured seed")
    parser.add_argument("--trials", type=int, help="override the configured trial count")
    parser.add_argument("--scenario", choices=SCENARIOS, default="all")
    parser.add_argument("--workers", type=int, default=1, help="thread count for sweep blocks")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config) if args.config else default_config()
        if args.seed is not None:
            config = replace(config, seed=args.seed)
        if args.trials is not None:
            config = replace(config, n_trials=args.trials)
        manifest = run_scenario(args.scenario, config, args.out, workers=args.workers)
    except ValueError as exc:  # ConfigError or invariant violations from overrides
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    for file_name in manifest.files:
        print(f"wrote {Path(args.out) / file_name}")
    print(f"wrote {Path(args.out) / 'run_manifest.txt'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
