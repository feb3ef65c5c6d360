"""Reproducible trial ensembles: transmit-power sweeps and per-realization traces.

Both allocation schemes are always evaluated on the same channel draws
(common random numbers), so scheme and relay comparisons hold realization by
realization, not just on average. Aggregation runs over fixed-size trial
blocks combined in index order, which makes results bit-identical for any
worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import ChannelDraw, Geometry, NoiseModel, PathLossParams, sample_block, sample_draw
from .link import SCHEMES, LinkReport, SwiptConfig, evaluate_link, is_outage, _far_rate, _near_rate, _relay_rate
from .power_allocation import RateTarget, dps_alpha_far, fps_split

USERS = ("near", "far")

# Fixed reduction granularity; independent of worker count by design.
_BLOCK_TRIALS = 65536


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete simulation setup; every run is a pure function of this plus nothing."""

    geometry: Geometry = field(default_factory=Geometry)
    path_loss: PathLossParams = field(default_factory=PathLossParams)
    noise: NoiseModel = field(default_factory=NoiseModel.thermal)
    target: RateTarget = field(default_factory=lambda: RateTarget(1.0))
    fps_alpha_far: float = 0.8
    swipt: SwiptConfig = field(default_factory=SwiptConfig)
    relay_enabled: bool = True
    half_rate_factor: float = 1.0
    blocking_attenuation: float = 1.0
    power_levels_dbm: tuple[float, ...] = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    n_trials: int = 100_000
    seed: int = 12345
    trace_power_dbm: float = 0.0
    trace_realizations: int = 500

    def __post_init__(self):
        fps_split(self.fps_alpha_far)  # validates the fixed coefficient range
        if self.half_rate_factor not in (1.0, 0.5):
            raise ValueError(
                f"half_rate_factor: must be 1 or 0.5, got {self.half_rate_factor!r}"
            )
        if not (0.0 < self.blocking_attenuation <= 1.0):
            raise ValueError(
                f"blocking_attenuation: must lie in (0, 1], got {self.blocking_attenuation!r}"
            )
        powers = tuple(float(p) for p in self.power_levels_dbm)
        if not powers:
            raise ValueError("power_levels_dbm: need at least one power level")
        if any(not np.isfinite(p) for p in powers):
            raise ValueError(f"power_levels_dbm: levels must be finite, got {powers!r}")
        if any(a >= b for a, b in zip(powers, powers[1:])):
            raise ValueError(
                f"power_levels_dbm: levels must be strictly increasing, got {powers!r}"
            )
        object.__setattr__(self, "power_levels_dbm", powers)
        if self.n_trials < 1:
            raise ValueError(f"n_trials: must be >= 1, got {self.n_trials!r}")
        if not (0 <= self.seed < 2 ** 64):
            raise ValueError(f"seed: must be a 64-bit unsigned integer, got {self.seed!r}")
        if not np.isfinite(self.trace_power_dbm):
            raise ValueError(f"trace_power_dbm: must be finite, got {self.trace_power_dbm!r}")
        if self.trace_realizations < 1:
            raise ValueError(f"trace_realizations: must be >= 1, got {self.trace_realizations!r}")


def default_config(**overrides) -> ScenarioConfig:
    """Baseline two-user setup; keyword overrides replace individual fields."""
    cfg = ScenarioConfig()
    return replace(cfg, **overrides) if overrides else cfg


def dbm_to_watts(power_dbm: float) -> float:
    return float(10.0 ** ((power_dbm - 30.0) / 10.0))


@dataclass(frozen=True)
class TrialResult:
    """Both schemes evaluated on one shared channel draw."""

    power_dbm: float
    power_w: float
    draw: ChannelDraw
    fps: LinkReport
    dps: LinkReport


@dataclass(frozen=True)
class SweepPoint:
    power_dbm: float
    scheme: str
    user: str
    avg_se_bps_hz: float
    outage_prob: float
    dps_infeasible_frac: float
    n_trials: int
    seed: int


@dataclass(frozen=True)
class SweepResult:
    config: ScenarioConfig
    rows: tuple[SweepPoint, ...]

    def point(self, power_dbm: float, scheme: str, user: str) -> SweepPoint:
        for row in self.rows:
            if row.power_dbm == power_dbm and row.scheme == scheme and row.user == user:
                return row
        raise KeyError(f"no sweep point for ({power_dbm}, {scheme}, {user})")


@dataclass(frozen=True)
class TracePoint:
    realization: int
    scheme: str
    user: str
    se_bps_hz: float
    reference_rate: float


@dataclass(frozen=True)
class TraceResult:
    config: ScenarioConfig
    power_dbm: float
    rows: tuple[TracePoint, ...]

    def series(self, scheme: str, user: str) -> np.ndarray:
        values = [row.se_bps_hz for row in self.rows if row.scheme == scheme and row.user == user]
        return np.asarray(values, dtype=np.float64)


@dataclass(frozen=True)
class _SchemeBlock:
    rate_near: np.ndarray
    rate_far_direct: np.ndarray
    rate_far_effective: np.ndarray
    outage_near: np.ndarray
    outage_far: np.ndarray
    feasible: np.ndarray


def _evaluate_arrays(
    config: ScenarioConfig,
    power_w: float,
    g_near: np.ndarray,
    g_far: np.ndarray,
    g_relay: np.ndarray,
) -> dict[str, _SchemeBlock]:
    """Vectorized twin of link.evaluate_link over shared draw arrays."""
    noise_w = config.noise.noise_power_w
    sinr_target = config.target.target_sinr
    rate_target = config.target.target_rate
    swipt = config.swipt
    g_far_direct = g_far * config.blocking_attenuation
    harvested_w = power_w * g_near * swipt.harvest_efficiency * swipt.harvest_fraction

    result = {}
    for scheme in SCHEMES:
        if scheme == "FPS":
            alpha_far = config.fps_alpha_far
            alpha_near = 1.0 - alpha_far
            feasible = np.ones(g_near.shape, dtype=bool)
        else:
            raw = dps_alpha_far(g_far_direct, power_w, noise_w, sinr_target)
            feasible = raw <= 1.0
            alpha_far = np.where(raw > 1.0, 1.0, raw)
            alpha_near = 1.0 - alpha_far

        r_near = _near_rate(g_near, alpha_near, power_w, noise_w, swipt.decode_fraction)
        r_far_direct = _far_rate(g_far_direct, alpha_near, alpha_far, power_w, noise_w)
        r_far_effective = r_far_direct
        if config.relay_enabled:
            g_near_power = g_near * power_w
            sinr_far_msg = alpha_far * g_near_power / (alpha_near * g_near_power + noise_w)
            r_relay = _relay_rate(harvested_w, g_relay, noise_w, config.half_rate_factor)
            r_far_effective = np.where(
                sinr_far_msg >= sinr_target, np.maximum(r_far_direct, r_relay), r_far_direct
            )

        result[scheme] = _SchemeBlock(
            rate_near=r_near,
            rate_far_direct=r_far_direct,
            rate_far_effective=r_far_effective,
            outage_near=is_outage(r_near, rate_target),
            outage_far=is_outage(r_far_effective, rate_target),
            feasible=feasible,
        )
    return result


def run_trial(config: ScenarioConfig, power_dbm: float, trial_index: int) -> TrialResult:
    """One realization, both schemes, on one shared channel draw."""
    power_w = dbm_to_watts(power_dbm)
    draw = sample_draw(config.geometry, config.path_loss, trial_index, config.seed)
    return TrialResult(
        power_dbm=power_dbm,
        power_w=power_w,
        draw=draw,
        fps=evaluate_link(draw, "FPS", config, power_w),
        dps=evaluate_link(draw, "DPS", config, power_w),
    )


# Per-(power, scheme) partial sums: se_near, se_far, outages near/far, infeasible count.
_N_STATS = 5


def _sweep_block(config: ScenarioConfig, powers_w: list[float], lo: int, hi: int) -> np.ndarray:
    g_near, g_far, g_relay = sample_block(config.geometry, config.path_loss, lo, hi, config.seed)
    partial = np.zeros((len(powers_w), len(SCHEMES), _N_STATS))
    for p_idx, power_w in enumerate(powers_w):
        evaluated = _evaluate_arrays(config, power_w, g_near, g_far, g_relay)
        for s_idx, scheme in enumerate(SCHEMES):
            block = evaluated[scheme]
            partial[p_idx, s_idx, 0] = np.sum(block.rate_near)
            partial[p_idx, s_idx, 1] = np.sum(block.rate_far_effective)
            partial[p_idx, s_idx, 2] = np.count_nonzero(block.outage_near)
            partial[p_idx, s_idx, 3] = np.count_nonzero(block.outage_far)
            partial[p_idx, s_idx, 4] = hi - lo - np.count_nonzero(block.feasible)
    return partial


def run_sweep(config: ScenarioConfig, workers: int = 1) -> SweepResult:
    """Average spectral efficiency and outage per (power level, scheme, user).

    ``workers`` only distributes fixed trial blocks across threads; the
    combined totals are identical for every worker count.
    """
    if workers < 1:
        raise ValueError(f"workers: must be >= 1, got {workers!r}")
    powers_w = [dbm_to_watts(p) for p in config.power_levels_dbm]
    bounds = [
        (lo, min(lo + _BLOCK_TRIALS, config.n_trials))
        for lo in range(0, config.n_trials, _BLOCK_TRIALS)
    ]
    if workers == 1 or len(bounds) == 1:
        partials = [_sweep_block(config, powers_w, lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(lambda b: _sweep_block(config, powers_w, *b), bounds))

    totals = np.zeros((len(powers_w), len(SCHEMES), _N_STATS))
    for partial in partials:  # fixed block order keeps float sums reproducible
        totals += partial

    n = config.n_trials
    rows = []
    for p_idx, power_dbm in enumerate(config.power_levels_dbm):
        for s_idx, scheme in enumerate(SCHEMES):
            se_sum_near, se_sum_far, out_near, out_far, infeasible = totals[p_idx, s_idx]
            infeasible_frac = infeasible / n if scheme == "DPS" else 0.0
            for user, se_sum, outages in (
                ("near", se_sum_near, out_near),
                ("far", se_sum_far, out_far),
            ):
                rows.append(
                    SweepPoint(
                        power_dbm=power_dbm,
                        scheme=scheme,
                        user=user,
                        avg_se_bps_hz=se_sum / n,
                        outage_prob=outages / n,
                        dps_infeasible_frac=infeasible_frac,
                        n_trials=n,
                        seed=config.seed,
                    )
                )
    return SweepResult(config=config, rows=tuple(rows))


def run_trace(config: ScenarioConfig, power_dbm: float, n_realizations: int) -> TraceResult:
    """Per-realization spectral efficiencies at one power level.

    Both schemes are paired on common draws. The far-user entries report the
    direct-link rate: traces compare the allocation schemes themselves, so
    relay assistance is left out of them by construction.
    """
    if n_realizations < 1:
        raise ValueError(f"n_realizations: must be >= 1, got {n_realizations!r}")
    power_w = dbm_to_watts(power_dbm)
    g_near, g_far, g_relay = sample_block(
        config.geometry, config.path_loss, 0, n_realizations, config.seed
    )
    evaluated = _evaluate_arrays(config, power_w, g_near, g_far, g_relay)
    reference = config.target.target_rate
    rows = []
    for realization in range(n_realizations):
        for scheme in SCHEMES:
            block = evaluated[scheme]
            rows.append(
                TracePoint(
                    realization=realization,
                    scheme=scheme,
                    user="near",
                    se_bps_hz=float(block.rate_near[realization]),
                    reference_rate=reference,
                )
            )
            rows.append(
                TracePoint(
                    realization=realization,
                    scheme=scheme,
                    user="far",
                    se_bps_hz=float(block.rate_far_direct[realization]),
                    reference_rate=reference,
                )
            )
    return TraceResult(config=config, power_dbm=power_dbm, rows=tuple(rows))
