"""Two-user downlink NOMA Monte Carlo simulator with SWIPT-powered relaying."""

__version__ = "0.1.0"

from .channel import (
    ChannelDraw,
    Geometry,
    NoiseModel,
    PathLossParams,
    mean_channel_gain,
    sample_block,
    sample_draw,
)
from .link import LinkReport, SwiptConfig, evaluate_link, harvested_power, rate_far_direct, rate_near, relay_rate
from .montecarlo import (
    ScenarioConfig,
    SweepResult,
    TraceResult,
    TrialResult,
    dbm_to_watts,
    default_config,
    run_sweep,
    run_trace,
    run_trial,
)
from .power_allocation import PowerSplit, RateTarget, dps_split, fps_split, target_sinr

__all__ = [
    "ChannelDraw",
    "Geometry",
    "LinkReport",
    "NoiseModel",
    "PathLossParams",
    "PowerSplit",
    "RateTarget",
    "ScenarioConfig",
    "SweepResult",
    "SwiptConfig",
    "TraceResult",
    "TrialResult",
    "dbm_to_watts",
    "default_config",
    "dps_split",
    "evaluate_link",
    "fps_split",
    "harvested_power",
    "mean_channel_gain",
    "rate_far_direct",
    "rate_near",
    "relay_rate",
    "run_sweep",
    "run_trace",
    "run_trial",
    "sample_block",
    "sample_draw",
    "target_sinr",
]
