"""Per-realization link evaluation: SINRs, rates, harvested power, outages.

The far user decodes its own (high-power) message against the near user's
interference; the near user cancels the far message first (perfect SIC) and
decodes interference free, on the fraction of received power left after
energy harvesting. With relaying enabled, the near user spends its harvested
power to forward the far message, and the far user keeps the better of the
direct and relayed connections.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .power_allocation import PowerSplit, dps_split, fps_split

if TYPE_CHECKING:
    from .channel import ChannelDraw
    from .montecarlo import ScenarioConfig

SCHEMES = ("FPS", "DPS")

# Rates this close to the target (relative) count as meeting it. Guards the
# dynamic scheme, whose feasible realizations land on the target up to float
# rounding and must not flip into outage on the last ulp.
OUTAGE_REL_TOL = 1e-9


@dataclass(frozen=True)
class SwiptConfig:
    """Received-power split at the near user: harvest a fraction, decode the rest."""

    harvest_fraction: float = 0.7
    harvest_efficiency: float = 0.7

    def __post_init__(self):
        if not (0.0 <= self.harvest_fraction <= 1.0):
            raise ValueError(
                f"harvest_fraction: must lie in [0, 1], got {self.harvest_fraction!r}"
            )
        if not (0.0 < self.harvest_efficiency <= 1.0):
            raise ValueError(
                f"harvest_efficiency: must lie in (0, 1], got {self.harvest_efficiency!r}"
            )

    @property
    def decode_fraction(self) -> float:
        return 1.0 - self.harvest_fraction


@dataclass(frozen=True)
class LinkReport:
    """Everything one channel realization yields for one allocation scheme."""

    rate_near: float
    rate_far_direct: float
    rate_far_effective: float
    harvested_power_w: float
    split: PowerSplit
    outage_near: bool
    outage_far: bool
    dps_feasible: bool


def _far_rate(g, alpha_near, alpha_far, power_w, noise_w):
    """log2(1 + g*P*a_f / (g*P*a_n + sigma^2)); array friendly."""
    g_power = np.asarray(g, dtype=np.float64) * power_w
    return np.log2(1.0 + g_power * alpha_far / (g_power * alpha_near + noise_w))


def _near_rate(g, alpha_near, power_w, noise_w, decode_fraction):
    """log2(1 + decode_fraction * g*P*a_n / sigma^2); array friendly."""
    g_power = np.asarray(g, dtype=np.float64) * power_w
    return np.log2(1.0 + decode_fraction * g_power * alpha_near / noise_w)


def _relay_rate(harvested_w, g_relay, noise_w, half_rate_factor):
    return half_rate_factor * np.log2(
        1.0 + np.asarray(harvested_w, dtype=np.float64) * g_relay / noise_w
    )


def is_outage(rate, target_rate):
    """True where ``rate`` falls below the target (less a tiny float guard)."""
    return rate < target_rate * (1.0 - OUTAGE_REL_TOL)


def rate_far_direct(
    g_far: float, split: PowerSplit, transmit_power_w: float, noise_power_w: float
) -> float:
    """Far user's achievable rate on the direct link, in bps/Hz.

    With alpha_near == 0 this degenerates to the interference-free
    log2(1 + g*P/sigma^2).
    """
    _require_positive(transmit_power_w, noise_power_w)
    return float(_far_rate(g_far, split.alpha_near, split.alpha_far, transmit_power_w, noise_power_w))


def rate_near(
    g_near: float,
    split: PowerSplit,
    transmit_power_w: float,
    noise_power_w: float,
    swipt: SwiptConfig,
) -> float:
    """Near user's achievable rate after SIC, on the decoding power fraction."""
    _require_positive(transmit_power_w, noise_power_w)
    return float(
        _near_rate(g_near, split.alpha_near, transmit_power_w, noise_power_w, swipt.decode_fraction)
    )


def harvested_power(g_near: float, transmit_power_w: float, swipt: SwiptConfig) -> float:
    """Power banked by the near user: P * g_near * efficiency * harvest fraction."""
    if g_near < 0.0 or transmit_power_w < 0.0:
        raise ValueError("g_near and transmit_power_w must be >= 0")
    return float(transmit_power_w * g_near * swipt.harvest_efficiency * swipt.harvest_fraction)


def relay_rate(
    harvested_power_w: float,
    g_relay: float,
    noise_power_w: float,
    half_rate_factor: float = 1.0,
) -> float:
    """Rate of the near-to-far relay hop driven by harvested power.

    ``half_rate_factor`` of 1/2 charges the relay for its second time slot;
    the default of 1 does not.
    """
    if noise_power_w <= 0.0:
        raise ValueError("noise_power_w must be > 0")
    if harvested_power_w < 0.0 or g_relay < 0.0:
        raise ValueError("harvested_power_w and g_relay must be >= 0")
    return float(_relay_rate(harvested_power_w, g_relay, noise_power_w, half_rate_factor))


def evaluate_link(
    draw: "ChannelDraw", scheme: str, config: "ScenarioConfig", power_w: float
) -> LinkReport:
    """Evaluate one channel realization under one allocation scheme.

    The relay contributes only when enabled, and only if the near user can
    itself decode the far message (decode-and-forward); the far user then
    takes the better of the direct and relayed rates. The direct far link is
    scaled by the configured blocking attenuation.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"scheme: expected one of {SCHEMES}, got {scheme!r}")
    noise_w = config.noise.noise_power_w
    target = config.target
    g_far_direct = draw.g_far * config.blocking_attenuation

    if scheme == "FPS":
        split, feasible = fps_split(config.fps_alpha_far), True
    else:
        split, feasible = dps_split(g_far_direct, power_w, noise_w, target)

    r_near = rate_near(draw.g_near, split, power_w, noise_w, config.swipt)
    r_far_direct = rate_far_direct(g_far_direct, split, power_w, noise_w)
    harvested_w = harvested_power(draw.g_near, power_w, config.swipt)

    r_far_effective = r_far_direct
    if config.relay_enabled:
        # Forwarding requires the near user to decode the far message first;
        # its SINR for that message sees the near-user power as interference.
        g_near_power = draw.g_near * power_w
        sinr_far_msg_at_near = split.alpha_far * g_near_power / (
            split.alpha_near * g_near_power + noise_w
        )
        if sinr_far_msg_at_near >= target.target_sinr:
            r_relay = relay_rate(harvested_w, draw.g_relay, noise_w, config.half_rate_factor)
            r_far_effective = max(r_far_direct, r_relay)

    return LinkReport(
        rate_near=r_near,
        rate_far_direct=r_far_direct,
        rate_far_effective=r_far_effective,
        harvested_power_w=harvested_w,
        split=split,
        outage_near=bool(is_outage(r_near, target.target_rate)),
        outage_far=bool(is_outage(r_far_effective, target.target_rate)),
        dps_feasible=feasible,
    )


def _require_positive(transmit_power_w, noise_power_w):
    if transmit_power_w <= 0.0 or noise_power_w <= 0.0:
        raise ValueError("transmit_power_w and noise_power_w must be > 0")
