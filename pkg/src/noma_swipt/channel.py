"""Large-scale path loss plus Rayleigh small-scale fading, sampled reproducibly.

Squared channel gains are exponential variates whose mean follows a
log-distance path-loss law, optionally scaled by log-normal shadowing.
Sampling is counter-based: every draw is a pure function of
(seed, trial_index, link id), so any trial can be regenerated in isolation
and block or worker boundaries never change the numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

# Link ids select independent random substreams.
LINK_NEAR = 0
LINK_FAR = 1
LINK_RELAY = 2

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_U53 = 2.0 ** -53


@dataclass(frozen=True)
class Geometry:
    """Node distances in meters.

    ``d_far`` defaults to twice ``d_near`` and ``d_relay`` (near user to far
    user) defaults to ``d_far - d_near``, i.e. the three nodes on a line.
    """

    d_near: float = 10.0
    d_far: float | None = None
    d_relay: float | None = None

    def __post_init__(self):
        if self.d_far is None:
            object.__setattr__(self, "d_far", 2.0 * self.d_near)
        if self.d_relay is None:
            object.__setattr__(self, "d_relay", self.d_far - self.d_near)
        for name in ("d_near", "d_far", "d_relay"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name}: distance must be finite and > 0 m, got {value!r}")


@dataclass(frozen=True)
class PathLossParams:
    """Log-distance path-loss law with optional log-normal shadowing (dB)."""

    exponent: float = 4.0
    reference_distance: float = 1.0
    shadowing_sigma_db: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.exponent) or self.exponent <= 0.0:
            raise ValueError(f"exponent: must be finite and > 0, got {self.exponent!r}")
        if not np.isfinite(self.reference_distance) or self.reference_distance <= 0.0:
            raise ValueError(
                f"reference_distance: must be finite and > 0 m, got {self.reference_distance!r}"
            )
        if not np.isfinite(self.shadowing_sigma_db) or self.shadowing_sigma_db < 0.0:
            raise ValueError(
                f"shadowing_sigma_db: must be finite and >= 0 dB, got {self.shadowing_sigma_db!r}"
            )


@dataclass(frozen=True)
class NoiseModel:
    """Total noise power (watts) and the bandwidth it was computed over."""

    noise_power_w: float
    bandwidth_hz: float = 10e9

    def __post_init__(self):
        if not np.isfinite(self.noise_power_w) or self.noise_power_w <= 0.0:
            raise ValueError(f"noise_power_w: must be finite and > 0 W, got {self.noise_power_w!r}")
        if not np.isfinite(self.bandwidth_hz) or self.bandwidth_hz <= 0.0:
            raise ValueError(f"bandwidth_hz: must be finite and > 0 Hz, got {self.bandwidth_hz!r}")

    @classmethod
    def thermal(cls, bandwidth_hz: float = 10e9) -> "NoiseModel":
        """Thermal noise floor, -174 dBm/Hz integrated over ``bandwidth_hz``."""
        noise_dbm = -174.0 + 10.0 * np.log10(bandwidth_hz)
        return cls(noise_power_w=float(10.0 ** ((noise_dbm - 30.0) / 10.0)), bandwidth_hz=bandwidth_hz)


@dataclass(frozen=True)
class ChannelDraw:
    """One realization of the squared channel gains (linear, dimensionless)."""

    g_near: float
    g_far: float
    g_relay: float
    trial_index: int

    def __post_init__(self):
        for name in ("g_near", "g_far", "g_relay"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0.0:
                raise ValueError(f"{name}: gain must be finite and >= 0, got {value!r}")
        if self.trial_index < 0:
            raise ValueError(f"trial_index: must be >= 0, got {self.trial_index!r}")


def mean_channel_gain(distance: float, params: PathLossParams) -> float:
    """Median squared channel gain at ``distance``: (d_ref / d) ** exponent.

    With shadowing enabled this is the median (shadowing-free) value; the
    per-trial shadowing factor is applied inside the sampler.
    """
    if not np.isfinite(distance) or distance <= 0.0:
        raise ValueError(f"distance: must be finite and > 0 m, got {distance!r}")
    if distance < params.reference_distance:
        raise ValueError(
            f"distance: must be >= reference_distance ({params.reference_distance} m), got {distance!r}"
        )
    return float((params.reference_distance / distance) ** params.exponent)


def _mix64(x) -> np.ndarray:
    """splitmix64 finalizer over uint64 scalars or arrays (wrapping mod 2**64)."""
    x = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = x ^ (x >> np.uint64(30))
        x = x * _MIX_A
        x = x ^ (x >> np.uint64(27))
        x = x * _MIX_B
        x = x ^ (x >> np.uint64(31))
    return x


def _stream_words(seed: int, link_id: int, purpose: int, lo: int, hi: int) -> np.ndarray:
    """Raw 64-bit words for trials [lo, hi) of one (seed, link, purpose) substream."""
    with np.errstate(over="ignore"):
        base = _mix64(np.uint64(seed) ^ _mix64(_GOLDEN * np.uint64(4 * link_id + purpose + 1)))
        counters = np.arange(lo, hi, dtype=np.uint64) + np.uint64(1)
        return _mix64(base + _GOLDEN * counters)


def _exponential(lam: float, seed: int, link_id: int, lo: int, hi: int) -> np.ndarray:
    # u in (0, 1]; -lam*log(u) is exponential with mean lam and hits 0 at u == 1
    words = _stream_words(seed, link_id, 0, lo, hi)
    u = ((words >> np.uint64(11)).astype(np.float64) + 1.0) * _U53
    return -lam * np.log(u)


def _shadow_factor(sigma_db: float, seed: int, link_id: int, lo: int, hi: int) -> np.ndarray:
    # log-normal with median 1: 10 ** (sigma_db * z / 10), z standard normal
    words = _stream_words(seed, link_id, 1, lo, hi)
    u = ((words >> np.uint64(11)).astype(np.float64) + 0.5) * _U53
    return 10.0 ** (sigma_db * ndtri(u) / 10.0)


def _link_gains(
    distance: float, params: PathLossParams, link_id: int, lo: int, hi: int, seed: int
) -> np.ndarray:
    lam = mean_channel_gain(distance, params)
    g = _exponential(lam, seed, link_id, lo, hi)
    if params.shadowing_sigma_db > 0.0:
        g = g * _shadow_factor(params.shadowing_sigma_db, seed, link_id, lo, hi)
    return g


def sample_block(
    geometry: Geometry, params: PathLossParams, lo: int, hi: int, seed: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gains for trials [lo, hi) on all three links, as float64 arrays.

    Values depend only on (geometry, params, trial index, seed); splitting the
    range into sub-blocks yields the identical concatenated arrays.
    """
    if lo < 0 or hi < lo:
        raise ValueError(f"trial range: need 0 <= lo <= hi, got [{lo}, {hi})")
    g_near = _link_gains(geometry.d_near, params, LINK_NEAR, lo, hi, seed)
    g_far = _link_gains(geometry.d_far, params, LINK_FAR, lo, hi, seed)
    g_relay = _link_gains(geometry.d_relay, params, LINK_RELAY, lo, hi, seed)
    return g_near, g_far, g_relay


def sample_draw(geometry: Geometry, params: PathLossParams, trial_index: int, seed: int) -> ChannelDraw:
    """One reproducible channel realization; re-invocation returns identical values."""
    if trial_index < 0:
        raise ValueError(f"trial_index: must be >= 0, got {trial_index!r}")
    g_near, g_far, g_relay = sample_block(geometry, params, trial_index, trial_index + 1, seed)
    return ChannelDraw(
        g_near=float(g_near[0]),
        g_far=float(g_far[0]),
        g_relay=float(g_relay[0]),
        trial_index=trial_index,
    )
