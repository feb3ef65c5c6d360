"""Power allocation coefficients for the two-user downlink.

Two schemes: a fixed split (time invariant, far user favored) and a dynamic
split that retunes the far-user coefficient on every channel realization so
the far user's achievable rate lands exactly on the target rate whenever the
channel permits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PowerSplit:
    """Fractions of the transmit power assigned to the near and far user.

    The fractions always sum to one. The conventional NOMA ordering
    (alpha_near <= alpha_far) is enforced by the fixed scheme; the dynamic
    scheme may dip below it when the target rate is under 1 bps/Hz, since it
    trades the ordering for hitting the target exactly.
    """

    alpha_near: float
    alpha_far: float

    def __post_init__(self):
        if not (0.0 <= self.alpha_near <= 1.0) or not (0.0 <= self.alpha_far <= 1.0):
            raise ValueError(
                f"power split: coefficients must lie in [0, 1], got ({self.alpha_near!r}, {self.alpha_far!r})"
            )
        if abs(self.alpha_near + self.alpha_far - 1.0) > 1e-12:
            raise ValueError(
                f"power split: coefficients must sum to 1, got {self.alpha_near + self.alpha_far!r}"
            )


@dataclass(frozen=True)
class RateTarget:
    """Target spectral efficiency (bps/Hz) and the matching SINR threshold."""

    target_rate: float

    def __post_init__(self):
        if not np.isfinite(self.target_rate) or self.target_rate <= 0.0:
            raise ValueError(f"target_rate: must be finite and > 0 bps/Hz, got {self.target_rate!r}")

    @property
    def target_sinr(self) -> float:
        return target_sinr(self.target_rate)


def target_sinr(target_rate: float) -> float:
    """Linear SINR needed for ``target_rate``: 2**rate - 1."""
    if not np.isfinite(target_rate) or target_rate <= 0.0:
        raise ValueError(f"target_rate: must be finite and > 0 bps/Hz, got {target_rate!r}")
    return float(2.0 ** target_rate - 1.0)


def fps_split(alpha_far: float) -> PowerSplit:
    """Fixed split (1 - alpha_far, alpha_far); requires 0.5 < alpha_far <= 1.

    The strict lower bound keeps the far user's share above the near user's,
    the ordering that makes SIC decoding work.
    """
    if not np.isfinite(alpha_far) or not (0.5 < alpha_far <= 1.0):
        raise ValueError(
            f"alpha_far: fixed far-user coefficient must satisfy 0.5 < alpha_far <= 1, got {alpha_far!r}"
        )
    return PowerSplit(alpha_near=1.0 - alpha_far, alpha_far=alpha_far)


def dps_alpha_far(g_far, transmit_power_w, noise_power_w, sinr_target):
    """Unclamped dynamic far-user coefficient; array friendly.

    Solving the far user's SINR condition for equality gives
    alpha_far = S * (g*P + sigma^2) / (g*P * (1 + S)). Values above 1 mean the
    target is unreachable even with the whole power budget.
    """
    g_power = np.asarray(g_far, dtype=np.float64) * transmit_power_w
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = sinr_target * (g_power + noise_power_w) / (g_power * (1.0 + sinr_target))
    # g_far == 0 divides out to nan/inf; treat as unreachable
    return np.where(np.isfinite(raw), raw, np.inf)


def dps_split(
    g_far: float, transmit_power_w: float, noise_power_w: float, target: RateTarget
) -> tuple[PowerSplit, bool]:
    """Dynamic split for one realization, plus a feasibility flag.

    Feasible channels get the coefficient that meets the target rate exactly.
    When even full power cannot reach the target (computed coefficient > 1)
    the split clamps to (0, 1): the far user takes everything and still falls
    short, and the near user is starved for that realization.
    """
    if g_far < 0.0 or not np.isfinite(g_far):
        raise ValueError(f"g_far: must be finite and >= 0, got {g_far!r}")
    if transmit_power_w <= 0.0 or noise_power_w <= 0.0:
        raise ValueError("transmit_power_w and noise_power_w must be > 0")
    raw = float(dps_alpha_far(g_far, transmit_power_w, noise_power_w, target.target_sinr))
    if raw > 1.0:
        return PowerSplit(alpha_near=0.0, alpha_far=1.0), False
    return PowerSplit(alpha_near=1.0 - raw, alpha_far=raw), True
