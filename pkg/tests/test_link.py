import math

import numpy as np
import pytest

from noma_swipt.channel import ChannelDraw, NoiseModel
from noma_swipt.link import (
    LinkReport,
    SwiptConfig,
    evaluate_link,
    harvested_power,
    is_outage,
    rate_far_direct,
    rate_near,
    relay_rate,
)
from noma_swipt.montecarlo import default_config
from noma_swipt.power_allocation import PowerSplit, fps_split

NO_HARVEST = SwiptConfig(harvest_fraction=0.0, harvest_efficiency=1.0)


class TestSwiptConfig:
    def test_fractions_are_complementary(self):
        swipt = SwiptConfig(harvest_fraction=0.7, harvest_efficiency=0.7)
        assert swipt.decode_fraction == pytest.approx(0.3, abs=1e-15)
        assert swipt.harvest_fraction + swipt.decode_fraction == 1.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"harvest_fraction": -0.1},
            {"harvest_fraction": 1.2},
            {"harvest_efficiency": 0.0},
            {"harvest_efficiency": 1.5},
        ],
    )
    def test_rejects_out_of_range(self, kwargs):
        with pytest.raises(ValueError):
            SwiptConfig(**kwargs)


class TestRates:
    def test_far_rate_scalar_point(self):
        # g*P/sigma^2 = 10 with a (0.2, 0.8) split
        rate = rate_far_direct(10.0, fps_split(0.8), 1.0, 1.0)
        assert rate == pytest.approx(math.log2(11.0 / 3.0), rel=1e-12)
        assert rate == pytest.approx(1.874469117916141, rel=1e-12)

    def test_far_rate_zero_channel(self):
        assert rate_far_direct(0.0, fps_split(0.8), 1.0, 1.0) == 0.0

    def test_far_rate_interference_ceiling(self):
        split = fps_split(0.8)
        ceiling = math.log2(1.0 + split.alpha_far / split.alpha_near)
        assert ceiling == pytest.approx(2.321928094887362, rel=1e-12)
        rate_huge = rate_far_direct(1.0, split, 1e15, 1.0)
        assert rate_huge < ceiling
        assert rate_huge == pytest.approx(ceiling, rel=1e-9)
        for power in (1e-3, 1.0, 1e3, 1e9):
            assert rate_far_direct(0.37, split, power, 1e-5) < ceiling

    def test_far_rate_degenerates_without_near_allocation(self):
        split = PowerSplit(alpha_near=0.0, alpha_far=1.0)
        assert rate_far_direct(3.0, split, 1.0, 1.0) == pytest.approx(2.0, rel=1e-12)

    def test_near_rate_without_harvesting(self):
        # g*P*alpha_near/sigma^2 = 3 at full decode power
        rate = rate_near(15.0, fps_split(0.8), 1.0, 1.0, NO_HARVEST)
        assert rate == pytest.approx(2.0, rel=1e-12)

    def test_near_rate_zero_allocation(self):
        split = PowerSplit(alpha_near=0.0, alpha_far=1.0)
        assert rate_near(10.0, split, 1.0, 1.0, SwiptConfig()) == 0.0

    def test_near_rate_with_harvest_fraction(self):
        # g*P*alpha_near/sigma^2 = 10, of which 0.3 is decoded
        swipt = SwiptConfig(harvest_fraction=0.7)
        rate = rate_near(50.0, fps_split(0.8), 1.0, 1.0, swipt)
        assert rate == pytest.approx(2.0, rel=1e-12)

    def test_near_rate_monotonic_in_every_knob(self):
        swipt_lo, swipt_hi = SwiptConfig(harvest_fraction=0.7), SwiptConfig(harvest_fraction=0.5)
        base = rate_near(1e-4, fps_split(0.8), 1.0, 1e-9, swipt_lo)
        assert rate_near(2e-4, fps_split(0.8), 1.0, 1e-9, swipt_lo) > base
        assert rate_near(1e-4, fps_split(0.8), 2.0, 1e-9, swipt_lo) > base
        assert rate_near(1e-4, fps_split(0.7), 1.0, 1e-9, swipt_lo) > base
        assert rate_near(1e-4, fps_split(0.8), 1.0, 1e-9, swipt_hi) > base

    def test_rejects_nonpositive_power_or_noise(self):
        with pytest.raises(ValueError):
            rate_far_direct(1.0, fps_split(0.8), 0.0, 1.0)
        with pytest.raises(ValueError):
            rate_near(1.0, fps_split(0.8), 1.0, 0.0, SwiptConfig())


class TestHarvestedPower:
    def test_product_evaluation(self):
        swipt = SwiptConfig(harvest_fraction=0.7, harvest_efficiency=0.6)
        assert harvested_power(0.5, 2.0, swipt) == pytest.approx(0.42, rel=1e-12)

    def test_nothing_harvested_when_fraction_zero(self):
        assert harvested_power(0.5, 2.0, NO_HARVEST) == 0.0

    def test_unit_passthrough(self):
        swipt = SwiptConfig(harvest_fraction=0.7, harvest_efficiency=1.0)
        assert harvested_power(1.0, 1.0, swipt) == pytest.approx(0.7, rel=1e-12)

    def test_bounded_by_received_power(self):
        rng = np.random.default_rng(11)
        swipt = SwiptConfig(harvest_fraction=0.9, harvest_efficiency=0.8)
        for g, power in zip(rng.exponential(1.0, 100), rng.uniform(0.1, 10.0, 100)):
            assert harvested_power(g, power, swipt) <= power * g


class TestRelayRate:
    def test_unit_snr(self):
        assert relay_rate(1.0, 1.0, 1.0) == pytest.approx(1.0, rel=1e-12)

    def test_half_rate_factor(self):
        assert relay_rate(7.0, 1.0, 1.0, half_rate_factor=0.5) == pytest.approx(1.5, rel=1e-12)

    def test_dead_inputs(self):
        assert relay_rate(0.0, 1.0, 1.0) == 0.0
        assert relay_rate(1.0, 0.0, 1.0) == 0.0
        with pytest.raises(ValueError):
            relay_rate(1.0, 1.0, 0.0)


def pipeline_config(**overrides):
    overrides.setdefault("noise", NoiseModel(noise_power_w=1e-7, bandwidth_hz=10e9))
    return default_config(**overrides)


class TestEvaluateLink:
    # fixed draw used across the pipeline checks
    DRAW = ChannelDraw(g_near=1e-4, g_far=6.25e-6, g_relay=1e-4, trial_index=0)

    def test_full_pipeline_against_frozen_scalar_oracle(self):
        # all expected values were evaluated independently with scalar math
        report = evaluate_link(self.DRAW, "FPS", pipeline_config(), 1.0)
        assert report.rate_far_direct == pytest.approx(2.2337971846086973, rel=1e-12)
        assert report.rate_near == pytest.approx(5.930737337562887, rel=1e-12)
        assert report.harvested_power_w == pytest.approx(4.9e-5, rel=1e-12)
        # near user decodes the far message at log2(1 + 3.9801) ~ 2.32, so the
        # relay is active but its 0.069 bps/Hz loses to the direct link
        assert report.rate_far_effective == report.rate_far_direct
        assert report.split == PowerSplit(alpha_near=1.0 - 0.8, alpha_far=0.8)
        assert not report.outage_near
        assert not report.outage_far
        assert report.dps_feasible

    def test_relaying_disabled_keeps_direct_rate(self):
        report = evaluate_link(self.DRAW, "FPS", pipeline_config(relay_enabled=False), 1.0)
        assert report.rate_far_effective == report.rate_far_direct

    def test_dead_relay_link_equals_disabled_relaying(self):
        draw = ChannelDraw(g_near=1e-4, g_far=6.25e-6, g_relay=0.0, trial_index=0)
        with_relay = evaluate_link(draw, "FPS", pipeline_config(), 1.0)
        without = evaluate_link(draw, "FPS", pipeline_config(relay_enabled=False), 1.0)
        assert with_relay == without

    def test_relay_rescues_a_blocked_far_user(self):
        # direct far link dead, relay link strong: effective rate comes from the relay
        draw = ChannelDraw(g_near=1e-3, g_far=1e-12, g_relay=1e-2, trial_index=0)
        report = evaluate_link(draw, "FPS", pipeline_config(), 1.0)
        assert report.rate_far_direct < 1e-3
        assert report.rate_far_effective > 1.0
        assert not report.outage_far

    def test_relay_never_hurts(self):
        cfg_on, cfg_off = pipeline_config(), pipeline_config(relay_enabled=False)
        rng = np.random.default_rng(3)
        for _ in range(200):
            draw = ChannelDraw(
                g_near=float(rng.exponential(1e-4)),
                g_far=float(rng.exponential(6.25e-6)),
                g_relay=float(rng.exponential(1e-4)),
                trial_index=0,
            )
            for scheme in ("FPS", "DPS"):
                on = evaluate_link(draw, scheme, cfg_on, 0.01)
                off = evaluate_link(draw, scheme, cfg_off, 0.01)
                assert on.rate_far_effective >= off.rate_far_effective
                assert (not on.outage_far) or off.outage_far

    def test_relay_requires_near_user_to_decode_far_message(self):
        # near channel too weak to decode the far message: no forwarding even
        # though the relay hop itself would be excellent
        draw = ChannelDraw(g_near=1e-8, g_far=1e-12, g_relay=1.0, trial_index=0)
        report = evaluate_link(draw, "FPS", pipeline_config(), 1.0)
        assert report.rate_far_effective == report.rate_far_direct
        assert report.outage_far

    def test_dps_feasible_report_hits_target(self):
        cfg = pipeline_config()
        rng = np.random.default_rng(5)
        feasible_seen = 0
        for _ in range(300):
            draw = ChannelDraw(
                g_near=float(rng.exponential(1e-4)),
                g_far=float(rng.exponential(6.25e-6)),
                g_relay=float(rng.exponential(1e-4)),
                trial_index=0,
            )
            report = evaluate_link(draw, "DPS", cfg, 0.1)
            if report.dps_feasible and report.split.alpha_far < 1.0:
                feasible_seen += 1
                assert abs(report.rate_far_direct - 1.0) <= 1e-9
        assert feasible_seen > 200

    def test_infeasible_dps_starves_near_user(self):
        draw = ChannelDraw(g_near=1e-4, g_far=1e-12, g_relay=0.0, trial_index=0)
        report = evaluate_link(draw, "DPS", pipeline_config(relay_enabled=False), 1e-3)
        assert not report.dps_feasible
        assert report.split == PowerSplit(alpha_near=0.0, alpha_far=1.0)
        assert report.rate_near == 0.0
        assert report.outage_near

    def test_blocking_attenuation_scales_the_direct_link(self):
        cfg = pipeline_config(blocking_attenuation=0.5, relay_enabled=False)
        report = evaluate_link(self.DRAW, "FPS", cfg, 1.0)
        half_draw = ChannelDraw(g_near=1e-4, g_far=3.125e-6, g_relay=1e-4, trial_index=0)
        plain = evaluate_link(half_draw, "FPS", pipeline_config(relay_enabled=False), 1.0)
        assert report.rate_far_direct == plain.rate_far_direct

    def test_rejects_unknown_scheme(self):
        with pytest.raises(ValueError):
            evaluate_link(self.DRAW, "EPS", pipeline_config(), 1.0)


def test_outage_guard_tolerates_rounding_at_the_target():
    assert not is_outage(1.0 - 1e-12, 1.0)
    assert is_outage(1.0 - 1e-6, 1.0)
    assert not is_outage(1.0, 1.0)
    assert not is_outage(1.5, 1.0)


def test_link_report_is_plain_data():
    report = evaluate_link(
        ChannelDraw(g_near=1e-4, g_far=6.25e-6, g_relay=1e-4, trial_index=0),
        "FPS",
        pipeline_config(),
        1.0,
    )
    assert isinstance(report, LinkReport)
    assert report.rate_near >= 0.0
    assert report.harvested_power_w >= 0.0
