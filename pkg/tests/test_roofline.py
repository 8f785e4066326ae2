import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from disagg.errors import ConfigError
from disagg.roofline import (
    RooflineConfig,
    attainable_bandwidth,
    machine_balance,
    required_concurrency,
    roofline_curve,
    sustained_bandwidth,
)

GB = 1e9


@pytest.fixture(scope="module")
def cfg(catalog):
    return RooflineConfig.from_catalog(catalog)


class TestMachineBalance:
    def test_injection_knee(self, cfg):
        assert machine_balance(cfg) == pytest.approx(65.5, abs=0.1)

    def test_rack_knee(self, cfg):
        assert machine_balance(cfg, "rack") == pytest.approx(131, abs=0.5)

    def test_global_knee(self, cfg):
        assert machine_balance(cfg, "global") == pytest.approx(234, abs=1)

    def test_previous_generation_knee(self, catalog):
        prev = RooflineConfig.from_catalog(catalog, local="HBM2", remote="PCIe4")
        assert machine_balance(prev) == pytest.approx(62.2, abs=0.1)

    def test_unknown_scope(self, cfg):
        with pytest.raises(ConfigError, match="scope"):
            machine_balance(cfg, "campus")


class TestAttainable:
    def test_high_ratio_app_is_local_bound(self, cfg):
        point = attainable_bandwidth(477, cfg)
        assert point.attainable_bps == cfg.local_bandwidth_bps
        assert point.limiter == "local"
        # Consumes less than 14% of the NIC while running at full speed.
        assert point.remote_utilization == pytest.approx(0.137, abs=0.001)
        assert point.remote_utilization <= 0.14

    def test_low_ratio_app_is_remote_bound(self, cfg):
        point = attainable_bandwidth(2, cfg)
        assert point.attainable_bps == 200 * GB
        assert point.limiter == "remote"
        assert point.remote_utilization == 1.0

    def test_knee_point_has_equal_bounds(self, cfg):
        knee = machine_balance(cfg)
        point = attainable_bandwidth(knee, cfg)
        remote_bound = knee * cfg.remote_bandwidth_bps
        assert point.attainable_bps == pytest.approx(cfg.local_bandwidth_bps, rel=1e-12)
        assert remote_bound == pytest.approx(cfg.local_bandwidth_bps, rel=1e-12)
        assert point.limiter == "local"

    def test_taper_scales_the_diagonal(self, cfg):
        free = attainable_bandwidth(10, cfg, "injection")
        tapered = attainable_bandwidth(10, cfg, "rack")
        assert tapered.attainable_bps == 0.5 * free.attainable_bps
        # Below the knee the NIC share consumed equals the taper.
        assert tapered.remote_utilization == pytest.approx(0.5)

    @given(st.floats(min_value=0.01, max_value=1e6))
    def test_min_form(self, lr):
        cfg = RooflineConfig(6553.6 * GB, 100 * GB)
        point = attainable_bandwidth(lr, cfg)
        assert point.attainable_bps == min(6553.6 * GB, lr * (100 * GB))

    def test_nondecreasing_in_lr_and_plateau(self, cfg):
        lrs = np.geomspace(0.1, 1e5, 200)
        values = [attainable_bandwidth(float(lr), cfg).attainable_bps for lr in lrs]
        assert all(a <= b + 1e-9 for a, b in zip(values, values[1:]))
        assert all(
            attainable_bandwidth(float(lr), cfg).attainable_bps == cfg.local_bandwidth_bps
            for lr in lrs
            if lr >= machine_balance(cfg)
        )

    def test_utilization_decreases_past_knee(self, cfg):
        knee = machine_balance(cfg)
        utils = [attainable_bandwidth(knee * k, cfg).remote_utilization for k in (1, 2, 4, 8)]
        assert all(a > b for a, b in zip(utils, utils[1:]))


class TestCurves:
    def test_three_scope_knees(self, cfg):
        curves = roofline_curve(cfg, (1, 1e4))
        assert set(curves) == {"injection", "rack", "global"}
        knees = [machine_balance(cfg, s) for s in ("injection", "rack", "global")]
        assert knees == pytest.approx([65.536, 131.072, 234.0571], abs=0.01)

    def test_curves_ordered_below_knees(self, cfg):
        curves = roofline_curve(cfg, [10.0])
        inj = curves["injection"][0].attainable_bps
        rack = curves["rack"][0].attainable_bps
        glob = curves["global"][0].attainable_bps
        assert inj > rack > glob

    def test_plateau_at_local_bandwidth(self, cfg):
        curves = roofline_curve(cfg, [1e9], scopes=["injection"])
        assert curves["injection"][0].attainable_bps == cfg.local_bandwidth_bps

    def test_sampling_density(self, cfg):
        curves = roofline_curve(cfg, (1.0, 100.0), scopes=["injection"],
                                points_per_decade=64)
        assert len(curves["injection"]) == 129  # two decades at 64/decade + endpoint

    def test_rejects_empty_or_nonpositive(self, cfg):
        with pytest.raises(ConfigError):
            roofline_curve(cfg, [])
        with pytest.raises(ConfigError):
            roofline_curve(cfg, [-1.0, 10.0])


class TestConcurrency:
    def test_single_page_fault_cannot_feed_pcie4(self):
        point = sustained_bandwidth(4096, 1, 2e-6, 25 * GB)
        assert point.sustained_bps == pytest.approx(2.048 * GB)
        assert point.sustained_bps < 25 * GB

    def test_large_pages_cap_at_link(self):
        point = sustained_bandwidth(262144, 1, 2e-6, 100 * GB)
        assert point.sustained_bps == 100 * GB
        # Uncapped Little's-Law value exceeds the link.
        assert 262144 / 2e-6 > 100 * GB

    def test_small_lines_with_enough_concurrency(self):
        point = sustained_bandwidth(32, 3125, 2e-6, 50 * GB)
        assert point.sustained_bps == 50 * GB
        assert point.sustained_bps == pytest.approx(3125 * 32 / 2e-6)

    def test_required_concurrency_values(self):
        assert required_concurrency(50 * GB, 32, 2e-6) == 3125
        assert required_concurrency(25 * GB, 4096, 2e-6) == 13
        assert required_concurrency(10 * GB, 10 * GB * 2e-6, 2e-6) == 1

    def test_invariants(self):
        point = sustained_bandwidth(4096, 3, 2e-6, 25 * GB)
        assert point.sustained_bps <= point.link_cap_bps
        assert point.sustained_bps <= point.concurrency * point.quanta_bytes / point.latency_s

    def test_monotonicity(self):
        base = sustained_bandwidth(4096, 2, 2e-6, 1e12).sustained_bps
        assert sustained_bandwidth(8192, 2, 2e-6, 1e12).sustained_bps >= base
        assert sustained_bandwidth(4096, 4, 2e-6, 1e12).sustained_bps >= base
        assert sustained_bandwidth(4096, 2, 4e-6, 1e12).sustained_bps <= base

    @given(
        st.floats(min_value=1e6, max_value=200e9),
        st.floats(min_value=8, max_value=1e7),
        st.floats(min_value=1e-7, max_value=1e-4),
    )
    def test_round_trip_meets_target(self, target, quanta, latency):
        c = required_concurrency(target, quanta, latency)
        achieved = sustained_bandwidth(quanta, c, latency, target).sustained_bps
        assert achieved == pytest.approx(target, rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(ConfigError):
            sustained_bandwidth(0, 1, 2e-6, 1e9)
        with pytest.raises(ConfigError):
            required_concurrency(1e9, -32, 2e-6)


def test_config_invariants():
    with pytest.raises(ConfigError, match="local_bandwidth"):
        RooflineConfig(10 * GB, 100 * GB)
    with pytest.raises(ConfigError, match="taper"):
        RooflineConfig(1e12, 1e11, {"injection": 0.0})
