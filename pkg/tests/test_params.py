import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relaysnr.params import (
    ChannelGains,
    Deployment3D,
    DirectCoupling,
    SystemParams,
    db_to_linear_amplitude,
    db_to_linear_power,
    dbm_to_watts,
    distances,
    linear_to_db_amplitude,
    linear_to_db_power,
)


class TestDbConversions:
    def test_minus_87_db_power(self):
        # 10^(-8.7)
        assert db_to_linear_power(-87.0) == pytest.approx(1.9952623149688828e-09, rel=1e-12)

    def test_zero_db_is_unity_in_both_conventions(self):
        assert db_to_linear_power(0.0) == 1.0
        assert db_to_linear_amplitude(0.0) == 1.0

    def test_40_db_amplitude_is_100(self):
        # 10^(40/20)
        assert db_to_linear_amplitude(40.0) == pytest.approx(100.0, rel=1e-12)

    def test_dbm(self):
        assert dbm_to_watts(20.0) == pytest.approx(0.1, rel=1e-12)
        assert dbm_to_watts(-117.0) == pytest.approx(1.9952623149688826e-15, rel=1e-12)

    def test_nonpositive_maps_to_minus_inf(self):
        assert linear_to_db_power(0.0) == -math.inf
        assert linear_to_db_amplitude(0.0) == -math.inf

    @given(st.floats(min_value=-200.0, max_value=200.0))
    def test_power_round_trip(self, x):
        assert linear_to_db_power(db_to_linear_power(x)) == pytest.approx(x, abs=1e-12)

    @given(st.floats(min_value=-200.0, max_value=200.0))
    def test_amplitude_round_trip(self, x):
        assert linear_to_db_amplitude(db_to_linear_amplitude(x)) == pytest.approx(
            x, abs=1e-12
        )


class TestDistances:
    def test_colocated_nodes_is_an_error(self):
        dep = Deployment3D((0, 0, 0), (3, 4, 0), (0, 0, 0))
        with pytest.raises(ValueError):
            distances(dep)

    def test_street_geometry(self):
        dep = Deployment3D((0, 0, 10), (1000, 0, 0), (800, 10, 10))
        d1, d2, d3 = distances(dep)
        assert d1 == pytest.approx(200.4993765576342, rel=1e-12)
        assert d2 == pytest.approx(800.0624975587845, rel=1e-12)
        assert d3 == pytest.approx(1000.0499987500625, rel=1e-12)

    def test_unit_geometry(self):
        dep = Deployment3D((0, 0, 0), (0, 0, 1), (0, 1, 0))
        d1, d2, d3 = distances(dep)
        assert d1 == pytest.approx(math.sqrt(2.0), rel=1e-15)
        assert d2 == 1.0
        assert d3 == 1.0

    @given(
        st.tuples(*[st.floats(-100, 100) for _ in range(3)]),
        st.tuples(*[st.floats(-100, 100) for _ in range(3)]),
    )
    def test_norm_is_symmetric(self, a, b):
        # Each pairwise distance is invariant under swapping its endpoints.
        assert math.dist(a, b) == math.dist(b, a)


class TestDirectCoupling:
    def test_phase_wraps_into_half_open_interval(self):
        assert DirectCoupling(1.0, 3 * math.pi).phase == pytest.approx(math.pi)
        assert DirectCoupling(1.0, -math.pi).phase == pytest.approx(math.pi)
        assert DirectCoupling(1.0, 0.5).phase == 0.5

    def test_from_complex_round_trip(self):
        value = complex(-0.3, 0.4)
        c = DirectCoupling.from_complex(value)
        assert c.as_complex == pytest.approx(value, rel=1e-12)
        assert c.real == pytest.approx(-0.3, rel=1e-12)

    def test_negative_magnitude_rejected(self):
        with pytest.raises(ValueError):
            DirectCoupling(-1.0)


class TestValidation:
    def test_system_params_rejects_bad_values(self):
        with pytest.raises(ValueError):
            SystemParams(0.0, 1e-15, 4, 2)
        with pytest.raises(ValueError):
            SystemParams(1.0, 0.0, 4, 2)
        with pytest.raises(ValueError):
            SystemParams(1.0, 1e-15, 0, 2)
        with pytest.raises(ValueError):
            SystemParams(1.0, 1e-15, 4, 0)
        with pytest.raises(ValueError):
            SystemParams(1.0, 1e-15, 4, 2, ncr_alpha_max=-1.0)

    def test_zero_caps_mean_disabled_devices(self):
        p = SystemParams(1.0, 1e-15, 4, 2)
        assert p.ncr_alpha_max == 0.0
        assert p.aris_alpha_max == 0.0

    def test_channel_gains_accept_zero_and_reject_negative(self):
        g = ChannelGains(0.0, 0.0, 0.0)
        assert g.beta3 == 0.0
        with pytest.raises(ValueError):
            ChannelGains(-1e-9, 1e-9)
        with pytest.raises(ValueError):
            ChannelGains(1e-9, 1e-9, float("nan"))
