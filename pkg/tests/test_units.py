import math

import pytest
from hypothesis import given, strategies as st

from qkdsync import units
from qkdsync.units import FiberChannel


class TestDbmToWatts:
    def test_zero_dbm_is_one_milliwatt(self):
        assert units.dbm_to_watts(0.0) == pytest.approx(1e-3, rel=1e-12)

    def test_minus_thirty_dbm(self):
        assert units.dbm_to_watts(-30.0) == pytest.approx(1e-6, rel=1e-12)

    def test_stage_one_power(self):
        # hand calculator: 1e-3 * 10**(-4.83)
        assert units.dbm_to_watts(-48.3) == pytest.approx(1.4791083881682072e-08, rel=1e-12)

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_non_finite_rejected(self, bad):
        with pytest.raises(ValueError):
            units.dbm_to_watts(bad)

    @given(st.floats(min_value=-120.0, max_value=30.0))
    def test_roundtrip(self, dbm):
        back = units.watts_to_dbm(units.dbm_to_watts(dbm))
        assert back == pytest.approx(dbm, rel=1e-12, abs=1e-12)

    @given(st.floats(min_value=-120.0, max_value=29.0), st.floats(min_value=1e-6, max_value=1.0))
    def test_strictly_increasing(self, dbm, step):
        assert units.dbm_to_watts(dbm + step) > units.dbm_to_watts(dbm)


class TestDbLossToFraction:
    def test_zero_db_identity(self):
        assert units.db_loss_to_fraction(0.0) == 1.0

    def test_three_db_is_half(self):
        assert units.db_loss_to_fraction(3.0) == pytest.approx(0.5011872336272722, rel=1e-12)

    def test_station_loss_magnitude(self):
        assert units.db_loss_to_fraction(47.7) == pytest.approx(1.6982436524617425e-05, rel=1e-12)

    def test_negative_loss_rejected(self):
        with pytest.raises(ValueError):
            units.db_loss_to_fraction(-0.1)

    @given(
        st.floats(min_value=0.0, max_value=60.0),
        st.floats(min_value=0.0, max_value=60.0),
    )
    def test_losses_add_in_db(self, a, b):
        combined = units.db_loss_to_fraction(a + b)
        product = units.db_loss_to_fraction(a) * units.db_loss_to_fraction(b)
        assert combined == pytest.approx(product, rel=1e-12)


class TestPhotonEnergy:
    def test_reference_wavelength(self):
        channel = FiberChannel(length_m=1000.0)
        assert units.photon_energy(channel) == pytest.approx(8.585e-20, rel=5e-3)
        assert units.photon_energy(channel) == pytest.approx(8.584645161290322e-20, rel=1e-12)

    def test_doubling_wavelength_halves_energy(self):
        base = units.photon_energy(FiberChannel(0.0, wavelength_nm=1550.0))
        doubled = units.photon_energy(FiberChannel(0.0, wavelength_nm=3100.0))
        assert doubled == pytest.approx(base / 2.0, rel=1e-12)

    def test_shorter_wavelength(self):
        channel = FiberChannel(0.0, wavelength_nm=775.0)
        assert units.photon_energy(channel) == pytest.approx(1.7169290322580644e-19, rel=1e-12)

    @given(
        st.floats(min_value=200.0, max_value=3000.0),
        st.floats(min_value=1e7, max_value=2.9e8),
        st.floats(min_value=0.5, max_value=2.0),
    )
    def test_homogeneity(self, wavelength, velocity, scale):
        base = units.photon_energy(FiberChannel(0.0, wavelength_nm=wavelength,
                                                group_velocity_m_per_s=velocity))
        wl_scaled = units.photon_energy(FiberChannel(0.0, wavelength_nm=wavelength * scale,
                                                     group_velocity_m_per_s=velocity))
        assert wl_scaled == pytest.approx(base / scale, rel=1e-12)
        if velocity * scale < units.VACUUM_LIGHT_SPEED_M_S:
            v_scaled = units.photon_energy(FiberChannel(0.0, wavelength_nm=wavelength,
                                                        group_velocity_m_per_s=velocity * scale))
            assert v_scaled == pytest.approx(base * scale, rel=1e-12)


class TestRoundTripPeriod:
    def test_hundred_km_is_one_millisecond(self):
        channel = FiberChannel(length_m=100_000.0, group_velocity_m_per_s=2.0e8)
        assert units.round_trip_period(channel) == 1e-3

    def test_zero_length(self):
        assert units.round_trip_period(FiberChannel(0.0)) == 0.0

    def test_experiment_length(self):
        channel = FiberChannel(length_m=25_732.0)
        assert units.round_trip_period(channel) == pytest.approx(2.5603980099502487e-04, rel=1e-12)


class TestFiberChannelInvariants:
    def test_negative_length_rejected(self):
        with pytest.raises(ValueError):
            FiberChannel(length_m=-1.0)

    def test_velocity_above_c_rejected(self):
        with pytest.raises(ValueError):
            FiberChannel(0.0, group_velocity_m_per_s=3.1e8)

    def test_nonpositive_wavelength_rejected(self):
        with pytest.raises(ValueError):
            FiberChannel(0.0, wavelength_nm=0.0)

    def test_one_way_loss(self):
        assert FiberChannel(50_000.0).one_way_loss_db == pytest.approx(10.0, rel=1e-12)
