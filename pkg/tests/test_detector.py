import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qkdsync.detector import (
    DetectorParams,
    GateOutcome,
    dead_time_ignorable,
    registration_probability,
    sample_gate,
)
from qkdsync.sync_scan import SyncConfig

ID230_LIKE = DetectorParams(dark_rate_hz=50.0, quantum_efficiency=0.25,
                            dead_time_s=10e-6, gate_width_s=2e-9)
NOISELESS = DetectorParams(dark_rate_hz=0.0, quantum_efficiency=1.0,
                           dead_time_s=0.0, gate_width_s=2e-9)


def sync_with_frame(frame_s: float) -> SyncConfig:
    return SyncConfig(frame_period_s=frame_s, n_intervals=2,
                      interval_width_s=frame_s / 2, selection_size=1,
                      pulse_width_s=frame_s / 8)


class TestRegistrationProbability:
    def test_dark_and_light_free_gate_is_silent(self):
        assert registration_probability(0.0, NOISELESS) == 0.0

    def test_saturation(self):
        assert registration_probability(1e3, NOISELESS) == pytest.approx(1.0, abs=1e-12)

    def test_worked_value(self):
        # 1 - exp(-(0.25*0.1 + 50*2e-9))
        p = registration_probability(0.1, ID230_LIKE)
        assert p == pytest.approx(0.024690, abs=5e-7)
        assert p == pytest.approx(-math.expm1(-(0.025 + 1e-7)), rel=1e-15)

    def test_negative_mean_rejected(self):
        with pytest.raises(ValueError):
            registration_probability(-1e-9, ID230_LIKE)

    @given(st.floats(min_value=0.0, max_value=10.0), st.floats(min_value=0.0, max_value=10.0))
    def test_monotone_in_mean(self, a, b):
        lo, hi = sorted((a, b))
        assert registration_probability(lo, ID230_LIKE) <= registration_probability(hi, ID230_LIKE)

    def test_linearization_bound_on_grid(self):
        # for small per-gate means the probability is the mean to second order
        for km in np.linspace(0.0, 0.09, 19):
            for dark in (0.0, 1e-4, 1e-2):
                x = km + dark
                if x > 0.1:
                    continue
                det = DetectorParams(dark_rate_hz=dark / 2e-9, quantum_efficiency=1.0,
                                     dead_time_s=0.0, gate_width_s=2e-9)
                p = registration_probability(km, det)
                assert abs(p - x) <= x * x / 2.0 + 1e-15


class TestSampleGate:
    def test_never_registers_at_zero(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            outcome = sample_gate(0.0, NOISELESS, rng)
            assert outcome == GateOutcome(False, "none")

    def test_always_registers_when_saturated(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            outcome = sample_gate(1e4, NOISELESS, rng)
            assert outcome.registered and outcome.cause == "photon"

    def test_dark_only_cause(self):
        det = DetectorParams(dark_rate_hz=1e9, quantum_efficiency=1.0,
                             dead_time_s=0.0, gate_width_s=1.0)
        rng = np.random.default_rng(0)
        outcome = sample_gate(0.0, det, rng)
        assert outcome.registered and outcome.cause == "dark"

    def test_empirical_frequency(self):
        rng = np.random.default_rng(20240601)
        n = 1_000_000
        p = registration_probability(0.1, ID230_LIKE)
        hits = sum(sample_gate(0.1, ID230_LIKE, rng).registered for _ in range(n))
        sigma = math.sqrt(p * (1 - p) / n)
        assert abs(hits / n - p) <= 3 * sigma

    def test_deterministic_given_seed(self):
        seqs = []
        for _ in range(2):
            rng = np.random.default_rng(99)
            seqs.append([sample_gate(0.5, ID230_LIKE, rng) for _ in range(500)])
        assert seqs[0] == seqs[1]

    def test_unregistered_outcome_cannot_carry_cause(self):
        with pytest.raises(ValueError):
            GateOutcome(registered=False, cause="photon")


class TestDeadTimeIgnorable:
    def test_typical_regime(self):
        assert dead_time_ignorable(sync_with_frame(1e-3), ID230_LIKE)

    def test_equal_values_are_not_much_greater(self):
        det = DetectorParams(50.0, 0.25, dead_time_s=1e-3, gate_width_s=2e-9)
        assert not dead_time_ignorable(sync_with_frame(1e-3), det)

    def test_boundary_factor_ten(self):
        det = DetectorParams(50.0, 0.25, dead_time_s=10e-6, gate_width_s=2e-9)
        assert dead_time_ignorable(sync_with_frame(100e-6), det)

    def test_margin_configurable(self):
        det = DetectorParams(50.0, 0.25, dead_time_s=10e-6, gate_width_s=2e-9)
        assert not dead_time_ignorable(sync_with_frame(100e-6), det, margin=20.0)


class TestDetectorParamsInvariants:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(dark_rate_hz=-1.0, quantum_efficiency=0.25, dead_time_s=0.0, gate_width_s=1e-9),
            dict(dark_rate_hz=0.0, quantum_efficiency=1.5, dead_time_s=0.0, gate_width_s=1e-9),
            dict(dark_rate_hz=0.0, quantum_efficiency=0.25, dead_time_s=-1.0, gate_width_s=1e-9),
            dict(dark_rate_hz=0.0, quantum_efficiency=0.25, dead_time_s=0.0, gate_width_s=0.0),
        ],
    )
    def test_rejected(self, kwargs):
        with pytest.raises(ValueError):
            DetectorParams(**kwargs)
