import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qkdsync import analytics
from qkdsync.analytics import (
    AUDIT_TOLERANCE,
    DimensionlessParams,
    RegimeError,
    bernoulli_poisson_bound,
    default_audit_grid,
    divergence_audit,
    map_physical,
    noise_cdf_power,
    pd_full,
    pd_simplified,
    pe_false,
    truncation_premise,
)
from qkdsync.detector import DetectorParams
from qkdsync.sync_scan import SyncConfig


def oracle_pd_full(noise_mean: float, signal_mean: float, n_intervals: int,
                   s_max: int = 200, dps: int = 40) -> float:
    """Independent high-precision summation with exact Poisson CDFs."""
    with mpmath.workdps(dps):
        nd = mpmath.mpf(repr(noise_mean))
        nw = mpmath.mpf(repr(signal_mean))
        total = mpmath.mpf(0)
        cdf = mpmath.exp(-nd)  # P(noise <= 0)
        term = mpmath.exp(-nd)
        for s in range(1, s_max + 1):
            pmf_sig = mpmath.exp(-nw) * nw**s / mpmath.factorial(s)
            total += pmf_sig * cdf ** (n_intervals - 1)
            term = term * nd / s
            cdf += term  # now P(noise <= s)
        return float(total)


def sync_for(n_intervals: int, selection: int) -> SyncConfig:
    return SyncConfig(
        frame_period_s=n_intervals * 2e-9,
        n_intervals=n_intervals,
        interval_width_s=2e-9,
        selection_size=selection,
        pulse_width_s=1e-9,
    )


class TestMapPhysical:
    def test_zero_dark(self):
        sync = sync_for(64, 150)
        det = DetectorParams(0.0, 0.25, 0.0, 2e-9)
        p = map_physical(sync, det, 0.1)
        assert p.noise_mean == 0.0
        assert p.signal_mean == pytest.approx(150 * 0.25 * 0.1, rel=1e-12)
        assert p.n_intervals == 64

    def test_standard_noise_scale(self):
        sync = sync_for(1000, 800)
        det = DetectorParams(50.0, 0.25, 0.0, 2e-9)
        p = map_physical(sync, det, 0.0)
        assert p.noise_mean == pytest.approx(8.0e-5, rel=1e-12)

    def test_flagship_signal(self):
        sync = sync_for(64, 150)
        det = DetectorParams(0.0, 0.25, 0.0, 2e-9)
        assert map_physical(sync, det, 0.1).signal_mean == pytest.approx(3.75, rel=1e-12)


class TestNoiseCdfPower:
    def test_zero_noise(self):
        p = DimensionlessParams(0.0, 1.0, 10)
        assert noise_cdf_power(p, 0) == 1.0
        assert noise_cdf_power(p, 7) == 1.0

    def test_large_threshold_limit(self):
        p = DimensionlessParams(0.1, 1.0, 10)
        assert noise_cdf_power(p, 200) == pytest.approx(1.0, abs=1e-15)

    def test_worked_value(self):
        p = DimensionlessParams(0.1, 1.0, 10)
        assert noise_cdf_power(p, 0) == pytest.approx(math.exp(-0.9), rel=1e-12)

    def test_monotone_in_threshold(self):
        p = DimensionlessParams(0.3, 1.0, 50)
        values = [noise_cdf_power(p, s) for s in range(12)]
        assert all(b >= a for a, b in zip(values, values[1:]))


class TestPdFull:
    def test_no_signal_never_detects(self):
        assert pd_full(DimensionlessParams(0.0, 0.0, 10)) == 0.0

    def test_zero_noise_closed_form(self):
        rng = np.random.default_rng(77)
        for _ in range(1000):
            signal = float(rng.uniform(0.005, 12.0))
            n_int = int(rng.integers(2, 100_000))
            p = pd_full(DimensionlessParams(0.0, signal, n_int))
            assert abs(p - (-math.expm1(-signal))) <= 1e-12

    def test_against_independent_oracle(self):
        ours = pd_full(DimensionlessParams(0.05, 2.0, 100))
        reference = oracle_pd_full(0.05, 2.0, 100)
        assert abs(ours - reference) <= 1e-10

    def test_oracle_agreement_across_points(self):
        for nd, nw, n_int in [(0.2, 0.5, 3), (1e-4, 3.75, 1000), (0.01, 6.0, 100),
                              (0.005, 0.1, 10_000)]:
            assert abs(pd_full(DimensionlessParams(nd, nw, n_int))
                       - oracle_pd_full(nd, nw, n_int)) <= 1e-10

    def test_monotone_in_signal(self):
        for noise in (0.0, 1e-4, 1e-2):
            values = [
                pd_full(DimensionlessParams(noise, s, 1000))
                for s in np.linspace(max(noise, 0.01), 8.0, 20)
            ]
            assert all(b >= a - 1e-13 for a, b in zip(values, values[1:]))

    def test_nonincreasing_in_interval_count(self):
        for signal in np.linspace(0.1, 6.0, 20):
            values = [
                pd_full(DimensionlessParams(1e-3, signal, n))
                for n in (10, 100, 1000, 10_000, 100_000)
            ]
            assert all(b <= a + 1e-13 for a, b in zip(values, values[1:]))


class TestPdSimplified:
    def test_zero_noise_identity(self):
        rng = np.random.default_rng(78)
        for _ in range(1000):
            signal = float(rng.uniform(0.005, 12.0))
            p = DimensionlessParams(0.0, signal, int(rng.integers(2, 100_000)))
            expected = -math.expm1(-signal)
            assert abs(pd_simplified(p) - expected) <= 1e-12
            assert abs(pd_full(p) - expected) <= 1e-12

    def test_zero_signal(self):
        assert pd_simplified(DimensionlessParams(0.0, 0.0, 10)) == 0.0

    def test_agreement_at_canonical_point(self):
        p = DimensionlessParams(8e-5, 3.75, 1000)
        full, simp = pd_full(p), pd_simplified(p)
        assert abs(full - simp) / full <= 2e-4

    def test_underestimates_full_form(self):
        # dropping noise counts above one can only remove winning events
        for nd in (1e-5, 1e-4, 1e-3):
            for nw in (0.1, 1.0, 3.75):
                p = DimensionlessParams(nd, nw, 1000)
                assert pd_simplified(p) <= pd_full(p) + 1e-14


class TestPeFalse:
    def test_zero_noise_never_errs(self):
        assert pe_false(DimensionlessParams(0.0, 1.0, 10)) == 0.0

    def test_two_interval_symmetry(self):
        p = DimensionlessParams(0.3, 0.3, 2)
        assert pe_false(p) == pytest.approx(pd_full(p), rel=1e-12)

    def test_exhaustive_enumeration(self):
        nd, nw, n_int, cmax = 0.2, 0.5, 3, 30
        pmf_noise = [math.exp(-nd) * nd**c / math.factorial(c) for c in range(cmax + 1)]
        pmf_sig = [math.exp(-nw) * nw**c / math.factorial(c) for c in range(cmax + 1)]
        pd_enum = pe_enum = amb_enum = 0.0
        for counts in itertools.product(range(cmax + 1), repeat=n_int):
            prob = pmf_sig[counts[0]] * pmf_noise[counts[1]] * pmf_noise[counts[2]]
            top = max(counts)
            winners = [i for i, c in enumerate(counts) if c == top]
            if len(winners) > 1:
                amb_enum += prob
            elif winners[0] == 0:
                pd_enum += prob
            else:
                pe_enum += prob
        p = DimensionlessParams(nd, nw, n_int)
        assert abs(pe_false(p) - pe_enum) <= 1e-9
        assert abs(pd_full(p) - pd_enum) <= 1e-9
        # pd + pe + P(tied maximum) exhausts the outcome space
        assert pd_enum + pe_enum + amb_enum == pytest.approx(1.0, abs=1e-9)
        assert pd_full(p) + pe_false(p) + amb_enum == pytest.approx(1.0, abs=1e-9)

    def test_sum_bounded_by_one(self):
        for nd in (1e-4, 1e-2):
            for nw in (0.1, 2.0):
                p = DimensionlessParams(nd, nw, 100)
                assert pe_false(p) + pd_full(p) <= 1.0 + 1e-12

    def test_alternative_rule_is_complement(self):
        p = DimensionlessParams(0.05, 1.0, 10)
        assert pe_false(p, rule="any_reaches_signal") == pytest.approx(1.0 - pd_full(p), rel=1e-12)

    def test_unknown_rule_rejected(self):
        with pytest.raises(ValueError):
            pe_false(DimensionlessParams(0.1, 1.0, 3), rule="bogus")


class TestDivergenceAudit:
    def test_single_zero_noise_point(self):
        result = divergence_audit([DimensionlessParams(0.0, 1.0, 100)])
        assert result.max_relative <= 1e-14
        assert result.passed

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            divergence_audit([])

    def test_out_of_regime_point_refused(self):
        with pytest.raises(RegimeError):
            divergence_audit([DimensionlessParams(0.5, 1.0, 100)])

    def test_valid_regime_supports_the_claim(self):
        result = divergence_audit(default_audit_grid())
        assert result.max_relative_premise_ok <= AUDIT_TOLERANCE

    def test_collapse_is_localised_to_premise_violations(self):
        result = divergence_audit(default_audit_grid())
        for row in result.rows:
            if row.relative_divergence > AUDIT_TOLERANCE:
                assert row.premise > analytics.TRUNCATION_PREMISE_MAX

    def test_reports_argmax(self):
        result = divergence_audit(default_audit_grid())
        worst = max(result.rows, key=lambda r: r.relative_divergence)
        assert result.argmax == worst.params
        assert result.max_relative == worst.relative_divergence


class TestBernoulliPoissonBound:
    def test_scales_with_selection_and_square_of_mean(self):
        small = bernoulli_poisson_bound(100, 0.01, 0.0, 10)
        larger = bernoulli_poisson_bound(100, 0.02, 0.0, 10)
        assert larger == pytest.approx(4.0 * small, rel=1e-12)

    def test_clipped_at_one(self):
        assert bernoulli_poisson_bound(10_000, 0.5, 0.0, 10) == 1.0

    def test_tiny_for_flagship_parameters(self):
        assert bernoulli_poisson_bound(150, 0.025, 1e-7, 64) <= 0.15


class TestInvariants:
    def test_signal_below_noise_rejected(self):
        with pytest.raises(ValueError):
            DimensionlessParams(0.5, 0.1, 10)

    def test_single_interval_rejected(self):
        with pytest.raises(ValueError):
            DimensionlessParams(0.0, 1.0, 1)

    @given(
        st.floats(min_value=0.0, max_value=0.01),
        st.floats(min_value=0.0, max_value=6.0),
        st.integers(min_value=2, max_value=100_000),
    )
    @settings(max_examples=60, deadline=None)
    def test_probability_range(self, noise, extra_signal, n_intervals):
        p = DimensionlessParams(noise, noise + extra_signal, n_intervals)
        for value in (pd_full(p), pd_simplified(p), pe_false(p)):
            assert 0.0 <= value <= 1.0
