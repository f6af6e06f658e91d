"""Monte-Carlo simulation of the frame-scanned interval-detection procedure.

A frame of period T is divided into n_intervals slots of width tau_w. The
scanner polls one slot per frame, N frames per slot, accumulating one
count array entry per slot; the slot with the unique maximum count is
declared the signal position. Counts per slot are Binomial(N, p) with p
the per-gate registration probability, which is exactly the distribution
of N sequential gate samples.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from . import detector as det_mod
from .detector import DetectorParams, registration_probability
from .link_budget import classify_pulse

FRAME_REL_TOL = 1e-9
MIN_TRIALS = 100

# Slot width relative to pulse width outside this band is unusual but
# allowed; construction emits a warning instead of failing.
WIDTH_RATIO_MIN = 2.0
WIDTH_RATIO_MAX = 4.0


class ConfigurationError(ValueError):
    """A configuration violates a precondition of the simulation."""


@dataclass(frozen=True)
class SyncConfig:
    """Scan schedule: frame period, slot grid, and polls per slot."""

    frame_period_s: float
    n_intervals: int
    interval_width_s: float
    selection_size: int
    pulse_width_s: float

    def __post_init__(self) -> None:
        if self.n_intervals < 2:
            raise ValueError(f"n_intervals must be >= 2, got {self.n_intervals}")
        if self.selection_size < 1:
            raise ValueError(f"selection_size must be >= 1, got {self.selection_size}")
        for name in ("frame_period_s", "interval_width_s", "pulse_width_s"):
            if not (getattr(self, name) > 0.0):
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        product = self.n_intervals * self.interval_width_s
        if abs(product - self.frame_period_s) > FRAME_REL_TOL * self.frame_period_s:
            raise ValueError(
                "frame_period_s must equal n_intervals * interval_width_s "
                f"({self.frame_period_s} vs {product})"
            )
        ratio = self.interval_width_s / self.pulse_width_s
        if not (WIDTH_RATIO_MIN <= ratio <= WIDTH_RATIO_MAX):
            warnings.warn(
                f"interval_width_s is {ratio:.3g}x the pulse width, outside "
                f"the recommended [{WIDTH_RATIO_MIN:g}, {WIDTH_RATIO_MAX:g}] band",
                stacklevel=2,
            )

    @property
    def scan_duration_s(self) -> float:
        return self.n_intervals * self.selection_size * self.frame_period_s


@dataclass(frozen=True)
class SignalPlacement:
    """Where in the frame the pulse arrives and how bright it is.

    mean_photoelectrons is the mean photon number delivered to the
    detector per pulse; quantum efficiency is applied at detection.
    """

    onset_s: float
    mean_photoelectrons: float

    def validate(self, sync: SyncConfig) -> None:
        if not (0.0 <= self.onset_s < sync.frame_period_s):
            raise ValueError(
                f"onset_s must lie in [0, frame period), got {self.onset_s}"
            )
        if not (self.mean_photoelectrons >= 0.0):
            raise ValueError(
                f"mean_photoelectrons must be >= 0, got {self.mean_photoelectrons}"
            )


@dataclass(frozen=True)
class ScanResult:
    counts: tuple[int, ...]
    decision: str  # "detected" | "ambiguous"
    detected_index: Optional[int]
    scan_duration_s: float
    warnings: tuple[str, ...] = ()

    def to_document(self, sync: SyncConfig, seed: int) -> dict:
        """JSON-ready document: counts, decision, config echo, seed."""
        return {
            "counts": list(self.counts),
            "decision": self.decision,
            "detected_index": self.detected_index,
            "scan_duration_s": self.scan_duration_s,
            "warnings": list(self.warnings),
            "seed": seed,
            "config": {
                "frame_period_s": sync.frame_period_s,
                "n_intervals": sync.n_intervals,
                "interval_width_s": sync.interval_width_s,
                "selection_size": sync.selection_size,
                "pulse_width_s": sync.pulse_width_s,
            },
        }


@dataclass(frozen=True)
class PdEstimate:
    p_hat: float
    ci_low: float
    ci_high: float
    successes: int
    trials: int


def split_signal(
    placement: SignalPlacement, sync: SyncConfig
) -> tuple[int, float, int, float]:
    """Slot indices and overlap shares of the pulse.

    Returns (j1, share1, j2, share2) with share1 + share2 == 1 exactly;
    share2 is zero when the pulse fits inside one slot. j2 is always the
    cyclic successor of j1.
    """
    placement.validate(sync)
    tau_w = sync.interval_width_s
    j1 = min(int(placement.onset_s / tau_w), sync.n_intervals - 1)
    j2 = (j1 + 1) % sync.n_intervals
    boundary = (j1 + 1) * tau_w
    end = placement.onset_s + sync.pulse_width_s
    if end <= boundary:
        return j1, 1.0, j2, 0.0
    share1 = (boundary - placement.onset_s) / sync.pulse_width_s
    share1 = min(max(share1, 0.0), 1.0)
    return j1, share1, j2, 1.0 - share1


def correct_indices(placement: SignalPlacement, sync: SyncConfig) -> tuple[int, ...]:
    """Slots that count as a correct detection: any slot holding at least
    half of the pulse. A symmetric straddle admits both neighbours."""
    j1, share1, j2, share2 = split_signal(placement, sync)
    hits = []
    if share1 >= 0.5:
        hits.append(j1)
    if share2 >= 0.5:
        hits.append(j2)
    return tuple(hits)


def gate_probabilities(
    placement: SignalPlacement,
    sync: SyncConfig,
    det: DetectorParams,
    extra_prob: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Per-gate registration probability for each slot.

    extra_prob, when given, is a per-slot probability of an additional
    independent registration source (e.g. injected pulses) and combines
    as 1 - (1-p)(1-q).
    """
    j1, share1, j2, share2 = split_signal(placement, sync)
    n_s = placement.mean_photoelectrons
    p_dark = registration_probability(0.0, det)
    probs = np.full(sync.n_intervals, p_dark)
    probs[j1] = registration_probability(share1 * n_s, det)
    if share2 > 0.0:
        probs[j2] = registration_probability(share2 * n_s, det)
    if extra_prob is not None:
        probs = 1.0 - (1.0 - probs) * (1.0 - np.asarray(extra_prob))
    return probs


def _decide(counts: np.ndarray) -> tuple[str, Optional[int]]:
    top = int(counts.max())
    winners = np.flatnonzero(counts == top)
    if len(winners) == 1:
        return "detected", int(winners[0])
    return "ambiguous", None


def trial_rng(seed: int, trial_index: int = 0) -> np.random.Generator:
    """Generator for one trial, derived from (master seed, trial index)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial_index,)))


def _sample_counts(
    probs: np.ndarray, selection_size: int, rng: np.random.Generator
) -> np.ndarray:
    return rng.binomial(selection_size, probs)


def run_scan(
    sync: SyncConfig,
    placement: SignalPlacement,
    det: DetectorParams,
    seed: int,
    extra_prob: Optional[np.ndarray] = None,
) -> ScanResult:
    """Simulate one full scan of all slots.

    Requires the dead time to be negligible against the frame period,
    since the one-gate-per-frame schedule is what justifies ignoring it.
    """
    if not det_mod.dead_time_ignorable(sync, det):
        raise ConfigurationError(
            f"dead time {det.dead_time_s} is not negligible against the "
            f"frame period {sync.frame_period_s}"
        )
    placement.validate(sync)
    notes = []
    if classify_pulse(placement.mean_photoelectrons) != "single_photon":
        notes.append(
            f"mean photon number {placement.mean_photoelectrons:.4g} is not "
            "in the single-photon regime"
        )
    probs = gate_probabilities(placement, sync, det, extra_prob)
    counts = _sample_counts(probs, sync.selection_size, trial_rng(seed))
    decision, index = _decide(counts)
    return ScanResult(
        counts=tuple(int(c) for c in counts),
        decision=decision,
        detected_index=index,
        scan_duration_s=sync.scan_duration_s,
        warnings=tuple(notes),
    )


def wilson_interval(
    successes: int, trials: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    z = float(stats.norm.ppf(0.5 + confidence / 2.0))
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * np.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def estimate_pd(
    sync: SyncConfig,
    placement: SignalPlacement,
    det: DetectorParams,
    trials: int,
    seed: int,
    confidence: float = 0.95,
    extra_prob: Optional[np.ndarray] = None,
) -> PdEstimate:
    """Monte-Carlo estimate of the correct-detection probability.

    A trial succeeds when the unique argmax lands on a slot holding at
    least half of the pulse; ambiguous outcomes count as failures.
    Trials draw independent generators from (seed, trial index), so the
    result does not depend on how trials are scheduled.
    """
    if trials < MIN_TRIALS:
        raise ValueError(f"trials must be >= {MIN_TRIALS}, got {trials}")
    if not det_mod.dead_time_ignorable(sync, det):
        raise ConfigurationError(
            f"dead time {det.dead_time_s} is not negligible against the "
            f"frame period {sync.frame_period_s}"
        )
    placement.validate(sync)
    probs = gate_probabilities(placement, sync, det, extra_prob)
    target = set(correct_indices(placement, sync))
    successes = 0
    for i in range(trials):
        counts = _sample_counts(probs, sync.selection_size, trial_rng(seed, i))
        decision, index = _decide(counts)
        if decision == "detected" and index in target:
            successes += 1
    low, high = wilson_interval(successes, trials, confidence)
    return PdEstimate(
        p_hat=successes / trials,
        ci_low=low,
        ci_high=high,
        successes=successes,
        trials=trials,
    )
