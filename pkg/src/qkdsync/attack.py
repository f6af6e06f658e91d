"""Fiber-tap attacker model and end-to-end scenario runner.

Two in-line couplers divert fixed fractions of the pulse train to an
eavesdropper, who times the forward and mirror-reflected passes to infer
the channel length, and runs their own interval scan on the tapped light.
The scenario runner plays the legitimate scan, a post-lock monitoring
phase with an interference source injected at a tap port, and the
attacker's observations, and reports both sides' outcomes.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import sync_scan
from .analytics import DimensionlessParams, pd_full
from .detector import DetectorParams, registration_probability
from .link_budget import StageParams, classify_pulse
from .sync_scan import ConfigurationError, SignalPlacement, SyncConfig
from .units import FiberChannel, db_loss_to_fraction, photon_energy, round_trip_period

# Key exchange aborts above this error rate; the simulator only checks a
# configured value against it, it never computes one.
QBER_ABORT_THRESHOLD = 0.11

DEFAULT_MONITORING_FRAMES = 5000


@dataclass(frozen=True)
class CouplerSpec:
    """Passive splitter in the line: through port, tap port, excess loss."""

    through_fraction: float
    tap_fraction: float
    excess_loss_db: float = 0.0
    position_m: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 < self.through_fraction <= 1.0):
            raise ValueError(
                f"through_fraction must lie in (0, 1], got {self.through_fraction}"
            )
        if not (0.0 <= self.tap_fraction < 1.0):
            raise ValueError(
                f"tap_fraction must lie in [0, 1), got {self.tap_fraction}"
            )
        if self.through_fraction + self.tap_fraction > 1.0 + 1e-12:
            raise ValueError("through_fraction + tap_fraction must not exceed 1")
        if not (self.excess_loss_db >= 0.0):
            raise ValueError(f"excess_loss_db must be >= 0, got {self.excess_loss_db}")
        if not (self.position_m >= 0.0):
            raise ValueError(f"position_m must be >= 0, got {self.position_m}")


@dataclass(frozen=True)
class TapObservation:
    arrival_time_s: float
    direction: str  # "forward" | "reflected"
    mean_photons: float
    registered: bool

    def __post_init__(self) -> None:
        if self.direction not in ("forward", "reflected"):
            raise ValueError(f"direction must be forward|reflected, got {self.direction}")
        if not (self.mean_photons >= 0.0):
            raise ValueError(f"mean_photons must be >= 0, got {self.mean_photons}")


@dataclass(frozen=True)
class InterferenceSpec:
    """Bright pulse train injected at the last tap port toward the
    transmitter. The first pulse lands at a uniformly random phase within
    one period after start_s; the train is periodic afterwards."""

    pulse_width_s: float
    rate_hz: float
    start_s: float
    duration_s: float

    def __post_init__(self) -> None:
        if not (self.rate_hz > 0.0):
            raise ValueError(f"rate_hz must be > 0, got {self.rate_hz}")
        if not (self.pulse_width_s > 0.0):
            raise ValueError(f"pulse_width_s must be > 0, got {self.pulse_width_s}")
        if not (self.start_s >= 0.0):
            raise ValueError(f"start_s must be >= 0, got {self.start_s}")
        if not (self.duration_s > 0.0):
            raise ValueError(f"duration_s must be > 0, got {self.duration_s}")


@dataclass(frozen=True)
class ScenarioConfig:
    channel: FiberChannel
    sync: SyncConfig
    stage: StageParams
    legit_detector: DetectorParams
    attacker_detector: DetectorParams
    couplers: tuple[CouplerSpec, ...] = ()
    interference: Optional[InterferenceSpec] = None
    countermeasure_on: bool = False
    countermeasure_target_m: float = 0.3
    station_loss_db: float = 47.7
    extra_loss_db: float = 0.0
    qber_observed: Optional[float] = None
    monitoring_frames: Optional[int] = None
    attacker_frames: int = 1
    attacker_timing_resolution_s: float = 1e-9
    watchdog_window_frames: int = 16
    watchdog_threshold: int = 2
    relock_after_resync: bool = True

    def __post_init__(self) -> None:
        positions = [c.position_m for c in self.couplers]
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise ConfigurationError("coupler positions must be strictly increasing")
        if positions and positions[-1] > self.channel.length_m:
            raise ConfigurationError("coupler positions must lie within the channel")
        if not (self.countermeasure_target_m > 0.0):
            raise ConfigurationError("countermeasure_target_m must be > 0")
        if not (self.station_loss_db >= 0.0 and self.extra_loss_db >= 0.0):
            raise ConfigurationError("loss components must be >= 0")
        if not (self.attacker_frames >= 1):
            raise ConfigurationError("attacker_frames must be >= 1")
        if not (self.attacker_timing_resolution_s > 0.0):
            raise ConfigurationError("attacker_timing_resolution_s must be > 0")
        if self.watchdog_window_frames < 1 or self.watchdog_threshold < 1:
            raise ConfigurationError("watchdog parameters must be >= 1")


@dataclass(frozen=True)
class ScenarioReport:
    legit_sync_outcome: str  # "detected" | "ambiguous" | "resync_triggered"
    resync_count: int
    attacker_length_estimate_m: Optional[float]
    attacker_length_error_m: Optional[float]
    attacker_pd: Optional[float]
    qber_gate_pass: bool
    metadata: dict = field(default_factory=dict)

    def to_document(self) -> dict:
        return {
            "legit_sync_outcome": self.legit_sync_outcome,
            "resync_count": self.resync_count,
            "attacker_length_estimate_m": self.attacker_length_estimate_m,
            "attacker_length_error_m": self.attacker_length_error_m,
            "attacker_pd": self.attacker_pd,
            "qber_gate_pass": self.qber_gate_pass,
            "metadata": self.metadata,
        }


def propagate_through_taps(
    m_in: float, couplers: Sequence[CouplerSpec], direction: str = "forward"
) -> tuple[float, list[float]]:
    """Apply the coupler chain to a mean photon number.

    Returns the through-port mean and the per-tap means, the latter
    aligned with the couplers argument regardless of direction. Reflected
    propagation traverses the chain in reverse positional order.
    """
    if direction not in ("forward", "reflected"):
        raise ValueError(f"direction must be forward|reflected, got {direction}")
    order = range(len(couplers)) if direction == "forward" else range(len(couplers) - 1, -1, -1)
    taps = [0.0] * len(couplers)
    m = m_in
    for i in order:
        c = couplers[i]
        excess = db_loss_to_fraction(c.excess_loss_db)
        taps[i] = m * c.tap_fraction * excess
        m = m * c.through_fraction * excess
    return m, taps


def attacker_estimate_length(
    forward_obs: TapObservation,
    reflected_obs: TapObservation,
    tap_position_m: float,
    channel: FiberChannel,
) -> float:
    """Channel length inferred from the forward/reflected time difference
    at one tap: position + v * dt / 2."""
    if not (forward_obs.registered and reflected_obs.registered):
        raise ValueError("both observations must be registered")
    if forward_obs.direction != "forward" or reflected_obs.direction != "reflected":
        raise ValueError("observations must be one forward and one reflected")
    dt = reflected_obs.arrival_time_s - forward_obs.arrival_time_s
    if dt < 0.0:
        raise ValueError("reflected observation precedes forward observation")
    return tap_position_m + channel.group_velocity_m_per_s * dt / 2.0


def attacker_detection_probability(
    m_at_tap: float,
    attacker_det: DetectorParams,
    frames: int,
    n_intervals: int,
) -> float:
    """Probability the attacker's own interval scan locks onto the pulse
    within the given number of frames per interval."""
    if not (m_at_tap >= 0.0):
        raise ValueError(f"m_at_tap must be >= 0, got {m_at_tap}")
    if frames < 1:
        raise ValueError(f"frames must be >= 1, got {frames}")
    noise = frames * attacker_det.dark_rate_hz * attacker_det.gate_width_s
    signal = noise + frames * attacker_det.quantum_efficiency * m_at_tap
    if signal == 0.0:
        return 0.0
    return pd_full(
        DimensionlessParams(noise_mean=noise, signal_mean=signal, n_intervals=n_intervals)
    )


def _subseed(seed: int, *key: int) -> int:
    state = np.random.SeedSequence(seed, spawn_key=tuple(key)).generate_state(2)
    return int(state.view(np.uint64)[0])


def _fiber_fraction(channel: FiberChannel, meters: float) -> float:
    return db_loss_to_fraction(channel.attenuation_db_per_km * meters / 1000.0)


@dataclass(frozen=True)
class _LinkMeans:
    """Mean photon numbers around the loop, before detection efficiency."""

    at_transmitter: float
    at_legit_detector: float
    forward_taps: tuple[float, ...]
    reflected_taps: tuple[float, ...]
    attenuation_inserted_db: float


def _link_means(cfg: ScenarioConfig) -> tuple[_LinkMeans, list[str]]:
    notes = []
    channel = cfg.channel
    m_tx = cfg.stage.pulse_energy_j / photon_energy(channel)
    length = channel.length_m

    # Forward pass: walk the line transmitter -> mirror, collecting taps.
    forward_taps = []
    m = m_tx
    prev_pos = 0.0
    for c in cfg.couplers:
        m *= _fiber_fraction(channel, c.position_m - prev_pos)
        excess = db_loss_to_fraction(c.excess_loss_db)
        forward_taps.append(m * c.tap_fraction * excess)
        m *= c.through_fraction * excess
        prev_pos = c.position_m
    m_at_station = m * _fiber_fraction(channel, length - prev_pos)

    # Station round trip: lumped station loss, any fixed extra loss, and
    # the countermeasure attenuator when enabled.
    station_db = cfg.station_loss_db + cfg.extra_loss_db
    m_exit_no_cm = m_at_station * db_loss_to_fraction(station_db)

    # Return pass scale from the station exit down to the transmitter.
    def walk_back(m_exit: float) -> tuple[float, list[float]]:
        taps = [0.0] * len(cfg.couplers)
        m_back = m_exit
        prev = length
        for i in range(len(cfg.couplers) - 1, -1, -1):
            c = cfg.couplers[i]
            m_back *= _fiber_fraction(channel, prev - c.position_m)
            excess = db_loss_to_fraction(c.excess_loss_db)
            taps[i] = m_back * c.tap_fraction * excess
            m_back *= c.through_fraction * excess
            prev = c.position_m
        m_back *= _fiber_fraction(channel, prev)
        return m_back, taps

    m_legit_no_cm, _ = walk_back(m_exit_no_cm)
    attenuation_db = 0.0
    if cfg.countermeasure_on:
        target = cfg.countermeasure_target_m
        if target < m_legit_no_cm:
            attenuation_db = 10.0 * math.log10(m_legit_no_cm / target)
        else:
            notes.append(
                f"countermeasure target {target} at or above achievable mean "
                f"{m_legit_no_cm:.4g}; no attenuation inserted"
            )
    m_exit = m_exit_no_cm * db_loss_to_fraction(attenuation_db)
    m_legit, reflected_taps = walk_back(m_exit)

    return (
        _LinkMeans(
            at_transmitter=m_tx,
            at_legit_detector=m_legit,
            forward_taps=tuple(forward_taps),
            reflected_taps=tuple(reflected_taps),
            attenuation_inserted_db=attenuation_db,
        ),
        notes,
    )


def _interference_hit_prob(cfg: ScenarioConfig) -> float:
    """Chance one frame's open gate catches an interference pulse while
    the source is active."""
    spec = cfg.interference
    window = cfg.sync.interval_width_s + spec.pulse_width_s
    return -math.expm1(-spec.rate_hz * window)


def _scan_pollution(
    cfg: ScenarioConfig, scan_start_s: float
) -> Optional[np.ndarray]:
    """Per-slot probability of an interference registration during that
    slot's polling block of a scan starting at scan_start_s."""
    spec = cfg.interference
    if spec is None:
        return None
    sync = cfg.sync
    block = sync.selection_size * sync.frame_period_s
    starts = scan_start_s + np.arange(sync.n_intervals) * block
    ends = starts + block
    a0, a1 = spec.start_s, spec.start_s + spec.duration_s
    overlap = np.clip(np.minimum(ends, a1) - np.maximum(starts, a0), 0.0, block)
    return _interference_hit_prob(cfg) * overlap / block


def _scan_once(
    cfg: ScenarioConfig,
    placement: SignalPlacement,
    scan_start_s: float,
    seed: int,
    scan_index: int,
) -> sync_scan.ScanResult:
    extra = _scan_pollution(cfg, scan_start_s)
    return sync_scan.run_scan(
        cfg.sync,
        placement,
        cfg.legit_detector,
        seed=_subseed(seed, 0, scan_index),
        extra_prob=extra,
    )


def _monitoring_events(
    cfg: ScenarioConfig,
    placement: SignalPlacement,
    t0: float,
    t1: float,
    seed: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Registrations in [t0, t1) as (times, slots, frames), time-sorted
    and dead-time filtered: signal verifications, dark counts, and bright
    interference pulses.

    Monitoring gates the whole frame, so dark counts arrive at the full
    rate and every interference pulse inside the span can register. Slot
    and frame are assigned at generation; recovering them from the
    timestamp would misattribute events sitting exactly on a boundary.
    """
    sync = cfg.sync
    det = cfg.legit_detector
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1,)))
    span = t1 - t0
    empty = np.empty(0), np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    if span <= 0.0:
        return empty

    first_frame = int(math.ceil(t0 / sync.frame_period_s))
    last_frame = int(math.floor(t1 / sync.frame_period_s))
    n_frames = max(0, last_frame - first_frame)
    p_sig = registration_probability(placement.mean_photoelectrons, det)
    sig_frames = first_frame + np.flatnonzero(rng.random(n_frames) < p_sig)
    sig_times = sig_frames * sync.frame_period_s + placement.onset_s
    sig_slot = min(int(placement.onset_s / sync.interval_width_s), sync.n_intervals - 1)
    sig_slots = np.full(sig_frames.shape, sig_slot, dtype=np.int64)

    n_dark = rng.poisson(det.dark_rate_hz * span)
    dark_frames = rng.integers(first_frame, max(first_frame + 1, last_frame), n_dark)
    dark_phases = rng.random(n_dark) * sync.frame_period_s
    dark_times = dark_frames * sync.frame_period_s + dark_phases
    dark_slots = np.minimum(
        (dark_phases / sync.interval_width_s).astype(np.int64), sync.n_intervals - 1
    )

    inter_times = np.empty(0)
    spec = cfg.interference
    if spec is not None:
        phase_rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(3,)))
        period = 1.0 / spec.rate_hz
        first = spec.start_s + phase_rng.random() * period
        end = spec.start_s + spec.duration_s
        k = np.arange(int(math.ceil((end - first) / period)) + 1)
        times = first + k * period
        inter_times = times[(times >= t0) & (times < min(t1, end))]
    inter_frames = (inter_times / sync.frame_period_s).astype(np.int64)
    inter_phases = inter_times - inter_frames * sync.frame_period_s
    inter_slots = np.minimum(
        (inter_phases / sync.interval_width_s).astype(np.int64), sync.n_intervals - 1
    )

    times = np.concatenate([sig_times, dark_times, inter_times])
    slots = np.concatenate([sig_slots, dark_slots, inter_slots])
    frames = np.concatenate([sig_frames, dark_frames, inter_frames])
    order = np.argsort(times, kind="stable")
    times, slots, frames = times[order], slots[order], frames[order]
    if times.size == 0 or det.dead_time_s == 0.0:
        return times, slots, frames
    keep = np.zeros(times.size, dtype=bool)
    last = -math.inf
    for i, t in enumerate(times):
        if t - last >= det.dead_time_s:
            keep[i] = True
            last = t
    return times[keep], slots[keep], frames[keep]


def run_scenario(cfg: ScenarioConfig, seed: int) -> ScenarioReport:
    """Play one full scenario deterministically for the given seed."""
    sync = cfg.sync
    channel = cfg.channel
    means, notes = _link_means(cfg)

    onset = round_trip_period(channel) % sync.frame_period_s
    placement = SignalPlacement(onset_s=onset, mean_photoelectrons=means.at_legit_detector)
    lock_slots = set(sync_scan.correct_indices(placement, sync))

    # Initial lock.
    scan_index = 0
    result = _scan_once(cfg, placement, 0.0, seed, scan_index)
    notes.extend(result.warnings)
    outcome = result.decision
    resync_count = 0

    # Post-lock monitoring with the foreign-pulse watchdog: a resync fires
    # when any slot outside the lock accumulates watchdog_threshold
    # registrations within watchdog_window_frames consecutive frames.
    if result.decision == "detected":
        monitor_start = sync.scan_duration_s
        if cfg.monitoring_frames is not None:
            horizon_frames = cfg.monitoring_frames
        elif cfg.interference is not None:
            activity_end = cfg.interference.start_s + cfg.interference.duration_s
            extra = max(0.0, activity_end - monitor_start) / sync.frame_period_s
            horizon_frames = int(math.ceil(extra)) + DEFAULT_MONITORING_FRAMES
        else:
            horizon_frames = DEFAULT_MONITORING_FRAMES
        monitor_end = monitor_start + horizon_frames * sync.frame_period_s

        times, slots, frames = _monitoring_events(
            cfg, placement, monitor_start, monitor_end, seed
        )
        recent: dict[int, deque] = {}
        resume_at = monitor_start
        for t, slot, frame in zip(times, slots, frames):
            if t < resume_at:
                continue
            if slot in lock_slots:
                continue
            dq = recent.setdefault(slot, deque())
            dq.append(frame)
            while dq and frame - dq[0] >= cfg.watchdog_window_frames:
                dq.popleft()
            if len(dq) >= cfg.watchdog_threshold:
                resync_count += 1
                if not cfg.relock_after_resync:
                    outcome = "resync_triggered"
                    break
                scan_index += 1
                result = _scan_once(cfg, placement, t, seed, scan_index)
                outcome = result.decision
                if outcome != "detected":
                    break
                resume_at = t + sync.scan_duration_s
                recent.clear()

    # Attacker side.
    attacker_pd = None
    estimate = None
    error = None
    if cfg.couplers:
        obs_rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(2,)))
        res = cfg.attacker_timing_resolution_s
        v = channel.group_velocity_m_per_s
        observations = []
        for c, m_fwd, m_ref in zip(cfg.couplers, means.forward_taps, means.reflected_taps):
            t_fwd = round((c.position_m / v) / res) * res
            t_ref = round(((2.0 * channel.length_m - c.position_m) / v) / res) * res
            p_f = registration_probability(m_fwd, cfg.attacker_detector)
            p_r = registration_probability(m_ref, cfg.attacker_detector)
            fwd = TapObservation(t_fwd, "forward", m_fwd, bool(obs_rng.random() < p_f))
            ref = TapObservation(t_ref, "reflected", m_ref, bool(obs_rng.random() < p_r))
            observations.append((c, fwd, ref))

        usable = [o for o in observations if o[1].registered and o[2].registered]
        if usable:
            c, fwd, ref = max(usable, key=lambda o: o[2].mean_photons)
            estimate = attacker_estimate_length(fwd, ref, c.position_m, channel)
            error = abs(estimate - channel.length_m)
        best_reflected = max(means.reflected_taps)
        attacker_pd = attacker_detection_probability(
            best_reflected, cfg.attacker_detector, cfg.attacker_frames, sync.n_intervals
        )

    qber_gate_pass = cfg.qber_observed is None or cfg.qber_observed <= QBER_ABORT_THRESHOLD

    metadata = {
        "mode": "single_photon" if cfg.countermeasure_on else classify_pulse(
            means.at_legit_detector
        ),
        "mean_photons_at_transmitter": means.at_transmitter,
        "mean_photons_at_legit_detector": means.at_legit_detector,
        "attenuation_inserted_db": means.attenuation_inserted_db,
        "forward_tap_means": list(means.forward_taps),
        "reflected_tap_means": list(means.reflected_taps),
        "signal_onset_s": onset,
        "lock_slots": sorted(lock_slots),
        "straddle_rule": "a slot holding at least half the pulse counts as correct",
        "resync_rule": (
            "stand-in watchdog: resync when any non-lock slot registers "
            f"{cfg.watchdog_threshold}+ times within {cfg.watchdog_window_frames} frames"
        ),
        "notes": notes,
    }
    return ScenarioReport(
        legit_sync_outcome=outcome,
        resync_count=resync_count,
        attacker_length_estimate_m=estimate,
        attacker_length_error_m=error,
        attacker_pd=attacker_pd,
        qber_gate_pass=qber_gate_pass,
        metadata=metadata,
    )


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    """JSON-ready mapping mirroring the constructor arguments."""
    return {
        "channel": {
            "length_m": cfg.channel.length_m,
            "attenuation_db_per_km": cfg.channel.attenuation_db_per_km,
            "group_velocity_m_per_s": cfg.channel.group_velocity_m_per_s,
            "wavelength_nm": cfg.channel.wavelength_nm,
        },
        "sync": {
            "frame_period_s": cfg.sync.frame_period_s,
            "n_intervals": cfg.sync.n_intervals,
            "interval_width_s": cfg.sync.interval_width_s,
            "selection_size": cfg.sync.selection_size,
            "pulse_width_s": cfg.sync.pulse_width_s,
        },
        "stage": {
            "average_power_dbm": cfg.stage.average_power_dbm,
            "repetition_rate_hz": cfg.stage.repetition_rate_hz,
            "pulse_width_s": cfg.stage.pulse_width_s,
        },
        "legit_detector": _detector_to_dict(cfg.legit_detector),
        "attacker_detector": _detector_to_dict(cfg.attacker_detector),
        "couplers": [
            {
                "through_fraction": c.through_fraction,
                "tap_fraction": c.tap_fraction,
                "excess_loss_db": c.excess_loss_db,
                "position_m": c.position_m,
            }
            for c in cfg.couplers
        ],
        "interference": None
        if cfg.interference is None
        else {
            "pulse_width_s": cfg.interference.pulse_width_s,
            "rate_hz": cfg.interference.rate_hz,
            "start_s": cfg.interference.start_s,
            "duration_s": cfg.interference.duration_s,
        },
        "countermeasure_on": cfg.countermeasure_on,
        "countermeasure_target_m": cfg.countermeasure_target_m,
        "station_loss_db": cfg.station_loss_db,
        "extra_loss_db": cfg.extra_loss_db,
        "qber_observed": cfg.qber_observed,
        "monitoring_frames": cfg.monitoring_frames,
        "attacker_frames": cfg.attacker_frames,
        "attacker_timing_resolution_s": cfg.attacker_timing_resolution_s,
        "watchdog_window_frames": cfg.watchdog_window_frames,
        "watchdog_threshold": cfg.watchdog_threshold,
        "relock_after_resync": cfg.relock_after_resync,
    }


def _detector_to_dict(det: DetectorParams) -> dict:
    return {
        "dark_rate_hz": det.dark_rate_hz,
        "quantum_efficiency": det.quantum_efficiency,
        "dead_time_s": det.dead_time_s,
        "gate_width_s": det.gate_width_s,
    }


def scenario_from_dict(data: dict) -> ScenarioConfig:
    """Build a configuration from a parsed JSON mapping, rejecting unknown
    keys so typos surface instead of being ignored."""
    known = {
        "channel", "sync", "stage", "legit_detector", "attacker_detector",
        "couplers", "interference", "countermeasure_on", "countermeasure_target_m",
        "station_loss_db", "extra_loss_db", "qber_observed", "monitoring_frames",
        "attacker_frames", "attacker_timing_resolution_s",
        "watchdog_window_frames", "watchdog_threshold", "relock_after_resync",
    }
    unknown = set(data) - known
    if unknown:
        raise ConfigurationError(f"unknown scenario keys: {sorted(unknown)}")
    try:
        channel = FiberChannel(**data["channel"])
        sync = SyncConfig(**data["sync"])
        stage = StageParams(**data["stage"])
        legit = DetectorParams(**data["legit_detector"])
        attacker = DetectorParams(**data["attacker_detector"])
    except KeyError as exc:
        raise ConfigurationError(f"missing scenario section: {exc}") from exc
    couplers = tuple(CouplerSpec(**c) for c in data.get("couplers", []))
    interference = (
        InterferenceSpec(**data["interference"])
        if data.get("interference") is not None
        else None
    )
    extras = {
        k: data[k]
        for k in known
        - {"channel", "sync", "stage", "legit_detector", "attacker_detector",
           "couplers", "interference"}
        if k in data
    }
    return ScenarioConfig(
        channel=channel,
        sync=sync,
        stage=stage,
        legit_detector=legit,
        attacker_detector=attacker,
        couplers=couplers,
        interference=interference,
        **extras,
    )
