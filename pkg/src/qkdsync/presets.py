"""Published constants of the studied hardware, plus desk-scale scenario
builders used by the CLI and the experiment scripts."""

from __future__ import annotations

from .attack import CouplerSpec, InterferenceSpec, ScenarioConfig
from .detector import DetectorParams
from .link_budget import StageParams
from .sync_scan import SyncConfig
from .units import FiberChannel, round_trip_period

# Calibration stages of the commercial system: average power and pulse
# repetition rate measured at the transmitter output, 1 ns pulses.
STAGE1 = StageParams(average_power_dbm=-48.3, repetition_rate_hz=800.0, pulse_width_s=1e-9)
STAGE2 = StageParams(average_power_dbm=-55.8, repetition_rate_hz=800.0, pulse_width_s=1e-9)
STAGE3 = StageParams(average_power_dbm=-24.2, repetition_rate_hz=5e6, pulse_width_s=1e-9)
STAGES = {"stage1": STAGE1, "stage2": STAGE2, "stage3": STAGE3}

# Single-photon detector modules commonly deployed in these systems.
ID210 = DetectorParams(dark_rate_hz=40.0, quantum_efficiency=0.25, dead_time_s=10e-6, gate_width_s=2e-9)
ID230 = DetectorParams(dark_rate_hz=50.0, quantum_efficiency=0.25, dead_time_s=10e-6, gate_width_s=2e-9)
DETECTORS = {"id210": ID210, "id230": ID230}

# Lumped loss of the encoding station for the full round trip through it.
STATION_LOSS_DB = 47.7

# Junction/splice allowance folded into the default budget curves.
DEFAULT_JUNCTION_LOSS_DB = 2.0

# Full-scale scan schedule: 1 ms frame for a 100 km line, 2 ns slots,
# 800 polls per slot.
CLAVIS2_SYNC = SyncConfig(
    frame_period_s=1e-3,
    n_intervals=500_000,
    interval_width_s=2e-9,
    selection_size=800,
    pulse_width_s=1e-9,
)

# In-line splitters of the tapping experiment: 70/30 then 90/10.
PAPER_COUPLERS = (
    CouplerSpec(through_fraction=0.7, tap_fraction=0.3, excess_loss_db=0.0, position_m=100.0),
    CouplerSpec(through_fraction=0.9, tap_fraction=0.1, excess_loss_db=0.0, position_m=200.0),
)

EXPERIMENT_CHANNEL_LENGTH_M = 25_732.0


def experiment_channel() -> FiberChannel:
    return FiberChannel(length_m=EXPERIMENT_CHANNEL_LENGTH_M)


def desk_sync(n_intervals: int = 1280, selection_size: int = 800) -> SyncConfig:
    """Desk-scale schedule for the experiment channel: the frame period is
    the true round trip, divided into coarser slots than the full-scale
    grid so simulations stay cheap. Slot widths are far above the usual
    pulse-width band, which is intentional here (a warning is emitted)."""
    import warnings

    frame = round_trip_period(experiment_channel())
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return SyncConfig(
            frame_period_s=frame,
            n_intervals=n_intervals,
            interval_width_s=frame / n_intervals,
            selection_size=selection_size,
            pulse_width_s=1e-9,
        )


def demo_detector(base: DetectorParams = ID230, dead_time_s: float = 1e-8) -> DetectorParams:
    """Desk-scale copy of a detector with the dead time shrunk so the
    one-gate-per-frame precondition holds for short demo frames."""
    return DetectorParams(
        dark_rate_hz=base.dark_rate_hz,
        quantum_efficiency=base.quantum_efficiency,
        dead_time_s=dead_time_s,
        gate_width_s=base.gate_width_s,
    )


def scan_demo_sync(n_intervals: int = 256, selection_size: int = 800) -> SyncConfig:
    """Small scan schedule with the real 2 ns slots, for Monte-Carlo demos."""
    return SyncConfig(
        frame_period_s=n_intervals * 2e-9,
        n_intervals=n_intervals,
        interval_width_s=2e-9,
        selection_size=selection_size,
        pulse_width_s=1e-9,
    )


def _base_scenario(**overrides) -> ScenarioConfig:
    defaults = dict(
        channel=experiment_channel(),
        sync=desk_sync(),
        stage=STAGE1,
        legit_detector=ID230,
        attacker_detector=ID230,
        station_loss_db=STATION_LOSS_DB,
    )
    defaults.update(overrides)
    return ScenarioConfig(**defaults)


def scenario_clean(countermeasure_on: bool = True) -> ScenarioConfig:
    """No taps, no interference: the baseline channel."""
    return _base_scenario(countermeasure_on=countermeasure_on)


def scenario_paper_taps() -> ScenarioConfig:
    """The tapping experiment: both couplers in line, multiphoton pulses."""
    return _base_scenario(couplers=PAPER_COUPLERS, qber_observed=0.031)


def scenario_countermeasure(attacker_frames: int = 1) -> ScenarioConfig:
    """Taps in line but sync pulses attenuated to the single-photon level."""
    return _base_scenario(
        couplers=PAPER_COUPLERS,
        countermeasure_on=True,
        countermeasure_target_m=0.3,
        qber_observed=0.031,
        attacker_frames=attacker_frames,
    )


def scenario_interference(duration_s: float = 60.0) -> ScenarioConfig:
    """Bright 270 Hz pulse train injected at the last tap port while the
    system is locked."""
    sync = desk_sync()
    start = sync.scan_duration_s + 10 * sync.frame_period_s
    return _base_scenario(
        couplers=PAPER_COUPLERS,
        interference=InterferenceSpec(
            pulse_width_s=1e-9, rate_hz=270.0, start_s=start, duration_s=duration_s
        ),
        qber_observed=0.031,
    )


SCENARIOS = {
    "clean": scenario_clean,
    "paper-taps": scenario_paper_taps,
    "countermeasure": scenario_countermeasure,
    "interference": scenario_interference,
}
