"""Mean photon number per pulse at the detector, as a function of the link.

The transmitter emits a periodic pulse train characterised by an average
optical power and a repetition rate, so the per-pulse energy is P / f.
Pulses make a round trip over the fiber (out to a mirror and back), which
is why the fiber loss enters twice in :class:`PathLoss`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Literal, Sequence

from .units import FiberChannel, dbm_to_watts, db_loss_to_fraction, photon_energy

PulseClass = Literal["single_photon", "photon", "multiphoton"]

# Class boundaries: m < 1 single photon, 1 <= m < 10 photon, m >= 10
# multiphoton (closed-above convention for the boundary values).
SINGLE_PHOTON_MAX = 1.0
PHOTON_MAX = 10.0


@dataclass(frozen=True)
class StageParams:
    """Average power and timing of one calibration stage of the pulse train."""

    average_power_dbm: float
    repetition_rate_hz: float
    pulse_width_s: float

    def __post_init__(self) -> None:
        if not (self.repetition_rate_hz > 0.0):
            raise ValueError(
                f"repetition_rate_hz must be > 0, got {self.repetition_rate_hz}"
            )
        if not (self.pulse_width_s > 0.0):
            raise ValueError(f"pulse_width_s must be > 0, got {self.pulse_width_s}")
        if self.pulse_width_s * self.repetition_rate_hz > 1.0:
            raise ValueError("duty cycle above unity: pulse_width_s * repetition_rate_hz > 1")

    @property
    def pulse_energy_j(self) -> float:
        return dbm_to_watts(self.average_power_dbm) / self.repetition_rate_hz


@dataclass(frozen=True)
class PathLoss:
    """Loss budget of the two-pass link, all components in dB.

    fiber_one_way_db is counted twice in the total because the pulse
    traverses the fiber out and back.
    """

    station_loss_db: float = 0.0
    fiber_one_way_db: float = 0.0
    extra_db: float = 0.0

    def __post_init__(self) -> None:
        for name in ("station_loss_db", "fiber_one_way_db", "extra_db"):
            value = getattr(self, name)
            if not (value >= 0.0):
                raise ValueError(f"{name} must be >= 0, got {value}")

    @property
    def total_db(self) -> float:
        return self.station_loss_db + 2.0 * self.fiber_one_way_db + self.extra_db


class InfeasibleTargetError(ValueError):
    """Requested mean photon number exceeds what the link can deliver."""


def mean_photons_per_pulse(stage: StageParams, loss: PathLoss, channel: FiberChannel) -> float:
    """Mean photon number of one pulse arriving at the detector."""
    return stage.pulse_energy_j / photon_energy(channel) * db_loss_to_fraction(loss.total_db)


def classify_pulse(m: float) -> PulseClass:
    """Bucket a mean photon number into the three operating regimes."""
    if not (m >= 0.0):
        raise ValueError(f"mean photon number must be >= 0, got {m}")
    if m < SINGLE_PHOTON_MAX:
        return "single_photon"
    if m < PHOTON_MAX:
        return "photon"
    return "multiphoton"


def photon_curve(
    stage: StageParams,
    loss_station_db: float,
    channel_template: FiberChannel,
    lengths_m: Sequence[float],
    extra_db: float = 0.0,
) -> list[tuple[float, float]]:
    """Mean photon number versus channel length, one point per length.

    lengths_m must be nonnegative and sorted ascending.
    """
    previous = None
    for length in lengths_m:
        if length < 0.0:
            raise ValueError(f"lengths must be >= 0, got {length}")
        if previous is not None and length < previous:
            raise ValueError("lengths_m must be sorted ascending")
        previous = length
    curve = []
    for length in lengths_m:
        channel = replace(channel_template, length_m=length)
        loss = PathLoss(
            station_loss_db=loss_station_db,
            fiber_one_way_db=channel.one_way_loss_db,
            extra_db=extra_db,
        )
        curve.append((length, mean_photons_per_pulse(stage, loss, channel)))
    return curve


def solve_attenuation_for_target(
    stage: StageParams,
    loss: PathLoss,
    channel: FiberChannel,
    m_target: float,
) -> float:
    """Attenuation in dB to add to the path so the delivered mean photon
    number equals m_target.

    Closed form 10*log10(m_current / m_target). Targets above the current
    value would require gain and raise :class:`InfeasibleTargetError`;
    m_target equal to the current value is allowed and yields 0 dB.
    """
    if not (m_target > 0.0):
        raise ValueError(f"m_target must be > 0, got {m_target}")
    m_current = mean_photons_per_pulse(stage, loss, channel)
    if m_target > m_current:
        raise InfeasibleTargetError(
            f"target {m_target} exceeds achievable mean {m_current}; cannot amplify"
        )
    return 10.0 * math.log10(m_current / m_target)
