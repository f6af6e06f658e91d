"""Physical constants, dB arithmetic, and propagation primitives.

Everything here is a pure function of its arguments; all other modules
build on these conversions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Fixed constants, deliberately not configurable.
PLANCK_J_S = 6.62e-34
VACUUM_LIGHT_SPEED_M_S = 2.99792458e8

# Standard single-mode fiber at 1550 nm (group index ~1.49).
DEFAULT_GROUP_VELOCITY_M_S = 2.01e8
DEFAULT_ATTENUATION_DB_PER_KM = 0.2
DEFAULT_WAVELENGTH_NM = 1550.0


@dataclass(frozen=True)
class FiberChannel:
    """One span of single-mode fiber acting as the quantum channel."""

    length_m: float
    attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM
    group_velocity_m_per_s: float = DEFAULT_GROUP_VELOCITY_M_S
    wavelength_nm: float = DEFAULT_WAVELENGTH_NM

    def __post_init__(self) -> None:
        if not (self.length_m >= 0.0):
            raise ValueError(f"length_m must be >= 0, got {self.length_m}")
        if not (self.attenuation_db_per_km >= 0.0):
            raise ValueError(
                f"attenuation_db_per_km must be >= 0, got {self.attenuation_db_per_km}"
            )
        if not (0.0 < self.group_velocity_m_per_s < VACUUM_LIGHT_SPEED_M_S):
            raise ValueError(
                "group_velocity_m_per_s must lie in (0, c), got "
                f"{self.group_velocity_m_per_s}"
            )
        if not (self.wavelength_nm > 0.0):
            raise ValueError(f"wavelength_nm must be > 0, got {self.wavelength_nm}")

    @property
    def one_way_loss_db(self) -> float:
        return self.attenuation_db_per_km * self.length_m / 1000.0


def dbm_to_watts(power_dbm: float) -> float:
    """Convert an absolute power level in dBm to watts."""
    if not math.isfinite(power_dbm):
        raise ValueError(f"power_dbm must be finite, got {power_dbm}")
    return 1e-3 * 10.0 ** (power_dbm / 10.0)


def watts_to_dbm(power_w: float) -> float:
    """Inverse of :func:`dbm_to_watts`."""
    if not (power_w > 0.0):
        raise ValueError(f"power_w must be > 0, got {power_w}")
    return 10.0 * math.log10(power_w / 1e-3)


def db_loss_to_fraction(loss_db: float) -> float:
    """Transmitted power fraction for a loss given in dB.

    Gain is not modeled, so negative losses are rejected.
    """
    if not (loss_db >= 0.0) or not math.isfinite(loss_db):
        raise ValueError(f"loss_db must be finite and >= 0, got {loss_db}")
    return 10.0 ** (-loss_db / 10.0)


def fraction_to_db_loss(fraction: float) -> float:
    """Inverse of :func:`db_loss_to_fraction` for fractions in (0, 1]."""
    if not (0.0 < fraction <= 1.0):
        raise ValueError(f"fraction must lie in (0, 1], got {fraction}")
    return -10.0 * math.log10(fraction)


def photon_energy(channel: FiberChannel) -> float:
    """Energy in joules of one photon propagating in the channel.

    Uses the in-fiber group velocity rather than c, i.e. h * v / lambda.
    """
    return PLANCK_J_S * channel.group_velocity_m_per_s / (channel.wavelength_nm * 1e-9)


def round_trip_period(channel: FiberChannel) -> float:
    """Out-and-back propagation time over the channel, in seconds."""
    return 2.0 * channel.length_m / channel.group_velocity_m_per_s
