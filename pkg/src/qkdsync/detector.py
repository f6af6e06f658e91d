"""Gated Geiger-mode avalanche photodiode model.

Each gate yields at most one registration. Photons and dark noise are
independent Poisson streams within the gate, thinned by the quantum
efficiency, so the per-gate registration probability is
1 - exp(-(k*m + R_dark * t_gate)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

import numpy as np

if TYPE_CHECKING:
    from .sync_scan import SyncConfig

# Reading of "frame period much greater than dead time": at least this factor.
DEAD_TIME_MARGIN = 10.0

Cause = Literal["photon", "dark", "none"]


@dataclass(frozen=True)
class DetectorParams:
    dark_rate_hz: float
    quantum_efficiency: float
    dead_time_s: float
    gate_width_s: float

    def __post_init__(self) -> None:
        if not (self.dark_rate_hz >= 0.0):
            raise ValueError(f"dark_rate_hz must be >= 0, got {self.dark_rate_hz}")
        if not (0.0 <= self.quantum_efficiency <= 1.0):
            raise ValueError(
                f"quantum_efficiency must lie in [0, 1], got {self.quantum_efficiency}"
            )
        if not (self.dead_time_s >= 0.0):
            raise ValueError(f"dead_time_s must be >= 0, got {self.dead_time_s}")
        if not (self.gate_width_s > 0.0):
            raise ValueError(f"gate_width_s must be > 0, got {self.gate_width_s}")

    @property
    def dark_mean_per_gate(self) -> float:
        return self.dark_rate_hz * self.gate_width_s


@dataclass(frozen=True)
class GateOutcome:
    registered: bool
    cause: Cause

    def __post_init__(self) -> None:
        if not self.registered and self.cause != "none":
            raise ValueError("unregistered gate cannot carry a cause")


def registration_probability(mean_photons_incident: float, params: DetectorParams) -> float:
    """Probability that a single gate registers an avalanche."""
    if not (mean_photons_incident >= 0.0):
        raise ValueError(
            f"mean_photons_incident must be >= 0, got {mean_photons_incident}"
        )
    total = params.quantum_efficiency * mean_photons_incident + params.dark_mean_per_gate
    return -math.expm1(-total)


def sample_gate(
    mean_photons_incident: float,
    params: DetectorParams,
    rng: np.random.Generator,
) -> GateOutcome:
    """Draw one gate outcome.

    The photon component is sampled before the dark component, so a gate
    where both streams fire is attributed to the photon.
    """
    p_photon = -math.expm1(-params.quantum_efficiency * mean_photons_incident)
    if rng.random() < p_photon:
        return GateOutcome(registered=True, cause="photon")
    p_dark = -math.expm1(-params.dark_mean_per_gate)
    if rng.random() < p_dark:
        return GateOutcome(registered=True, cause="dark")
    return GateOutcome(registered=False, cause="none")


def dead_time_ignorable(
    sync: "SyncConfig",
    params: DetectorParams,
    margin: float = DEAD_TIME_MARGIN,
) -> bool:
    """Whether recovery time can be neglected for a one-gate-per-frame scan.

    True when the frame period is at least `margin` times the dead time
    (boundary included).
    """
    return sync.frame_period_s >= margin * params.dead_time_s
