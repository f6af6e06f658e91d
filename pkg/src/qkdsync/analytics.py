"""Closed-form detection probabilities for the interval-scan procedure.

Counts accumulated over a selection of N gates are modelled as Poisson:
the signal interval with mean `signal_mean = N*(dark + k*m)` and each of
the other `n_intervals - 1` intervals with mean `noise_mean = N*dark`.
The scan succeeds when the signal interval's count strictly exceeds every
noise interval's count, which gives

    P_D = sum_{s>=1} Pois(s; signal_mean) * [PoisCDF(s-1; noise_mean)]^(n_intervals-1)

(:func:`pd_full`). :func:`pd_simplified` is the closed form obtained by
keeping only noise counts 0 and 1 inside the CDF, which is accurate as
long as a noise count of 2 is unlikely across all intervals combined,
i.e. while `(n_intervals-1) * P(Pois(noise_mean) >= 2)` is small. Outside
that regime the closed form collapses; :func:`divergence_audit` measures
the disagreement and reports the premise check per point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

# Infinite sums are cut once the remaining Poisson tail mass drops below
# this, keeping the truncation error under 1e-12 absolute.
TAIL_MASS = 1e-13

# Validity guard for the simplified form: per-interval noise means above
# this are outside the regime the closed form was derived for.
NOISE_MEAN_REGIME_MAX = 0.01
SIGNAL_MEAN_REGIME_MAX = 10.0

# The two-term truncation behind pd_simplified is trustworthy while the
# expected number of noise intervals ever reaching a count of 2 stays
# below this.
TRUNCATION_PREMISE_MAX = 5e-5


class RegimeError(ValueError):
    """A parameter point lies outside the validity regime of the audit."""


@dataclass(frozen=True)
class DimensionlessParams:
    """Per-interval expected counts over a full selection, plus the
    number of intervals competing in the argmax."""

    noise_mean: float
    signal_mean: float
    n_intervals: int

    def __post_init__(self) -> None:
        if not (self.noise_mean >= 0.0):
            raise ValueError(f"noise_mean must be >= 0, got {self.noise_mean}")
        if not (self.signal_mean >= self.noise_mean):
            raise ValueError(
                f"signal_mean ({self.signal_mean}) must be >= noise_mean ({self.noise_mean})"
            )
        if not (self.n_intervals >= 2):
            raise ValueError(f"n_intervals must be >= 2, got {self.n_intervals}")


def map_physical(sync, det, mean_photons: float) -> DimensionlessParams:
    """Map a scan schedule, detector, and delivered mean photon number to
    the dimensionless parameters of the probability formulas."""
    if not (mean_photons >= 0.0):
        raise ValueError(f"mean_photons must be >= 0, got {mean_photons}")
    n = sync.selection_size
    noise = n * det.dark_rate_hz * det.gate_width_s
    signal = noise + n * det.quantum_efficiency * mean_photons
    return DimensionlessParams(
        noise_mean=noise, signal_mean=signal, n_intervals=sync.n_intervals
    )


def _tail_cutoff(mean: float, tail: float) -> int:
    """Smallest count whose upper Poisson tail mass is below `tail`.

    scipy's isf returns NaN for very small tail arguments, so search
    upward instead; the tail decays superexponentially past the mean.
    """
    step = max(1, int(math.sqrt(mean)))
    t = max(1, int(mean))
    while stats.poisson.sf(t, mean) >= tail:
        t += step
    return t


def _signal_terms(signal_mean: float) -> tuple[np.ndarray, np.ndarray]:
    """Count values s = 1..S and their Poisson weights, with S chosen so the
    neglected tail mass is below TAIL_MASS."""
    s_max = _tail_cutoff(signal_mean, TAIL_MASS) + 1
    s = np.arange(1, s_max + 1)
    return s, stats.poisson.pmf(s, signal_mean)


def noise_cdf_power(params: DimensionlessParams, threshold: int) -> float:
    """Probability that all noise intervals register at most `threshold`."""
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    if params.noise_mean == 0.0:
        return 1.0
    sf = stats.poisson.sf(threshold, params.noise_mean)
    return float(np.exp((params.n_intervals - 1) * np.log1p(-sf)))


def pd_full(params: DimensionlessParams) -> float:
    """Probability that the signal interval is the unique argmax."""
    if params.signal_mean == 0.0:
        return 0.0
    s, pmf = _signal_terms(params.signal_mean)
    if params.noise_mean == 0.0:
        powers = np.ones_like(pmf)
    else:
        sf = stats.poisson.sf(s - 1, params.noise_mean)
        powers = np.exp((params.n_intervals - 1) * np.log1p(-sf))
    return float(math.fsum(pmf * powers))


def pd_simplified(params: DimensionlessParams) -> float:
    """Closed-form approximation of :func:`pd_full`.

    Keeps noise counts 0 and 1 only: the s = 1 signal term requires all
    noise intervals silent, every higher term requires them at or below
    one count. Exact when noise_mean is zero.
    """
    nw = params.signal_mean
    nd = params.noise_mean
    k = params.n_intervals - 1
    term_one = nw * math.exp(-nw) * math.exp(-k * nd)
    # 1 - e^-nw - nw e^-nw, written to avoid cancellation for small nw
    mass_ge_two = math.exp(-nw) * (math.expm1(nw) - nw)
    term_rest = mass_ge_two * math.exp(k * (math.log1p(nd) - nd))
    return term_one + term_rest


def pe_false(params: DimensionlessParams, rule: str = "unique_argmax") -> float:
    """Probability that a noise interval is erroneously selected.

    "unique_argmax" (default): some noise interval strictly exceeds the
    signal interval and every other noise interval. "any_reaches_signal"
    is an alternative, more pessimistic reading: at least one noise
    interval reaches or exceeds the signal count.
    """
    nd = params.noise_mean
    nw = params.signal_mean
    n_int = params.n_intervals
    if rule == "any_reaches_signal":
        # Complement of a strict win by the signal interval: some noise
        # interval ties or beats it.
        return 1.0 - pd_full(params)
    if rule != "unique_argmax":
        raise ValueError(f"unknown rule {rule!r}")
    if nd == 0.0:
        return 0.0
    t_max = _tail_cutoff(nd, min(TAIL_MASS / n_int, TAIL_MASS)) + 1
    t = np.arange(1, t_max + 1)
    pmf_noise = stats.poisson.pmf(t, nd)
    others = np.exp((n_int - 2) * np.log1p(-stats.poisson.sf(t - 1, nd)))
    signal_below = stats.poisson.cdf(t - 1, nw)
    return float((n_int - 1) * math.fsum(pmf_noise * others * signal_below))


def truncation_premise(params: DimensionlessParams) -> float:
    """Expected number of noise intervals whose count reaches 2, the
    quantity that must be small for :func:`pd_simplified` to hold."""
    return (params.n_intervals - 1) * float(stats.poisson.sf(1, params.noise_mean))


def bernoulli_poisson_bound(
    selection_size: int,
    per_gate_signal: float,
    per_gate_noise: float,
    n_intervals: int,
) -> float:
    """Upper bound on the detection-probability gap between the per-gate
    Bernoulli simulation and the Poisson analytics.

    Per interval the total-variation distance between Binomial(N, 1-e^-u)
    and Poisson(N*u) is at most 1.5*N*u^2 (Le Cam plus the mean shift);
    summing over the signal interval and all noise intervals gives the
    bound. Values above 1 are clipped.
    """
    per_interval_sig = 1.5 * selection_size * (per_gate_signal + per_gate_noise) ** 2
    per_interval_noise = 1.5 * selection_size * per_gate_noise**2
    return min(1.0, per_interval_sig + (n_intervals - 1) * per_interval_noise)


@dataclass(frozen=True)
class DivergenceRow:
    params: DimensionlessParams
    pd_full: float
    pd_simplified: float
    relative_divergence: float
    premise: float


@dataclass(frozen=True)
class AuditResult:
    rows: tuple[DivergenceRow, ...]
    max_relative: float
    argmax: DimensionlessParams
    passed: bool
    max_relative_premise_ok: float

    @property
    def tolerance(self) -> float:
        return AUDIT_TOLERANCE


AUDIT_TOLERANCE = 2e-4


def default_audit_grid() -> list[DimensionlessParams]:
    """Cartesian audit grid: interval counts from 1e2 to 1e6, noise means
    log-spaced over [1e-6, 1e-2], signal means spanning [0.1, 6]."""
    grid = []
    for n_int in (100, 1_000, 10_000, 100_000, 1_000_000):
        for noise in np.logspace(-6, -2, 9):
            for signal in (0.1, 0.3, 1.0, 2.0, 3.75, 6.0):
                grid.append(
                    DimensionlessParams(
                        noise_mean=float(noise),
                        signal_mean=float(signal),
                        n_intervals=n_int,
                    )
                )
    return grid


def divergence_audit(grid: Iterable[DimensionlessParams]) -> AuditResult:
    """Compare :func:`pd_full` and :func:`pd_simplified` over a grid.

    Points outside the validity regime (noise_mean above
    NOISE_MEAN_REGIME_MAX or signal_mean above SIGNAL_MEAN_REGIME_MAX)
    are refused outright. Each row also carries the truncation premise
    so collapses of the closed form can be traced to their cause.
    """
    points = list(grid)
    if not points:
        raise ValueError("audit grid is empty")
    for p in points:
        if p.noise_mean > NOISE_MEAN_REGIME_MAX:
            raise RegimeError(
                f"noise_mean={p.noise_mean} exceeds regime bound {NOISE_MEAN_REGIME_MAX}"
            )
        if p.signal_mean > SIGNAL_MEAN_REGIME_MAX:
            raise RegimeError(
                f"signal_mean={p.signal_mean} exceeds regime bound {SIGNAL_MEAN_REGIME_MAX}"
            )
    rows = []
    for p in points:
        full = pd_full(p)
        simp = pd_simplified(p)
        rel = abs(full - simp) / full if full > 0.0 else 0.0
        rows.append(
            DivergenceRow(
                params=p,
                pd_full=full,
                pd_simplified=simp,
                relative_divergence=rel,
                premise=truncation_premise(p),
            )
        )
    worst = max(rows, key=lambda r: r.relative_divergence)
    premise_ok = [r for r in rows if r.premise <= TRUNCATION_PREMISE_MAX]
    max_ok = max((r.relative_divergence for r in premise_ok), default=0.0)
    return AuditResult(
        rows=tuple(rows),
        max_relative=worst.relative_divergence,
        argmax=worst.params,
        passed=worst.relative_divergence <= AUDIT_TOLERANCE,
        max_relative_premise_ok=max_ok,
    )
