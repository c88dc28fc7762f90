"""Carbon-aware scheduling of flexible loads against hourly CI signals.

A flexible load draws constant power for a fixed number of hours and may
start anywhere inside an allowed window. :func:`best_window` picks the
cheapest placement against a carbon-intensity signal; running
:func:`evaluate_schedule` against a second signal quantifies how wrong
the choice looks when the signal the consumer saw (the total grid mix)
differs from the one that actually prices their residual demand.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .contracts import compute_residual_ci, contracts_for_fraction
from .errors import SignalMismatch, WindowTooShort, ZeroBaseline
from .grid import SourceRegistry, compute_average_ci
from .ingest import RegionDataset

Signal = Sequence[float]


@dataclass(frozen=True)
class FlexibleLoad:
    """A constant-draw load needing ``duration_hours`` consecutive-or-not hours.

    ``window`` bounds the allowed *start* indices (inclusive); ``None``
    allows any feasible start. A non-contiguous load may use any hours an
    allowed contiguous placement could have touched.
    """

    energy_per_hour_kwh: float
    duration_hours: int
    window: tuple[int, int] | None = None
    contiguous: bool = True

    def __post_init__(self) -> None:
        if self.energy_per_hour_kwh < 0:
            raise ValueError("energy_per_hour_kwh must be >= 0")
        if not isinstance(self.duration_hours, int) or self.duration_hours < 1:
            raise ValueError(f"duration_hours must be an integer >= 1, got {self.duration_hours}")
        if self.window is not None:
            object.__setattr__(self, "window", (int(self.window[0]), int(self.window[1])))


def _start_bounds(signal: Signal, load: FlexibleLoad) -> tuple[int, int]:
    n = len(signal)
    duration = load.duration_hours
    lo, hi = load.window if load.window is not None else (0, n - duration)
    if lo < 0 or hi < lo:
        raise WindowTooShort(f"invalid start window ({lo}, {hi})")
    if hi + duration > n:
        raise WindowTooShort(
            f"window ({lo}, {hi}) with duration {duration} exceeds signal length {n}"
        )
    return lo, hi


def _extreme_window(signal: Signal, load: FlexibleLoad, worst: bool) -> tuple[int, ...]:
    lo, hi = _start_bounds(signal, load)
    duration = load.duration_hours
    if load.contiguous:
        best_start = None
        best_sum = None
        for start in range(lo, hi + 1):
            cost = sum(signal[start : start + duration])
            better = best_sum is None or (cost > best_sum if worst else cost < best_sum)
            if better:
                best_start, best_sum = start, cost
        return tuple(range(best_start, best_start + duration))
    hours = range(lo, hi + duration)
    ranked = sorted(hours, key=lambda h: (-signal[h], h) if worst else (signal[h], h))
    return tuple(sorted(ranked[:duration]))


def best_window(signal: Signal, load: FlexibleLoad) -> tuple[int, ...]:
    """Hours minimizing total CI for the load.

    Contiguous loads get the minimum-sum start (ties go to the earliest
    start); non-contiguous loads get the individually cheapest hours
    (ties go to the earlier hour).

    Raises:
        WindowTooShort: if the window cannot fit the load.
    """
    return _extreme_window(signal, load, worst=False)


def worst_window(signal: Signal, load: FlexibleLoad) -> tuple[int, ...]:
    """Hours maximizing total CI for the load (the shift-from baseline)."""
    return _extreme_window(signal, load, worst=True)


@dataclass(frozen=True)
class ScheduleResult:
    """A scheduled load evaluated against reported and actual CI signals."""

    hours: tuple[int, ...]
    reported_ci_avg: float
    actual_ci_avg: float
    reported_emissions_g: float
    actual_emissions_g: float
    difference_g_per_kwh: float
    discrepancy_pct: float


def evaluate_schedule(
    hours: Sequence[int],
    load: FlexibleLoad,
    reported_signal: Signal,
    actual_signal: Signal,
) -> ScheduleResult:
    """Price the chosen hours under both signals and quantify the gap.

    ``difference_g_per_kwh`` is actual minus reported average CI;
    ``discrepancy_pct`` expresses it relative to the reported average.

    Raises:
        SignalMismatch: if the signals differ in length or do not cover
            every chosen hour.
    """
    if len(reported_signal) != len(actual_signal):
        raise SignalMismatch(
            f"reported signal has {len(reported_signal)} steps, actual has {len(actual_signal)}"
        )
    if not hours:
        raise ValueError("schedule has no hours")
    for hour in hours:
        if not 0 <= hour < len(reported_signal):
            raise SignalMismatch(f"hour {hour} outside signal of length {len(reported_signal)}")
    reported_sum = sum(reported_signal[h] for h in hours)
    actual_sum = sum(actual_signal[h] for h in hours)
    reported_avg = reported_sum / len(hours)
    actual_avg = actual_sum / len(hours)
    if reported_avg > 0:
        discrepancy = 100.0 * (actual_avg - reported_avg) / reported_avg
    else:
        discrepancy = 0.0 if actual_avg == 0 else float("inf")
    energy = load.energy_per_hour_kwh
    return ScheduleResult(
        hours=tuple(hours),
        reported_ci_avg=reported_avg,
        actual_ci_avg=actual_avg,
        reported_emissions_g=energy * reported_sum,
        actual_emissions_g=energy * actual_sum,
        difference_g_per_kwh=actual_avg - reported_avg,
        discrepancy_pct=discrepancy,
    )


def _policy_hours(signal: Signal, load: FlexibleLoad, policy: str | int) -> tuple[int, ...]:
    if policy == "best_window":
        return best_window(signal, load)
    if policy == "worst_window":
        return worst_window(signal, load)
    if isinstance(policy, int) and not isinstance(policy, bool):
        start = policy
        if start < 0 or start + load.duration_hours > len(signal):
            raise WindowTooShort(
                f"fixed start {start} with duration {load.duration_hours} "
                f"exceeds signal length {len(signal)}"
            )
        return tuple(range(start, start + load.duration_hours))
    raise ValueError(f"policy must be 'best_window', 'worst_window' or a start index, got {policy!r}")


def shift_savings(
    signal: Signal,
    load: FlexibleLoad,
    from_policy: str | int = "worst_window",
    to_policy: str | int = "best_window",
) -> float:
    """Percentage emissions saved by moving the load between two placements.

    Both placements are priced on the same ``signal``; to reproduce a
    reported-vs-actual contrast, call this once on each signal and
    compare the two percentages.

    Raises:
        ZeroBaseline: if the from-placement has zero emissions.
        WindowTooShort: if a placement does not fit the signal.
    """
    from_hours = _policy_hours(signal, load, from_policy)
    to_hours = _policy_hours(signal, load, to_policy)
    energy = load.energy_per_hour_kwh
    from_emissions = energy * sum(signal[h] for h in from_hours)
    to_emissions = energy * sum(signal[h] for h in to_hours)
    if from_emissions == 0:
        raise ZeroBaseline("baseline placement emits nothing; savings undefined")
    return 100.0 * (from_emissions - to_emissions) / from_emissions


def total_signal(
    dataset: RegionDataset,
    sources: SourceRegistry | None = None,
    basis: str = "cef",
) -> tuple[float, ...]:
    """Per-step total-mix CI series (the public, unadjusted signal)."""
    if basis == "published":
        if dataset.published_ci is None:
            raise ValueError(f"dataset for region {dataset.region!r} has no published CI series")
        return tuple(dataset.published_ci)
    if basis != "cef":
        raise ValueError(f"basis must be 'cef' or 'published', got {basis!r}")
    sources = sources or SourceRegistry.default()
    return tuple(float(compute_average_ci(mix, sources)) for mix in dataset.mixes)


def residual_signal(
    dataset: RegionDataset,
    contract_fraction: float | Mapping[str, float],
    categories: Sequence[str] = ("solar", "wind"),
    sources: SourceRegistry | None = None,
) -> tuple[float, ...]:
    """Per-step residual CI series with a fraction of generation contracted.

    Raises:
        EmptyResidual: if any step becomes fully contracted.
    """
    sources = sources or SourceRegistry.default()
    values = []
    for mix in dataset.mixes:
        contracts = contracts_for_fraction(mix, contract_fraction, categories, sources)
        values.append(float(compute_residual_ci(mix, contracts, sources)))
    return tuple(values)
