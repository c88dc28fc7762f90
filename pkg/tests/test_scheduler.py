from __future__ import annotations

import itertools
from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridcarbon import (
    FlexibleLoad,
    GridMix,
    MixTimeSeries,
    RegionDataset,
    SignalMismatch,
    WindowTooShort,
    ZeroBaseline,
    best_window,
    duck_curve_fixture,
    evaluate_schedule,
    residual_signal,
    shift_savings,
    total_signal,
    worst_window,
)


def _load(duration: int = 1, energy: float = 1000.0, window=None,
          contiguous: bool = True) -> FlexibleLoad:
    return FlexibleLoad(energy_per_hour_kwh=energy, duration_hours=duration,
                        window=window, contiguous=contiguous)


def test_load_validation() -> None:
    with pytest.raises(ValueError):
        FlexibleLoad(energy_per_hour_kwh=-1.0, duration_hours=1)
    with pytest.raises(ValueError):
        FlexibleLoad(energy_per_hour_kwh=1.0, duration_hours=0)
    with pytest.raises(ValueError):
        FlexibleLoad(energy_per_hour_kwh=1.0, duration_hours=2.5)  # type: ignore[arg-type]


# --- window selection ---------------------------------------------------------

def test_best_single_hour() -> None:
    assert best_window([100.0, 50.0, 200.0], _load(1)) == (1,)


def test_best_contiguous_pair() -> None:
    assert best_window([5.0, 4.0, 3.0, 2.0, 1.0], _load(2)) == (3, 4)


def test_best_non_contiguous_pair() -> None:
    assert best_window([1.0, 9.0, 1.0], _load(2, contiguous=False)) == (0, 2)


def test_ties_go_to_earliest_start() -> None:
    assert best_window([1.0, 1.0, 1.0], _load(1)) == (0,)
    assert best_window([2.0, 1.0, 1.0, 2.0], _load(2)) == (1, 2)


def test_non_contiguous_ties_go_to_earlier_hour() -> None:
    assert best_window([5.0, 3.0, 3.0, 5.0], _load(1, contiguous=False)) == (1,)


def test_worst_single_hour() -> None:
    assert worst_window([100.0, 50.0, 200.0], _load(1)) == (2,)


def test_window_restricts_starts() -> None:
    signal = [9.0, 1.0, 9.0, 1.0, 9.0]
    assert best_window(signal, _load(2, window=(1, 2))) == (1, 2)  # tie -> earliest
    assert best_window(signal, _load(1, window=(0, 0))) == (0,)


def test_non_contiguous_window_spans_placements() -> None:
    # Starts 1..2 with duration 2 may touch hours 1..3 only.
    signal = [0.0, 9.0, 9.0, 0.0, 0.0]
    hours = best_window(signal, _load(2, window=(1, 2), contiguous=False))
    assert hours == (1, 3)


@pytest.mark.parametrize(
    ("signal", "load"),
    [
        ([1.0, 2.0], _load(3)),                 # duration exceeds signal
        ([1.0, 2.0, 3.0], _load(2, window=(0, 2))),  # last start overruns
        ([1.0, 2.0], _load(1, window=(-1, 0))),
        ([1.0, 2.0], _load(1, window=(1, 0))),
        ([], _load(1)),
    ],
)
def test_window_too_short(signal, load) -> None:
    with pytest.raises(WindowTooShort):
        best_window(signal, load)


@given(
    signal=st.lists(st.floats(min_value=0.0, max_value=1000.0), min_size=1, max_size=30),
    duration=st.integers(min_value=1, max_value=6),
)
def test_contiguous_matches_brute_force(signal, duration) -> None:
    if duration > len(signal):
        return
    load = _load(duration)
    expected = min(
        range(len(signal) - duration + 1),
        key=lambda s: (sum(signal[s : s + duration]), s),
    )
    assert best_window(signal, load) == tuple(range(expected, expected + duration))


@given(
    # Integer-valued signals keep sums exact, so tie-breaks are well defined.
    signal=st.lists(st.integers(min_value=0, max_value=100).map(float),
                    min_size=1, max_size=10),
    duration=st.integers(min_value=1, max_value=4),
)
def test_non_contiguous_matches_brute_force(signal, duration) -> None:
    if duration > len(signal):
        return
    load = _load(duration, contiguous=False)
    expected = min(
        itertools.combinations(range(len(signal)), duration),
        key=lambda hours: (sum(signal[h] for h in hours), hours),
    )
    assert best_window(signal, load) == expected


@given(
    signal=st.lists(st.floats(min_value=0.0, max_value=1000.0), min_size=2, max_size=48),
    duration=st.integers(min_value=1, max_value=8),
)
def test_best_never_beaten(signal, duration) -> None:
    if duration > len(signal):
        return
    chosen = best_window(signal, _load(duration))
    chosen_cost = sum(signal[h] for h in chosen)
    for start in range(len(signal) - duration + 1):
        assert chosen_cost <= sum(signal[start : start + duration]) + 1e-9


# --- schedule evaluation --------------------------------------------------------

def test_identical_signals_zero_discrepancy() -> None:
    signal = [100.0, 200.0, 50.0]
    result = evaluate_schedule((0, 1), _load(2), signal, signal)
    assert result.discrepancy_pct == 0.0
    assert result.difference_g_per_kwh == 0.0
    assert result.reported_emissions_g == result.actual_emissions_g


def test_reported_vs_actual_constants() -> None:
    reported = [75.7] * 10
    actual = [194.5] * 10
    result = evaluate_schedule(tuple(range(10)), _load(10), reported, actual)
    assert result.reported_ci_avg == pytest.approx(75.7, rel=1e-12)
    assert result.actual_ci_avg == pytest.approx(194.5, rel=1e-12)
    assert result.difference_g_per_kwh == pytest.approx(118.8, rel=1e-12)
    assert result.discrepancy_pct == pytest.approx(100.0 * 118.8 / 75.7, rel=1e-12)
    assert result.discrepancy_pct == pytest.approx(156.9, abs=0.5)


def test_single_hour_emissions() -> None:
    result = evaluate_schedule((0,), _load(1, energy=7000.0), [100.0], [100.0])
    assert result.reported_emissions_g == 7000.0 * 100.0
    assert result.actual_emissions_g == result.reported_emissions_g


def test_signal_length_mismatch() -> None:
    with pytest.raises(SignalMismatch):
        evaluate_schedule((0,), _load(1), [1.0, 2.0], [1.0])


def test_hour_outside_signal() -> None:
    with pytest.raises(SignalMismatch):
        evaluate_schedule((5,), _load(1), [1.0, 2.0], [1.0, 2.0])


def test_no_hours() -> None:
    with pytest.raises(ValueError):
        evaluate_schedule((), _load(1), [1.0], [1.0])


def test_zero_reported_average() -> None:
    assert evaluate_schedule((0,), _load(1), [0.0], [0.0]).discrepancy_pct == 0.0
    assert evaluate_schedule((0,), _load(1), [0.0], [5.0]).discrepancy_pct == float("inf")


@given(energy=st.floats(min_value=0.1, max_value=1e6))
def test_discrepancy_ignores_energy_scale(energy: float) -> None:
    reported = [80.0, 90.0, 100.0]
    actual = [160.0, 150.0, 140.0]
    base = evaluate_schedule((0, 2), _load(2, energy=1.0), reported, actual)
    scaled = evaluate_schedule((0, 2), _load(2, energy=energy), reported, actual)
    assert scaled.discrepancy_pct == base.discrepancy_pct
    assert scaled.difference_g_per_kwh == base.difference_g_per_kwh


@given(
    reported=st.lists(st.floats(min_value=0.0, max_value=500.0), min_size=3, max_size=24),
    bumps=st.lists(st.floats(min_value=0.0, max_value=500.0), min_size=3, max_size=24),
)
def test_actual_above_reported_never_saves(reported, bumps) -> None:
    n = min(len(reported), len(bumps))
    reported = reported[:n]
    actual = [r + b for r, b in zip(reported, bumps)]
    result = evaluate_schedule(tuple(range(n)), _load(n), reported, actual)
    assert result.actual_emissions_g >= result.reported_emissions_g


# --- shift savings ---------------------------------------------------------------

def test_shift_savings_two_hours() -> None:
    assert shift_savings([100.0, 50.0], _load(1)) == pytest.approx(50.0, rel=1e-12)


def test_shift_savings_constant_signal() -> None:
    assert shift_savings([42.0] * 6, _load(2)) == 0.0


def test_shift_savings_fixed_starts() -> None:
    savings = shift_savings([10.0, 20.0, 30.0], _load(1), from_policy=2, to_policy=0)
    assert savings == pytest.approx(100.0 * (30.0 - 10.0) / 30.0, rel=1e-12)


def test_shift_savings_zero_baseline() -> None:
    with pytest.raises(ZeroBaseline):
        shift_savings([0.0, 0.0], _load(1))


def test_shift_savings_bad_policy() -> None:
    with pytest.raises(ValueError):
        shift_savings([1.0, 2.0], _load(1), from_policy="vibes")
    with pytest.raises(ValueError):
        shift_savings([1.0, 2.0], _load(1), from_policy=True)


def test_shift_savings_fixed_start_out_of_range() -> None:
    with pytest.raises(WindowTooShort):
        shift_savings([1.0, 2.0], _load(1), from_policy=5)


# --- CI signals from datasets ------------------------------------------------------

def _flat_dataset(hours: int = 3) -> RegionDataset:
    start = datetime(2022, 6, 1, tzinfo=timezone.utc)
    steps = tuple(
        GridMix(region="r", generation={"wind": 50.0, "coal": 50.0},
                timestamp=start + timedelta(hours=h))
        for h in range(hours)
    )
    return RegionDataset(
        region="r",
        series=MixTimeSeries(region="r", steps=steps),
        published_ci=(123.0,) * hours,
    )


def test_total_signal_cef_basis() -> None:
    assert total_signal(_flat_dataset()) == (500.0, 500.0, 500.0)


def test_total_signal_published_basis() -> None:
    assert total_signal(_flat_dataset(), basis="published") == (123.0, 123.0, 123.0)
    with pytest.raises(ValueError):
        total_signal(_flat_dataset(), basis="vibes")


def test_residual_signal_fraction_zero_is_total() -> None:
    dataset = duck_curve_fixture()
    assert residual_signal(dataset, 0.0) == total_signal(dataset)


def test_residual_signal_all_contracted() -> None:
    assert residual_signal(_flat_dataset(), 1.0) == (1000.0, 1000.0, 1000.0)


def test_duck_curve_signal_shapes() -> None:
    dataset = duck_curve_fixture()
    total = total_signal(dataset)
    residual = residual_signal(dataset, 1.0)
    assert min(total) == pytest.approx(121.0, rel=1e-9)
    assert total.index(min(total)) == 12
    assert max(total) == pytest.approx(200.0, rel=1e-9)
    assert total.index(max(total)) == 19
    assert min(residual) == pytest.approx(582.0, rel=1e-9)
    assert max(residual) == pytest.approx(600.0, rel=1e-9)
    # Contracting the renewables flattens the curve.
    assert max(residual) - min(residual) < max(total) - min(total)


def test_duck_curve_savings_contrast() -> None:
    dataset = duck_curve_fixture()
    load = _load(1, energy=7000.0)
    seeming = shift_savings(total_signal(dataset), load)
    actual = shift_savings(residual_signal(dataset, 1.0), load)
    assert seeming == pytest.approx(39.5, abs=1e-9)
    assert actual == pytest.approx(3.0, abs=1e-9)
