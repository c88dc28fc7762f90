"""Fleet statistics: renewable penetration and residual-CI inflation.

Period aggregates are energy-weighted (total over total) rather than
means of per-hour ratios, so splitting an hour into two half-hours with
halved energies changes nothing. A per-hour-mean variant of penetration
is available behind a flag for comparison.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .contracts import compute_residual_mix, contracts_for_fraction
from .errors import EmptyFleet, EmptyMix, EmptyResidual
from .grid import CarbonIntensity, SourceRegistry, total_emissions
from .ingest import RegionDataset

SOLAR_WIND = ("solar", "wind")


@dataclass(frozen=True)
class PenetrationStat:
    """Share of selected categories in a region's total generation."""

    region: str
    total_generation_mwh: float
    solar_wind_mwh: float
    solar_wind_pct: float


@dataclass(frozen=True)
class FleetPenetration:
    """Per-region penetration plus the empirical distribution across regions.

    ``cdf`` holds (percentage, cumulative fraction of regions) points,
    sorted by percentage with ties collapsed; the last fraction is 1.0.
    """

    stats: tuple[PenetrationStat, ...]
    cdf: tuple[tuple[float, float], ...]


def penetration(
    dataset: RegionDataset,
    categories: Sequence[str] = SOLAR_WIND,
    sources: SourceRegistry | None = None,
    per_hour_mean: bool = False,
) -> PenetrationStat:
    """Fraction of generation coming from the given categories.

    Default is energy-weighted over the whole series; with
    ``per_hour_mean`` the unweighted mean of per-hour percentages is
    returned instead (zero-generation hours are skipped).

    Raises:
        EmptyMix: if the dataset has no generation at all.
    """
    sources = sources or SourceRegistry.default()
    total = 0.0
    selected = 0.0
    ratios = []
    for mix in dataset.mixes:
        step_total = mix.total_energy
        step_selected = mix.energy_for_categories(categories, sources)
        total += step_total
        selected += step_selected
        if step_total > 0:
            ratios.append(step_selected / step_total)
    if total <= 0:
        raise EmptyMix(f"dataset for region {dataset.region!r} has no generation")
    if per_hour_mean:
        pct = 100.0 * sum(ratios) / len(ratios)
    else:
        pct = 100.0 * selected / total
    return PenetrationStat(
        region=dataset.region,
        total_generation_mwh=total,
        solar_wind_mwh=selected,
        solar_wind_pct=pct,
    )


def penetration_fleet(
    datasets: Sequence[RegionDataset],
    categories: Sequence[str] = SOLAR_WIND,
    sources: SourceRegistry | None = None,
    per_hour_mean: bool = False,
) -> FleetPenetration:
    """Penetration for every region plus the empirical CDF across regions.

    Raises:
        EmptyFleet: if no datasets are given.
    """
    if not datasets:
        raise EmptyFleet("penetration_fleet needs at least one region dataset")
    stats = tuple(
        penetration(dataset, categories, sources, per_hour_mean) for dataset in datasets
    )
    values = sorted(stat.solar_wind_pct for stat in stats)
    n = len(values)
    cdf = []
    for i, value in enumerate(values):
        if i + 1 < n and values[i + 1] == value:
            continue  # collapse ties onto the highest cumulative fraction
        cdf.append((value, (i + 1) / n))
    return FleetPenetration(stats=stats, cdf=tuple(cdf))


def period_ci(
    dataset: RegionDataset,
    sources: SourceRegistry | None = None,
    basis: str = "cef",
) -> CarbonIntensity:
    """Energy-weighted average carbon intensity over a whole series.

    ``basis="cef"`` computes emissions from per-source factors;
    ``basis="published"`` trusts the dataset's published CI signal.
    """
    sources = sources or SourceRegistry.default()
    emissions = 0.0  # MWh · g/kWh
    energy = 0.0
    if basis == "cef":
        for mix in dataset.mixes:
            emissions += total_emissions(mix, sources) / 1000.0
            energy += mix.total_energy
    elif basis == "published":
        if dataset.published_ci is None:
            raise ValueError(f"dataset for region {dataset.region!r} has no published CI series")
        for mix, ci in zip(dataset.mixes, dataset.published_ci):
            emissions += mix.total_energy * ci
            energy += mix.total_energy
    else:
        raise ValueError(f"basis must be 'cef' or 'published', got {basis!r}")
    if energy <= 0:
        raise EmptyMix(f"dataset for region {dataset.region!r} has no generation")
    return CarbonIntensity(emissions / energy)


def period_residual_ci(
    dataset: RegionDataset,
    contract_fraction: float | Mapping[str, float],
    categories: Sequence[str] = SOLAR_WIND,
    sources: SourceRegistry | None = None,
    basis: str = "cef",
) -> CarbonIntensity:
    """Energy-weighted residual CI with a fraction of selected generation contracted.

    Under ``basis="published"`` residual emissions per step are taken as
    published CI times total energy — exact when everything removed is
    carbon-free, which contracting guarantees.

    Raises:
        EmptyResidual: if any step's generation is fully contracted.
    """
    sources = sources or SourceRegistry.default()
    if basis == "published" and dataset.published_ci is None:
        raise ValueError(f"dataset for region {dataset.region!r} has no published CI series")
    if basis not in ("cef", "published"):
        raise ValueError(f"basis must be 'cef' or 'published', got {basis!r}")
    emissions = 0.0  # MWh · g/kWh
    energy = 0.0
    for step, mix in enumerate(dataset.mixes):
        contracts = contracts_for_fraction(mix, contract_fraction, categories, sources)
        residual = compute_residual_mix(mix, contracts, sources)
        if mix.total_energy > 0 and residual.total_energy <= 0:
            raise EmptyResidual(
                f"step {step} of region {dataset.region!r} is fully contracted"
            )
        if basis == "cef":
            emissions += total_emissions(residual.mix, sources) / 1000.0
        else:
            emissions += mix.total_energy * dataset.published_ci[step]
        energy += residual.total_energy
    if energy <= 0:
        raise EmptyMix(f"dataset for region {dataset.region!r} has no generation")
    return CarbonIntensity(emissions / energy)


def residual_inflation(
    dataset: RegionDataset,
    contract_fraction: float | Mapping[str, float],
    categories: Sequence[str] = SOLAR_WIND,
    sources: SourceRegistry | None = None,
    basis: str = "cef",
) -> float:
    """Percentage increase of period CI when generation is contracted out.

    Returns 100 · (CI_res − CI_loc) / CI_loc over the whole series.
    """
    ci_loc = float(period_ci(dataset, sources, basis))
    ci_res = float(period_residual_ci(dataset, contract_fraction, categories, sources, basis))
    if ci_loc <= 0:
        raise ZeroDivisionError("period CI is zero; inflation undefined")
    return 100.0 * (ci_res - ci_loc) / ci_loc
