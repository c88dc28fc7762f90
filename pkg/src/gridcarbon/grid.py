"""Core domain types for grid mixes and the average carbon intensity.

Units are fixed package-wide:

- generation energy in MWh,
- consumer demand in kWh (converted at the API edge where the two meet),
- carbon intensity and emission factors in g CO2-eq per kWh,
- absolute emissions in grams.

All types are immutable values; all operations are pure functions, so
everything here is safe to evaluate concurrently across regions and time
steps.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from datetime import datetime

from .errors import EmptyMix, UnknownSource
from .factors import DEFAULT_CEF, SOURCE_CATEGORIES, is_carbon_free_category

KWH_PER_MWH = 1000.0


@dataclass(frozen=True)
class EnergySource:
    """A generation source with its carbon emission factor.

    Attributes:
        id: short identifier, unique within a registry.
        category: one of :data:`gridcarbon.factors.SOURCE_CATEGORIES`.
        cef: carbon emission factor in g CO2-eq per kWh generated.
        carbon_free: whether this source counts as carbon-free energy.

    Under the operational-emissions model a carbon-free source must have
    a CEF of exactly zero; construction enforces that.
    """

    id: str
    category: str
    cef: float
    carbon_free: bool

    def __post_init__(self) -> None:
        if self.category not in SOURCE_CATEGORIES:
            raise ValueError(f"unknown source category {self.category!r}")
        if self.cef < 0:
            raise ValueError(f"source {self.id!r}: cef must be >= 0, got {self.cef}")
        if self.carbon_free and self.cef != 0:
            raise ValueError(
                f"source {self.id!r}: carbon-free sources must have cef = 0, got {self.cef}"
            )

    @classmethod
    def from_category(cls, category: str, *, cef: float | None = None, source_id: str | None = None) -> EnergySource:
        """Build a source from its category using the default CEF table."""
        resolved_cef = DEFAULT_CEF[category] if cef is None else float(cef)
        carbon_free = is_carbon_free_category(category) and resolved_cef == 0
        return cls(id=source_id or category, category=category, cef=resolved_cef, carbon_free=carbon_free)


class SourceRegistry:
    """Lookup table from source id to :class:`EnergySource`."""

    def __init__(self, sources: Iterable[EnergySource] = ()):
        self._sources: dict[str, EnergySource] = {}
        for source in sources:
            if source.id in self._sources:
                raise ValueError(f"duplicate source id {source.id!r}")
            self._sources[source.id] = source

    @classmethod
    def default(cls, cef_overrides: Mapping[str, float] | None = None) -> SourceRegistry:
        """One source per category, id = category name, CEFs from the default table."""
        overrides = dict(cef_overrides or {})
        return cls(
            EnergySource.from_category(cat, cef=overrides.get(cat))
            for cat in sorted(SOURCE_CATEGORIES)
        )

    def get(self, source_id: str) -> EnergySource:
        try:
            return self._sources[source_id]
        except KeyError:
            raise UnknownSource(f"source id {source_id!r} is not registered") from None

    def __contains__(self, source_id: str) -> bool:
        return source_id in self._sources

    def __iter__(self):
        return iter(self._sources.values())

    def __len__(self) -> int:
        return len(self._sources)


@dataclass(frozen=True)
class GridMix:
    """Per-source generation for one region and one time step.

    ``generation`` maps source id to energy in MWh. Zero-generation
    sources may appear and are ignored by the carbon-intensity math.
    """

    region: str
    generation: Mapping[str, float]
    timestamp: datetime | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "generation", dict(self.generation))
        for source_id, mwh in self.generation.items():
            if mwh < 0:
                raise ValueError(f"generation for {source_id!r} must be >= 0, got {mwh}")

    @property
    def total_energy(self) -> float:
        """Total generation in MWh."""
        return sum(self.generation.values())

    def carbon_free_energy(self, sources: SourceRegistry) -> float:
        """Generation from carbon-free sources, in MWh."""
        return sum(
            mwh for source_id, mwh in self.generation.items() if sources.get(source_id).carbon_free
        )

    def energy_for_categories(self, categories: Iterable[str], sources: SourceRegistry) -> float:
        """Generation from sources in the given categories, in MWh."""
        wanted = set(categories)
        return sum(
            mwh
            for source_id, mwh in self.generation.items()
            if sources.get(source_id).category in wanted
        )


@dataclass(frozen=True)
class MixTimeSeries:
    """An ordered sequence of grid mixes for one region.

    Timestamps must be present on every step and strictly increasing.
    Uniform (hourly) spacing is the expected shape; loaders with a
    drop-row fill policy can legitimately leave gaps, so uniformity is
    exposed via :attr:`is_uniform` rather than enforced here.
    """

    region: str
    steps: tuple[GridMix, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        previous: datetime | None = None
        for i, step in enumerate(self.steps):
            if step.region != self.region:
                raise ValueError(f"step {i} has region {step.region!r}, expected {self.region!r}")
            if step.timestamp is None:
                raise ValueError(f"step {i} is missing a timestamp")
            if previous is not None and step.timestamp <= previous:
                raise ValueError(f"timestamps must be strictly increasing (step {i})")
            previous = step.timestamp

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def is_uniform(self) -> bool:
        """True when consecutive timestamps are evenly spaced."""
        if len(self.steps) < 2:
            return True
        deltas = {
            self.steps[i + 1].timestamp - self.steps[i].timestamp
            for i in range(len(self.steps) - 1)
        }
        return len(deltas) == 1


@dataclass(frozen=True)
class CarbonIntensity:
    """Carbon intensity in g CO2-eq per kWh."""

    value: float

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError(f"carbon intensity must be >= 0, got {self.value}")

    def __float__(self) -> float:
        return self.value


def total_emissions(mix: GridMix, sources: SourceRegistry | None = None) -> float:
    """Total emissions of a mix in grams CO2-eq.

    Generation is in MWh and CEFs in g/kWh, hence the factor of 1000.
    """
    sources = sources or SourceRegistry.default()
    return sum(
        mwh * sources.get(source_id).cef * KWH_PER_MWH
        for source_id, mwh in mix.generation.items()
    )


def compute_average_ci(mix: GridMix, sources: SourceRegistry | None = None) -> CarbonIntensity:
    """Generation-weighted average carbon intensity of a mix, g/kWh.

    This is the grid-level (location-based) carbon intensity when the mix
    is the full grid mix.

    Raises:
        EmptyMix: if the mix has zero total generation.
        UnknownSource: if a source id is not registered.
    """
    sources = sources or SourceRegistry.default()
    total = mix.total_energy
    if total <= 0:
        raise EmptyMix(f"carbon intensity undefined for empty mix in region {mix.region!r}")
    weighted = sum(
        mwh * sources.get(source_id).cef for source_id, mwh in mix.generation.items()
    )
    return CarbonIntensity(weighted / total)
