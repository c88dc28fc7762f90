"""Per-consumer carbon attribution under location- and market-based methods.

Location-based accounting hands every consumer in a region the same
grid-average carbon intensity and carbon-free share. Market-based
accounting first honors contracted claims: buyers net their contracted
carbon-free energy off their demand, everyone's remaining demand is
priced at the residual carbon intensity of their own region, so

    CI_mkt = (D - D_cf) * CI_res / D

with demand D and contracted claim D_cf, both in kWh.

Both methods are computed side by side for every consumer (dual
reporting); which one a consumer *uses* only matters for the
double-counting analysis, where contracted energy claimed by a buyer is
counted again by location-based consumers reading an unadjusted public
grid signal.

Consumer demand is in kWh; grid quantities are in MWh.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .contracts import Contract, compute_residual_mix, contracted_cfe_for_buyer
from .errors import ClaimExceedsDemand, EmptyResidual, UnknownRegion, ZeroDemand
from .grid import KWH_PER_MWH, CarbonIntensity, GridMix, SourceRegistry, compute_average_ci

LOCATION_BASED = "location_based"
MARKET_BASED = "market_based"
METHODS = frozenset({LOCATION_BASED, MARKET_BASED})


@dataclass(frozen=True)
class Consumer:
    """An electricity consumer with a per-step demand in kWh."""

    id: str
    region: str
    demand_kwh: float
    method: str = LOCATION_BASED

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"consumer {self.id!r}: method must be one of {sorted(METHODS)}")
        if self.demand_kwh < 0:
            raise ValueError(f"consumer {self.id!r}: demand must be >= 0")


@dataclass(frozen=True)
class MethodResult:
    """Attribution of one consumer's demand under one accounting method."""

    attributed_cfe_kwh: float
    attributed_fossil_kwh: float
    ci_g_per_kwh: float
    emissions_g: float


@dataclass(frozen=True)
class ConsumerAttribution:
    """Dual-reported attribution for one consumer."""

    consumer_id: str
    region: str
    demand_kwh: float
    method: str
    location_based: MethodResult
    market_based: MethodResult
    cfe_claim_kwh: float = 0.0
    over_claimed: bool = False

    @property
    def selected(self) -> MethodResult:
        """The result under the method this consumer reports with."""
        return self.location_based if self.method == LOCATION_BASED else self.market_based


@dataclass(frozen=True)
class RegionSummary:
    """Grid-level quantities for one region."""

    region: str
    ci_loc_g_per_kwh: float
    ci_res_g_per_kwh: float
    total_energy_mwh: float
    carbon_free_energy_mwh: float
    contracted_cfe_mwh: float
    over_contracted: frozenset[str]


@dataclass(frozen=True)
class AttributionReport:
    """Full per-consumer and per-region attribution output."""

    consumers: tuple[ConsumerAttribution, ...]
    regions: tuple[RegionSummary, ...]
    double_counted_cfe_mwh: float

    def consumer(self, consumer_id: str) -> ConsumerAttribution:
        for entry in self.consumers:
            if entry.consumer_id == consumer_id:
                return entry
        raise KeyError(consumer_id)

    def region(self, region: str) -> RegionSummary:
        for entry in self.regions:
            if entry.region == region:
                return entry
        raise KeyError(region)


def _cfe_fraction(mix: GridMix, sources: SourceRegistry, total_mwh: float | None = None) -> float:
    """Carbon-free fraction of a mix, optionally against a declared total.

    When a region's total demand is declared separately (toy grids state
    total demand while generation may slightly exceed it), the
    carbon-free share is quoted against that demand; surplus cannot push
    the fraction past 1.
    """
    denominator = mix.total_energy if total_mwh is None else total_mwh
    if denominator <= 0:
        raise ValueError("carbon-free fraction needs a positive energy total")
    return min(mix.carbon_free_energy(sources) / denominator, 1.0)


def attribute_location_based(
    mix: GridMix,
    consumers: Sequence[Consumer],
    sources: SourceRegistry | None = None,
    grid_demand_mwh: float | None = None,
) -> dict[str, MethodResult]:
    """Location-based attribution: one CI and CFE share for everyone.

    Raises:
        EmptyMix: if the mix has zero generation.
    """
    sources = sources or SourceRegistry.default()
    ci_loc = float(compute_average_ci(mix, sources))
    fraction = _cfe_fraction(mix, sources, grid_demand_mwh)
    results: dict[str, MethodResult] = {}
    for consumer in consumers:
        cfe = consumer.demand_kwh * fraction
        results[consumer.id] = MethodResult(
            attributed_cfe_kwh=cfe,
            attributed_fossil_kwh=consumer.demand_kwh - cfe,
            ci_g_per_kwh=ci_loc,
            emissions_g=consumer.demand_kwh * ci_loc,
        )
    return results


def compute_market_ci(
    demand_kwh: float,
    cfe_claim_kwh: float,
    ci_res: CarbonIntensity | float,
) -> CarbonIntensity:
    """Market-based carbon intensity for one consumer: (D - D_cf) * CI_res / D.

    Raises:
        ZeroDemand: if demand is zero.
        ClaimExceedsDemand: if the claim exceeds demand; over-claims are
            rejected here so they stay visible (the scenario runner
            clamps and flags instead).
    """
    if demand_kwh <= 0:
        raise ZeroDemand("market-based carbon intensity is undefined for zero demand")
    if cfe_claim_kwh < 0:
        raise ValueError(f"carbon-free claim must be >= 0, got {cfe_claim_kwh}")
    if cfe_claim_kwh > demand_kwh:
        raise ClaimExceedsDemand(
            f"claim of {cfe_claim_kwh} kWh exceeds demand of {demand_kwh} kWh"
        )
    return CarbonIntensity((demand_kwh - cfe_claim_kwh) * float(ci_res) / demand_kwh)


def attribute_market_based(
    mixes: GridMix | Mapping[str, GridMix],
    contracts: Sequence[Contract],
    consumers: Sequence[Consumer],
    sources: SourceRegistry | None = None,
    step: int = 0,
) -> dict[str, MethodResult]:
    """Market-based attribution across one or more regions.

    Every region's residual mix removes *all* contracts sourced there,
    including claims by buyers in other regions; each consumer's
    residual demand is then priced at their own region's residual CI.
    Claims above a consumer's demand are clamped to the demand (the
    over-claim is visible via :func:`build_report`).

    Raises:
        EmptyResidual: if a region's generation is fully contracted.
        UnknownRegion: if a consumer's region has no mix.
    """
    sources = sources or SourceRegistry.default()
    if isinstance(mixes, GridMix):
        mixes = {mixes.region: mixes}

    residual_ci: dict[str, float] = {}
    residual_fraction: dict[str, float] = {}
    for region, mix in mixes.items():
        residual = compute_residual_mix(mix, contracts, sources, step)
        if residual.total_energy <= 0:
            raise EmptyResidual(
                f"all generation in region {region!r} is under contract; residual mix is empty"
            )
        residual_ci[region] = float(compute_average_ci(residual.mix, sources))
        residual_fraction[region] = _cfe_fraction(residual.mix, sources)

    results: dict[str, MethodResult] = {}
    for consumer in consumers:
        if consumer.region not in mixes:
            raise UnknownRegion(f"no mix provided for region {consumer.region!r}")
        claim_kwh = KWH_PER_MWH * contracted_cfe_for_buyer(
            contracts, consumer.id, mixes, sources, step
        )
        claim_kwh = min(claim_kwh, consumer.demand_kwh)
        residual_demand = consumer.demand_kwh - claim_kwh
        ci_res = residual_ci[consumer.region]
        # With no claim the formula collapses to ci_res exactly; taking the
        # shortcut keeps that identity float-exact for any demand (and covers
        # zero demand, where the ratio form is undefined).
        if residual_demand == consumer.demand_kwh:
            ci = ci_res
        else:
            ci = residual_demand * ci_res / consumer.demand_kwh
        cfe = claim_kwh + residual_demand * residual_fraction[consumer.region]
        results[consumer.id] = MethodResult(
            attributed_cfe_kwh=cfe,
            attributed_fossil_kwh=consumer.demand_kwh - cfe,
            ci_g_per_kwh=ci,
            emissions_g=consumer.demand_kwh * ci,
        )
    return results


def detect_double_counting(
    mix: GridMix,
    contracts: Sequence[Contract],
    consumers: Sequence[Consumer],
    public_signal_adjusted: bool,
    sources: SourceRegistry | None = None,
    step: int = 0,
) -> float:
    """Carbon-free energy (MWh) counted both by contract buyers and the grid mix.

    When the public grid signal is *not* adjusted for contracts,
    location-based consumers in the region see contracted energy inside
    their grid mix even though a buyer already claimed it exclusively:
    every clamped contracted MWh in the region is counted twice. An
    adjusted signal (or the absence of location-based consumers reading
    it) eliminates the overlap.
    """
    if public_signal_adjusted:
        return 0.0
    anyone_reads_signal = any(
        c.method == LOCATION_BASED and c.region == mix.region for c in consumers
    )
    if not anyone_reads_signal:
        return 0.0
    residual = compute_residual_mix(mix, contracts, sources or SourceRegistry.default(), step)
    return residual.total_removed


def build_report(
    mixes: GridMix | Mapping[str, GridMix],
    contracts: Sequence[Contract],
    consumers: Sequence[Consumer],
    sources: SourceRegistry | None = None,
    grid_demand_mwh: Mapping[str, float] | None = None,
    public_signal_adjusted: bool = False,
    step: int = 0,
) -> AttributionReport:
    """Run both accounting methods and assemble the full report.

    ``grid_demand_mwh`` optionally declares total grid demand per region
    for quoting the location-based carbon-free share (see
    :func:`attribute_location_based`).
    """
    sources = sources or SourceRegistry.default()
    if isinstance(mixes, GridMix):
        mixes = {mixes.region: mixes}
    grid_demand_mwh = dict(grid_demand_mwh or {})

    location: dict[str, MethodResult] = {}
    for region, mix in mixes.items():
        in_region = [c for c in consumers if c.region == region]
        location.update(
            attribute_location_based(mix, in_region, sources, grid_demand_mwh.get(region))
        )
    market = attribute_market_based(mixes, contracts, consumers, sources, step)

    entries = []
    for consumer in consumers:
        claim_kwh = KWH_PER_MWH * contracted_cfe_for_buyer(
            contracts, consumer.id, mixes, sources, step
        )
        entries.append(
            ConsumerAttribution(
                consumer_id=consumer.id,
                region=consumer.region,
                demand_kwh=consumer.demand_kwh,
                method=consumer.method,
                location_based=location[consumer.id],
                market_based=market[consumer.id],
                cfe_claim_kwh=min(claim_kwh, consumer.demand_kwh),
                over_claimed=claim_kwh > consumer.demand_kwh,
            )
        )

    regions = []
    double_counted = 0.0
    for region, mix in sorted(mixes.items()):
        residual = compute_residual_mix(mix, contracts, sources, step)
        regions.append(
            RegionSummary(
                region=region,
                ci_loc_g_per_kwh=float(compute_average_ci(mix, sources)),
                ci_res_g_per_kwh=float(compute_average_ci(residual.mix, sources))
                if residual.total_energy > 0
                else 0.0,
                total_energy_mwh=mix.total_energy,
                carbon_free_energy_mwh=mix.carbon_free_energy(sources),
                contracted_cfe_mwh=residual.total_removed,
                over_contracted=residual.over_contracted,
            )
        )
        double_counted += detect_double_counting(
            mix, contracts, consumers, public_signal_adjusted, sources, step
        )

    return AttributionReport(
        consumers=tuple(entries),
        regions=tuple(regions),
        double_counted_cfe_mwh=double_counted,
    )
