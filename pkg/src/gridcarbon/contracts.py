"""Power purchase agreements, the residual grid mix, and residual carbon intensity.

A contract transfers the carbon-free attribute of some contracted
generation from the grid to a named buyer. Removing every contracted
MWh from the grid mix yields the *residual* mix; its average carbon
intensity is the residual carbon intensity, the signal that uncontracted
consumers should see under market-based accounting.

Over-contracting (claims exceeding a source's generation in a step) is
clamped at the available generation and pro-rated among the competing
contracts, and the affected source ids are flagged rather than raised:
the anomaly is surfaced but the accounting invariants stay intact.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .errors import ContractNotCarbonFree, EmptyMix, EmptyResidual, UnknownRegion
from .grid import CarbonIntensity, GridMix, SourceRegistry, compute_average_ci

PHYSICAL_KINDS = frozenset({"physical_onsite", "physical_offsite"})
CONTRACT_KINDS = PHYSICAL_KINDS | {"financial", "rec"}


@dataclass(frozen=True)
class Contract:
    """A PPA or REC purchase granting ``buyer`` a claim on contracted generation.

    ``energy_mwh`` is the contracted energy per time step: a scalar for
    static scenarios, or a sequence aligned step-for-step with a mix
    time series. A REC purchase is accounting-wise identical to a
    financial PPA here; the kind tag is kept for reporting.
    """

    id: str
    buyer: str
    kind: str
    source_id: str
    source_region: str
    energy_mwh: float | tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in CONTRACT_KINDS:
            raise ValueError(
                f"contract {self.id!r}: kind must be one of {sorted(CONTRACT_KINDS)}, got {self.kind!r}"
            )
        if isinstance(self.energy_mwh, (int, float)):
            object.__setattr__(self, "energy_mwh", float(self.energy_mwh))
            if self.energy_mwh < 0:
                raise ValueError(f"contract {self.id!r}: energy must be >= 0")
        else:
            object.__setattr__(self, "energy_mwh", tuple(float(e) for e in self.energy_mwh))
            if any(e < 0 for e in self.energy_mwh):
                raise ValueError(f"contract {self.id!r}: energy must be >= 0 at every step")

    def energy_at(self, step: int = 0) -> float:
        """Contracted energy in MWh at the given series step."""
        if isinstance(self.energy_mwh, float):
            return self.energy_mwh
        if not 0 <= step < len(self.energy_mwh):
            raise ValueError(
                f"contract {self.id!r}: step {step} outside contracted series of length {len(self.energy_mwh)}"
            )
        return self.energy_mwh[step]


@dataclass(frozen=True)
class ResidualMix:
    """A grid mix with contracted carbon-free energy removed.

    Attributes:
        mix: the residual mix itself (original minus removals).
        removed: MWh actually removed per source id, after clamping.
        over_contracted: source ids whose claims exceeded generation.
    """

    mix: GridMix
    removed: Mapping[str, float]
    over_contracted: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "removed", dict(self.removed))
        object.__setattr__(self, "over_contracted", frozenset(self.over_contracted))

    @property
    def region(self) -> str:
        return self.mix.region

    @property
    def generation(self) -> Mapping[str, float]:
        return self.mix.generation

    @property
    def total_energy(self) -> float:
        return self.mix.total_energy

    @property
    def total_removed(self) -> float:
        return sum(self.removed.values())


def _allocate(
    mix: GridMix,
    contracts: Sequence[Contract],
    sources: SourceRegistry,
    step: int,
) -> tuple[dict[str, float], dict[str, float], set[str]]:
    """Allocate contracted energy against a mix's generation.

    Returns (per-contract allocations keyed by contract id, MWh removed
    per source id, over-contracted source ids). Claims beyond a source's
    generation are pro-rated by contracted amount; the removed total is
    exactly the available generation in that case, so an over-contracted
    source zeroes out of the residual with no float dust.
    """
    claims: dict[str, list[tuple[Contract, float]]] = {}
    for contract in contracts:
        if contract.source_region != mix.region:
            continue
        source = sources.get(contract.source_id)
        if not source.carbon_free:
            raise ContractNotCarbonFree(
                f"contract {contract.id!r} targets {contract.source_id!r}, which is not carbon-free"
            )
        claims.setdefault(contract.source_id, []).append((contract, contract.energy_at(step)))

    allocations: dict[str, float] = {}
    removed: dict[str, float] = {}
    over_contracted: set[str] = set()
    for source_id, source_claims in claims.items():
        total_claim = sum(amount for _, amount in source_claims)
        available = mix.generation.get(source_id, 0.0)
        if total_claim <= available:
            removed_amount = total_claim
            scale = 1.0
        else:  # total_claim > available >= 0, so total_claim > 0
            over_contracted.add(source_id)
            removed_amount = available
            scale = available / total_claim
        for contract, amount in source_claims:
            allocations[contract.id] = allocations.get(contract.id, 0.0) + amount * scale
        if removed_amount > 0:
            removed[source_id] = removed_amount
    return allocations, removed, over_contracted


def compute_residual_mix(
    mix: GridMix,
    contracts: Sequence[Contract],
    sources: SourceRegistry | None = None,
    step: int = 0,
) -> ResidualMix:
    """Remove all contracted carbon-free energy from a mix.

    Only contracts whose ``source_region`` matches the mix's region
    apply. Removal per source is clamped at available generation.

    Raises:
        ContractNotCarbonFree: if an applicable contract targets a
            source with a nonzero emission factor.
    """
    sources = sources or SourceRegistry.default()
    _, removed, over_contracted = _allocate(mix, contracts, sources, step)
    generation = dict(mix.generation)
    for source_id, amount in removed.items():
        # max() only guards float dust; the allocation is already clamped.
        generation[source_id] = max(generation.get(source_id, 0.0) - amount, 0.0)
    residual = GridMix(region=mix.region, generation=generation, timestamp=mix.timestamp)
    return ResidualMix(mix=residual, removed=removed, over_contracted=frozenset(over_contracted))


def compute_residual_ci(
    mix: GridMix,
    contracts: Sequence[Contract],
    sources: SourceRegistry | None = None,
    step: int = 0,
) -> CarbonIntensity:
    """Average carbon intensity of the residual mix, g/kWh.

    With no contracts this equals the plain average carbon intensity;
    contracting carbon-free energy out can only raise it.

    Raises:
        EmptyMix: if the original mix has zero generation.
        EmptyResidual: if every MWh of generation is under contract.
    """
    sources = sources or SourceRegistry.default()
    if mix.total_energy <= 0:
        raise EmptyMix(f"carbon intensity undefined for empty mix in region {mix.region!r}")
    residual = compute_residual_mix(mix, contracts, sources, step)
    if residual.total_energy <= 0:
        raise EmptyResidual(
            f"all generation in region {mix.region!r} is under contract; residual mix is empty"
        )
    return compute_average_ci(residual.mix, sources)


def contracts_for_fraction(
    mix: GridMix,
    fraction: float | Mapping[str, float],
    categories: Sequence[str] = ("solar", "wind"),
    sources: SourceRegistry | None = None,
    buyer: str = "__contracted__",
) -> tuple[Contract, ...]:
    """Synthesize contracts covering a fraction of selected generation.

    ``fraction`` is either one number applied to every listed category or
    a mapping from category to its own fraction (the mapping's keys then
    replace ``categories``). Fractions must lie in [0, 1]. Useful for
    what-if analyses such as "all solar and wind is contracted out".
    """
    sources = sources or SourceRegistry.default()
    if isinstance(fraction, Mapping):
        per_category = {str(cat): float(f) for cat, f in fraction.items()}
    else:
        per_category = {str(cat): float(fraction) for cat in categories}
    for cat, f in per_category.items():
        if not 0.0 <= f <= 1.0:
            raise ValueError(f"contract fraction for {cat!r} must be in [0, 1], got {f}")
    contracts = []
    for source_id in sorted(mix.generation):
        source = sources.get(source_id)
        f = per_category.get(source.category, 0.0)
        energy = mix.generation[source_id] * f
        if energy > 0:
            contracts.append(
                Contract(
                    id=f"{buyer}:{source_id}",
                    buyer=buyer,
                    kind="financial",
                    source_id=source_id,
                    source_region=mix.region,
                    energy_mwh=energy,
                )
            )
    return tuple(contracts)


def contracted_cfe_for_buyer(
    contracts: Sequence[Contract],
    buyer: str,
    mixes: GridMix | Mapping[str, GridMix],
    sources: SourceRegistry | None = None,
    step: int = 0,
) -> float:
    """Carbon-free energy (MWh) deliverable to a buyer at one step.

    Sums the buyer's contracted energy across regions after the same
    per-source clamping and proration used for the residual mix, so a
    buyer competing for scarce generation only gets its pro-rata share.

    Raises:
        UnknownRegion: if one of the buyer's contracts sources energy
            from a region with no mix provided.
    """
    sources = sources or SourceRegistry.default()
    if isinstance(mixes, GridMix):
        mixes = {mixes.region: mixes}
    for contract in contracts:
        if contract.buyer == buyer and contract.source_region not in mixes:
            raise UnknownRegion(
                f"contract {contract.id!r} sources from region {contract.source_region!r}, "
                f"for which no mix was provided"
            )
    total = 0.0
    for mix in mixes.values():
        allocations, _, _ = _allocate(mix, contracts, sources, step)
        for contract in contracts:
            if contract.buyer == buyer and contract.source_region == mix.region:
                total += allocations.get(contract.id, 0.0)
    return total
