"""Grid carbon accounting: average and residual carbon intensity,
contract-aware consumer attribution, penetration statistics, and
carbon-aware load scheduling."""

from .attribution import (
    AttributionReport,
    Consumer,
    ConsumerAttribution,
    MethodResult,
    RegionSummary,
    attribute_location_based,
    attribute_market_based,
    build_report,
    compute_market_ci,
    detect_double_counting,
)
from .contracts import (
    Contract,
    ResidualMix,
    compute_residual_ci,
    compute_residual_mix,
    contracted_cfe_for_buyer,
    contracts_for_fraction,
)
from .errors import (
    ClaimExceedsDemand,
    ContractNotCarbonFree,
    EmptyFleet,
    EmptyMix,
    EmptyResidual,
    GapError,
    GridCarbonError,
    ParseError,
    ScenarioInvalid,
    SchemaError,
    SignalMismatch,
    UnknownRegion,
    UnknownSource,
    WindowTooShort,
    ZeroBaseline,
    ZeroDemand,
)
from .factors import CARBON_FREE_CATEGORIES, DEFAULT_CEF, SOURCE_CATEGORIES, load_cef_table
from .fixtures import (
    duck_curve_fixture,
    fixture_datasets,
    fleet_fixtures,
    south_australia_fixture,
    toy_mix,
    write_fixture_csvs,
)
from .grid import (
    CarbonIntensity,
    EnergySource,
    GridMix,
    MixTimeSeries,
    SourceRegistry,
    compute_average_ci,
    total_emissions,
)
from .ingest import LoadSummary, RegionDataset, load_region_csv, write_region_csv
from .scenarios import (
    Scenario,
    builtin_scenario_names,
    load_builtin_scenario,
    load_scenario,
    parse_scenario,
    run_scenario,
)
from .scheduler import (
    FlexibleLoad,
    ScheduleResult,
    best_window,
    evaluate_schedule,
    residual_signal,
    shift_savings,
    total_signal,
    worst_window,
)
from .stats import (
    FleetPenetration,
    PenetrationStat,
    penetration,
    penetration_fleet,
    period_ci,
    period_residual_ci,
    residual_inflation,
)

__version__ = "0.1.0"

__all__ = [
    "AttributionReport",
    "CARBON_FREE_CATEGORIES",
    "CarbonIntensity",
    "ClaimExceedsDemand",
    "Consumer",
    "ConsumerAttribution",
    "Contract",
    "ContractNotCarbonFree",
    "DEFAULT_CEF",
    "EmptyFleet",
    "EmptyMix",
    "EmptyResidual",
    "EnergySource",
    "FleetPenetration",
    "FlexibleLoad",
    "GapError",
    "GridCarbonError",
    "GridMix",
    "LoadSummary",
    "MethodResult",
    "MixTimeSeries",
    "ParseError",
    "PenetrationStat",
    "RegionDataset",
    "RegionSummary",
    "ResidualMix",
    "Scenario",
    "ScenarioInvalid",
    "ScheduleResult",
    "SchemaError",
    "SignalMismatch",
    "SOURCE_CATEGORIES",
    "SourceRegistry",
    "UnknownRegion",
    "UnknownSource",
    "WindowTooShort",
    "ZeroBaseline",
    "ZeroDemand",
    "attribute_location_based",
    "attribute_market_based",
    "best_window",
    "build_report",
    "builtin_scenario_names",
    "compute_average_ci",
    "compute_market_ci",
    "compute_residual_ci",
    "compute_residual_mix",
    "contracted_cfe_for_buyer",
    "contracts_for_fraction",
    "detect_double_counting",
    "duck_curve_fixture",
    "evaluate_schedule",
    "fixture_datasets",
    "fleet_fixtures",
    "load_builtin_scenario",
    "load_cef_table",
    "load_region_csv",
    "load_scenario",
    "parse_scenario",
    "penetration",
    "penetration_fleet",
    "period_ci",
    "period_residual_ci",
    "residual_inflation",
    "residual_signal",
    "run_scenario",
    "shift_savings",
    "south_australia_fixture",
    "total_emissions",
    "total_signal",
    "toy_mix",
    "worst_window",
    "write_fixture_csvs",
    "write_region_csv",
]
