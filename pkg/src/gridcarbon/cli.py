"""Command-line interface.

Every subcommand reads CSVs/YAML, computes with the library, and emits
machine-readable records as JSON lines (default) or CSV. Output is
deterministic: stable record ordering and floats at six significant
digits, so identical inputs produce byte-identical files.

Exit codes: 0 success, 1 validation/domain error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import yaml

from .contracts import Contract, compute_residual_mix, contracts_for_fraction
from .errors import GridCarbonError, ScenarioInvalid
from .factors import load_cef_table
from .fixtures import fixture_datasets, write_fixture_csvs
from .grid import SourceRegistry, compute_average_ci, total_emissions
from .ingest import (
    PUBLISHED_CI_COLUMN,
    TIMESTAMP_COLUMN,
    TIMESTAMP_FORMAT,
    load_region_csv,
)
from .scenarios import builtin_scenario_names, load_builtin_scenario, load_scenario, run_scenario
from .scheduler import (
    FlexibleLoad,
    best_window,
    evaluate_schedule,
    residual_signal,
    total_signal,
    worst_window,
)
from .stats import (
    penetration_fleet,
    period_ci,
    period_residual_ci,
    residual_inflation,
)

CEF_TABLE_ENV = "GRIDCARBON_CEF_TABLE"


def _fmt(value):
    """Floats at 6 significant digits; everything else unchanged."""
    if isinstance(value, bool) or not isinstance(value, float):
        return value
    return float(format(value, ".6g"))


def _emit(records: list[dict], fmt: str, out: str) -> None:
    buffer = io.StringIO()
    if fmt == "json-records":
        for record in records:
            buffer.write(json.dumps({k: _fmt(v) for k, v in record.items()}))
            buffer.write("\n")
    else:
        columns: list[str] = []
        for record in records:
            for key in record:
                if key not in columns:
                    columns.append(key)
        writer = csv.DictWriter(buffer, fieldnames=columns, restval="")
        writer.writeheader()
        for record in records:
            writer.writerow(
                {k: (format(v, ".6g") if isinstance(v, float) else v) for k, v in record.items()}
            )
    text = buffer.getvalue()
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _registry(args) -> SourceRegistry:
    path = args.cef or os.environ.get(CEF_TABLE_ENV)
    if not path:
        return SourceRegistry.default()
    return SourceRegistry.default(load_cef_table(path))


def _load_dataset(args, path=None):
    return load_region_csv(
        path or args.mix,
        region=getattr(args, "region", None),
        fill_policy=args.fill_policy,
        strict=args.strict,
    )


def _parse_contracts_arg(spec: str, region: str):
    """Parse --contracts: none | all-solar-wind | solar-wind:<f> | YAML path."""
    if spec == "none":
        return None
    if spec == "all-solar-wind":
        return 1.0
    if spec.startswith("solar-wind:"):
        return float(spec.split(":", 1)[1])
    data = yaml.safe_load(Path(spec).read_text(encoding="utf-8"))
    if not isinstance(data, list):
        raise GridCarbonError(f"{spec}: expected a YAML list of contracts")
    contracts = []
    for i, body in enumerate(data):
        if not isinstance(body, dict):
            raise GridCarbonError(f"{spec}: contract {i} must be a mapping")
        contracts.append(
            Contract(
                id=str(body.get("id", f"contract-{i}")),
                buyer=str(body.get("buyer", "unnamed")),
                kind=body.get("kind", "financial"),
                source_id=str(body["source"]),
                source_region=str(body.get("region", region)),
                energy_mwh=body["energy_mwh"]
                if not isinstance(body["energy_mwh"], list)
                else tuple(body["energy_mwh"]),
            )
        )
    return tuple(contracts)


def _step_contracts(contract_spec, mix, sources):
    """Materialize the --contracts argument for one series step."""
    if contract_spec is None:
        return ()
    if isinstance(contract_spec, float):
        return contracts_for_fraction(mix, contract_spec, sources=sources)
    return contract_spec


def _timestamp_label(mix) -> str:
    return mix.timestamp.strftime(TIMESTAMP_FORMAT) if mix.timestamp else ""


def cmd_ci(args) -> list[dict]:
    sources = _registry(args)
    dataset = _load_dataset(args)
    contract_spec = _parse_contracts_arg(args.contracts, dataset.region)
    records = []
    energy = emissions = 0.0
    res_energy = res_emissions = 0.0
    for step, mix in enumerate(dataset.mixes):
        record = {
            "timestamp": _timestamp_label(mix),
            "region": dataset.region,
            "ci_g_per_kwh": float(compute_average_ci(mix, sources)),
        }
        energy += mix.total_energy
        emissions += total_emissions(mix, sources) / 1000.0
        if contract_spec is not None:
            contracts = _step_contracts(contract_spec, mix, sources)
            residual = compute_residual_mix(mix, contracts, sources, step)
            record["residual_ci_g_per_kwh"] = (
                float(compute_average_ci(residual.mix, sources))
                if residual.total_energy > 0
                else ""
            )
            res_energy += residual.total_energy
            res_emissions += total_emissions(residual.mix, sources) / 1000.0
        records.append(record)
    aggregate = {
        "timestamp": "aggregate",
        "region": dataset.region,
        "ci_g_per_kwh": emissions / energy,
    }
    if contract_spec is not None:
        aggregate["residual_ci_g_per_kwh"] = res_emissions / res_energy
    records.append(aggregate)
    return records


def cmd_residual(args) -> list[dict]:
    sources = _registry(args)
    dataset = _load_dataset(args)
    categories = args.categories.split(",")
    total = total_signal(dataset, sources)
    resid = residual_signal(dataset, args.fraction, categories, sources)
    records = []
    for mix, ci, ci_res in zip(dataset.mixes, total, resid):
        records.append(
            {
                "timestamp": _timestamp_label(mix),
                "region": dataset.region,
                "ci_g_per_kwh": ci,
                "residual_ci_g_per_kwh": ci_res,
            }
        )
    return records


def _report_records(report) -> list[dict]:
    records = []
    for entry in report.consumers:
        records.append(
            {
                "record": "consumer",
                "id": entry.consumer_id,
                "region": entry.region,
                "method": entry.method,
                "demand_kwh": entry.demand_kwh,
                "cfe_claim_kwh": entry.cfe_claim_kwh,
                "over_claimed": entry.over_claimed,
                "location_cfe_kwh": entry.location_based.attributed_cfe_kwh,
                "location_ci_g_per_kwh": entry.location_based.ci_g_per_kwh,
                "location_emissions_g": entry.location_based.emissions_g,
                "market_cfe_kwh": entry.market_based.attributed_cfe_kwh,
                "market_ci_g_per_kwh": entry.market_based.ci_g_per_kwh,
                "market_emissions_g": entry.market_based.emissions_g,
            }
        )
    for summary in report.regions:
        records.append(
            {
                "record": "region",
                "id": summary.region,
                "region": summary.region,
                "ci_loc_g_per_kwh": summary.ci_loc_g_per_kwh,
                "ci_res_g_per_kwh": summary.ci_res_g_per_kwh,
                "total_energy_mwh": summary.total_energy_mwh,
                "carbon_free_energy_mwh": summary.carbon_free_energy_mwh,
                "contracted_cfe_mwh": summary.contracted_cfe_mwh,
                "over_contracted": ";".join(sorted(summary.over_contracted)),
            }
        )
    records.append(
        {"record": "grid", "double_counted_cfe_mwh": report.double_counted_cfe_mwh}
    )
    return records


def _scenario_from_args(args):
    if args.file:
        return load_scenario(args.file)
    if not args.name:
        raise ScenarioInvalid("name", "give a builtin scenario name or --file")
    return load_builtin_scenario(args.name)


def cmd_scenario(args) -> list[dict]:
    if args.list:
        return [{"record": "scenario", "name": name} for name in builtin_scenario_names()]
    scenario = _scenario_from_args(args)
    return _report_records(run_scenario(scenario))


def cmd_attribute(args) -> list[dict]:
    scenario = _scenario_from_args(args)
    report = run_scenario(scenario)
    records = []
    for entry in report.consumers:
        method = entry.method if args.method == "declared" else args.method
        result = entry.location_based if method == "location_based" else entry.market_based
        records.append(
            {
                "id": entry.consumer_id,
                "region": entry.region,
                "method": method,
                "demand_kwh": entry.demand_kwh,
                "attributed_cfe_kwh": result.attributed_cfe_kwh,
                "attributed_fossil_kwh": result.attributed_fossil_kwh,
                "ci_g_per_kwh": result.ci_g_per_kwh,
                "emissions_g": result.emissions_g,
            }
        )
    return records


def _data_paths(raw_paths: list[str]) -> list[Path]:
    paths = []
    for raw in raw_paths:
        path = Path(raw)
        if path.is_dir():
            paths.extend(sorted(path.glob("*.csv")))
        else:
            paths.append(path)
    if not paths:
        raise GridCarbonError("no CSV files found in the given paths")
    return paths


def cmd_penetration(args) -> list[dict]:
    sources = _registry(args)
    categories = args.categories.split(",")
    datasets = [
        load_region_csv(path, fill_policy=args.fill_policy, strict=args.strict)
        for path in _data_paths(args.data)
    ]
    fleet = penetration_fleet(datasets, categories, sources, args.per_hour_mean)
    records = [
        {
            "record": "region",
            "region": stat.region,
            "total_generation_mwh": stat.total_generation_mwh,
            "solar_wind_mwh": stat.solar_wind_mwh,
            "solar_wind_pct": stat.solar_wind_pct,
        }
        for stat in fleet.stats
    ]
    records.extend(
        {"record": "cdf", "solar_wind_pct": value, "cumulative_fraction": fraction}
        for value, fraction in fleet.cdf
    )
    return records


def cmd_inflation(args) -> list[dict]:
    sources = _registry(args)
    dataset = _load_dataset(args)
    categories = args.categories.split(",")
    ci_loc = float(period_ci(dataset, sources, args.basis))
    ci_res = float(period_residual_ci(dataset, args.fraction, categories, sources, args.basis))
    return [
        {
            "region": dataset.region,
            "contract_fraction": args.fraction,
            "ci_g_per_kwh": ci_loc,
            "residual_ci_g_per_kwh": ci_res,
            "inflation_pct": residual_inflation(
                dataset, args.fraction, categories, sources, args.basis
            ),
        }
    ]


def _load_signal(path: str, sources: SourceRegistry, basis: str) -> tuple[float, ...]:
    """A CI signal from either a bare (timestamp, ci) CSV or a full mix CSV."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        header = next(csv.reader(handle))
    names = {name.strip() for name in header}
    if names <= {TIMESTAMP_COLUMN, PUBLISHED_CI_COLUMN}:
        values = []
        with open(path, "r", encoding="utf-8", newline="") as handle:
            for row in csv.DictReader(handle):
                values.append(float(row[PUBLISHED_CI_COLUMN]))
        return tuple(values)
    dataset = load_region_csv(path)
    return total_signal(dataset, sources, basis)


def cmd_schedule(args) -> list[dict]:
    sources = _registry(args)
    reported = _load_signal(args.signal, sources, args.basis)
    if args.actual:
        actual = _load_signal(args.actual, sources, args.basis)
    elif args.residual_fraction is not None:
        actual = residual_signal(load_region_csv(args.signal), args.residual_fraction)
    else:
        actual = reported
    window = None
    if args.window:
        lo, _, hi = args.window.partition(":")
        window = (int(lo), int(hi))
    load = FlexibleLoad(
        energy_per_hour_kwh=args.energy_per_hour,
        duration_hours=args.duration,
        window=window,
        contiguous=not args.non_contiguous,
    )
    if args.policy == "best_window":
        hours = best_window(reported, load)
    elif args.policy == "worst_window":
        hours = worst_window(reported, load)
    else:
        start = int(args.policy)
        hours = tuple(range(start, start + load.duration_hours))
    result = evaluate_schedule(hours, load, reported, actual)
    return [
        {
            "hours": ",".join(str(h) for h in result.hours),
            "reported_ci_avg_g_per_kwh": result.reported_ci_avg,
            "actual_ci_avg_g_per_kwh": result.actual_ci_avg,
            "reported_emissions_g": result.reported_emissions_g,
            "actual_emissions_g": result.actual_emissions_g,
            "difference_g_per_kwh": result.difference_g_per_kwh,
            "discrepancy_pct": result.discrepancy_pct,
        }
    ]


def cmd_fixtures(args) -> list[dict]:
    if args.action == "list":
        records = [
            {"record": "scenario", "name": name} for name in builtin_scenario_names()
        ]
        records.extend(
            {"record": "dataset", "name": name} for name in sorted(fixture_datasets())
        )
        return records
    paths = write_fixture_csvs(args.dir)
    return [{"record": "exported", "path": str(path)} for path in paths]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=("json-records", "csv"),
        default="json-records",
        help="output format (default: json-records)",
    )
    parser.add_argument("--out", default="-", help="output path, '-' for stdout (default)")
    parser.add_argument(
        "--cef",
        default=None,
        help=f"YAML table of per-category CEF overrides (default: ${CEF_TABLE_ENV})",
    )


def _add_dataset_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mix", required=True, help="region generation CSV")
    parser.add_argument("--region", default=None, help="region name (default: file stem)")
    parser.add_argument(
        "--fill-policy", choices=("drop-row", "zero-fill"), default="drop-row"
    )
    parser.add_argument("--strict", action="store_true", help="reject uneven timestamps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridcarbon",
        description="Grid carbon intensity, residual-mix accounting, and scheduling tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ci", help="average CI per step and aggregate, optionally residual")
    _add_dataset_options(p)
    p.add_argument(
        "--contracts",
        default="none",
        help="none | all-solar-wind | solar-wind:<fraction> | contracts YAML path",
    )
    _add_common(p)
    p.set_defaults(handler=cmd_ci)

    p = sub.add_parser("residual", help="per-step residual CI for a contracted fraction")
    _add_dataset_options(p)
    p.add_argument("--fraction", type=float, required=True, help="contracted fraction in [0, 1]")
    p.add_argument("--categories", default="solar,wind")
    _add_common(p)
    p.set_defaults(handler=cmd_residual)

    p = sub.add_parser("scenario", help="run a bundled or user scenario, full dual report")
    p.add_argument("name", nargs="?", default=None, help="builtin scenario name")
    p.add_argument("--file", default=None, help="scenario YAML path")
    p.add_argument("--list", action="store_true", help="list builtin scenarios")
    _add_common(p)
    p.set_defaults(handler=cmd_scenario)

    p = sub.add_parser("attribute", help="flat per-consumer attribution for one method")
    p.add_argument("name", nargs="?", default=None, help="builtin scenario name")
    p.add_argument("--file", default=None, help="scenario YAML path")
    p.add_argument(
        "--method",
        choices=("declared", "location_based", "market_based"),
        default="declared",
    )
    _add_common(p)
    p.set_defaults(handler=cmd_attribute)

    p = sub.add_parser("penetration", help="solar+wind share per region plus fleet CDF")
    p.add_argument("--data", nargs="+", required=True, help="CSV files or directories")
    p.add_argument("--categories", default="solar,wind")
    p.add_argument("--per-hour-mean", action="store_true")
    p.add_argument(
        "--fill-policy", choices=("drop-row", "zero-fill"), default="drop-row"
    )
    p.add_argument("--strict", action="store_true")
    _add_common(p)
    p.set_defaults(handler=cmd_penetration)

    p = sub.add_parser("inflation", help="period CI increase when generation is contracted")
    _add_dataset_options(p)
    p.add_argument("--fraction", type=float, required=True)
    p.add_argument("--categories", default="solar,wind")
    p.add_argument("--basis", choices=("cef", "published"), default="cef")
    _add_common(p)
    p.set_defaults(handler=cmd_inflation)

    p = sub.add_parser("schedule", help="place a flexible load and price it on two signals")
    p.add_argument("--signal", required=True, help="CI signal CSV or region mix CSV")
    p.add_argument("--actual", default=None, help="second signal CSV for the actual CI")
    p.add_argument(
        "--residual-fraction",
        type=float,
        default=None,
        help="derive the actual signal from --signal with this fraction contracted",
    )
    p.add_argument("--duration", type=int, required=True, help="hours the load runs")
    p.add_argument("--energy-per-hour", type=float, default=1.0, help="kWh drawn per hour")
    p.add_argument("--window", default=None, help="allowed start indices as LO:HI")
    p.add_argument("--non-contiguous", action="store_true")
    p.add_argument(
        "--policy",
        default="best_window",
        help="best_window | worst_window | fixed start index",
    )
    p.add_argument("--basis", choices=("cef", "published"), default="cef")
    _add_common(p)
    p.set_defaults(handler=cmd_schedule)

    p = sub.add_parser("fixtures", help="list or export the bundled fixtures")
    p.add_argument("action", choices=("list", "export"))
    p.add_argument("--dir", default="fixtures", help="export directory")
    _add_common(p)
    p.set_defaults(handler=cmd_fixtures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        records = args.handler(args)
        _emit(records, args.format, args.out)
    except GridCarbonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, yaml.YAMLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
