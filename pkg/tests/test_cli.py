from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest

from gridcarbon.cli import CEF_TABLE_ENV, main

TOY_CSV = "timestamp,wind,coal\n2022-06-01T00:00:00Z,500,500\n"

SIGNAL_CSV = (
    "timestamp,ci_g_per_kwh\n"
    "2022-06-01T00:00:00Z,100\n"
    "2022-06-01T01:00:00Z,50\n"
    "2022-06-01T02:00:00Z,200\n"
)


@pytest.fixture()
def toy_csv(tmp_path: Path) -> Path:
    path = tmp_path / "toy.csv"
    path.write_text(TOY_CSV, encoding="utf-8")
    return path


def _run(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def _records(output: str) -> list[dict]:
    return [json.loads(line) for line in output.splitlines()]


# --- ci ------------------------------------------------------------------------

def test_ci_toy_grid(capsys, toy_csv: Path) -> None:
    code, out = _run(capsys, "ci", "--mix", str(toy_csv))
    assert code == 0
    records = _records(out)
    assert records[0]["ci_g_per_kwh"] == 500.0
    assert records[0]["region"] == "toy"
    assert records[-1]["timestamp"] == "aggregate"
    assert records[-1]["ci_g_per_kwh"] == 500.0
    assert "residual_ci_g_per_kwh" not in records[0]


def test_ci_contracts_none_matches_default(capsys, toy_csv: Path) -> None:
    _, plain = _run(capsys, "ci", "--mix", str(toy_csv))
    _, none = _run(capsys, "ci", "--mix", str(toy_csv), "--contracts", "none")
    assert none == plain


def test_ci_all_solar_wind(capsys, toy_csv: Path) -> None:
    code, out = _run(capsys, "ci", "--mix", str(toy_csv), "--contracts", "all-solar-wind")
    assert code == 0
    records = _records(out)
    assert records[0]["residual_ci_g_per_kwh"] == 1000.0
    assert records[-1]["residual_ci_g_per_kwh"] == 1000.0


def test_ci_fractional_contracts(capsys, toy_csv: Path) -> None:
    code, out = _run(capsys, "ci", "--mix", str(toy_csv), "--contracts", "solar-wind:0.5")
    assert code == 0
    expected = float(format(500_000.0 / 750.0, ".6g"))
    assert _records(out)[0]["residual_ci_g_per_kwh"] == expected


def test_ci_contracts_yaml(capsys, tmp_path: Path, toy_csv: Path) -> None:
    contracts = tmp_path / "contracts.yaml"
    contracts.write_text(
        "- {id: w, buyer: c, kind: financial, source: wind, energy_mwh: 250}\n",
        encoding="utf-8",
    )
    code, out = _run(capsys, "ci", "--mix", str(toy_csv), "--contracts", str(contracts))
    assert code == 0
    expected = float(format(500_000.0 / 750.0, ".6g"))
    assert _records(out)[0]["residual_ci_g_per_kwh"] == expected


# --- output contract --------------------------------------------------------------

def test_reruns_are_byte_identical(capsys, toy_csv: Path) -> None:
    _, first = _run(capsys, "ci", "--mix", str(toy_csv), "--contracts", "solar-wind:0.3")
    _, second = _run(capsys, "ci", "--mix", str(toy_csv), "--contracts", "solar-wind:0.3")
    assert first == second
    _, first_csv = _run(capsys, "scenario", "residential-case-2", "--format", "csv")
    _, second_csv = _run(capsys, "scenario", "residential-case-2", "--format", "csv")
    assert first_csv == second_csv


def test_out_file_matches_stdout(capsys, tmp_path: Path, toy_csv: Path) -> None:
    _, stdout = _run(capsys, "ci", "--mix", str(toy_csv))
    out_path = tmp_path / "report.jsonl"
    code, _ = _run(capsys, "ci", "--mix", str(toy_csv), "--out", str(out_path))
    assert code == 0
    assert out_path.read_text(encoding="utf-8") == stdout


def test_csv_format_parses(capsys, toy_csv: Path) -> None:
    code, out = _run(capsys, "ci", "--mix", str(toy_csv), "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["ci_g_per_kwh"] == "500"
    assert rows[-1]["timestamp"] == "aggregate"


def test_floats_are_six_significant_digits(capsys, toy_csv: Path) -> None:
    _, out = _run(capsys, "ci", "--mix", str(toy_csv), "--contracts", "solar-wind:0.7")
    value = _records(out)[0]["residual_ci_g_per_kwh"]
    assert value == 769.231  # 500000/650 shortened to 6 significant digits


# --- scenario / attribute -----------------------------------------------------------

def test_scenario_list(capsys) -> None:
    code, out = _run(capsys, "scenario", "--list")
    assert code == 0
    names = [r["name"] for r in _records(out)]
    assert names == sorted(names)
    assert len(names) == 6


def test_scenario_builtin_records(capsys) -> None:
    code, out = _run(capsys, "scenario", "residential-case-2")
    assert code == 0
    records = _records(out)
    by_kind = {}
    for record in records:
        by_kind.setdefault(record["record"], []).append(record)
    consumers = {r["id"]: r for r in by_kind["consumer"]}
    assert consumers["H1"]["location_cfe_kwh"] == 10.0002
    assert consumers["H2"]["market_cfe_kwh"] == 15.0
    assert by_kind["grid"][0]["double_counted_cfe_mwh"] == 0.01
    assert by_kind["region"][0]["ci_res_g_per_kwh"] == 500.0


def test_scenario_requires_name_or_file(capsys) -> None:
    code, _ = _run(capsys, "scenario")
    assert code == 1


def test_scenario_invalid_file_names_field(capsys, tmp_path: Path) -> None:
    bad = tmp_path / "bad.yaml"
    bad.write_text("regions: {}\nconsumers: []\n", encoding="utf-8")
    code = main(["scenario", "--file", str(bad)])
    captured = capsys.readouterr()
    assert code == 1
    assert "regions" in captured.err


def test_attribute_declared_methods(capsys) -> None:
    code, out = _run(capsys, "attribute", "commercial-case-2")
    assert code == 0
    rows = {r["id"]: r for r in _records(out)}
    assert rows["C1"]["method"] == "market_based"
    assert rows["C1"]["ci_g_per_kwh"] == 0.0
    assert rows["H1"]["ci_g_per_kwh"] == 489.796


def test_attribute_forced_method(capsys) -> None:
    code, out = _run(capsys, "attribute", "commercial-case-2", "--method", "location_based")
    assert code == 0
    rows = {r["id"]: r for r in _records(out)}
    assert rows["C1"]["method"] == "location_based"
    assert rows["C1"]["ci_g_per_kwh"] == rows["H1"]["ci_g_per_kwh"]


def test_attribute_from_file(capsys, tmp_path: Path) -> None:
    scenario = tmp_path / "mine.yaml"
    scenario.write_text(
        "regions: {r: {generation: {wind: 50, coal: 50}}}\n"
        "consumers: [{id: a, region: r, demand_kwh: 10}]\n",
        encoding="utf-8",
    )
    code, out = _run(capsys, "attribute", "--file", str(scenario))
    assert code == 0
    assert _records(out)[0]["ci_g_per_kwh"] == 500.0


# --- penetration / inflation ----------------------------------------------------------

@pytest.fixture(scope="module")
def fixture_dir(tmp_path_factory) -> Path:
    directory = tmp_path_factory.mktemp("fixtures")
    assert main(["fixtures", "export", "--dir", str(directory), "--out", "-"]) == 0
    return directory


def test_fixtures_export_and_list(capsys, fixture_dir: Path) -> None:
    capsys.readouterr()
    names = sorted(path.stem for path in fixture_dir.glob("*.csv"))
    assert names == ["aurora", "boreal", "cinder", "duck-curve", "south-australia"]
    code, out = _run(capsys, "fixtures", "list")
    assert code == 0
    records = _records(out)
    assert {r["record"] for r in records} == {"scenario", "dataset"}


def test_penetration_fleet_files(capsys, fixture_dir: Path) -> None:
    capsys.readouterr()
    code, out = _run(
        capsys,
        "penetration",
        "--data",
        str(fixture_dir / "aurora.csv"),
        str(fixture_dir / "boreal.csv"),
        str(fixture_dir / "cinder.csv"),
    )
    assert code == 0
    records = _records(out)
    shares = {r["region"]: r["solar_wind_pct"] for r in records if r["record"] == "region"}
    assert shares == {"aurora": 10.0, "boreal": 30.0, "cinder": 50.0}
    cdf = [(r["solar_wind_pct"], r["cumulative_fraction"]) for r in records if r["record"] == "cdf"]
    assert cdf[0][0] == 10.0
    assert cdf[-1][1] == 1.0


def test_penetration_directory(capsys, fixture_dir: Path) -> None:
    capsys.readouterr()
    code, out = _run(capsys, "penetration", "--data", str(fixture_dir))
    assert code == 0
    records = _records(out)
    fractions = [r["cumulative_fraction"] for r in records if r["record"] == "cdf"]
    assert fractions == sorted(fractions)
    assert fractions[-1] == 1.0


def test_inflation_aggregate_fixture(capsys, fixture_dir: Path) -> None:
    capsys.readouterr()
    code, out = _run(
        capsys,
        "inflation",
        "--mix",
        str(fixture_dir / "south-australia.csv"),
        "--fraction",
        "1.0",
    )
    assert code == 0
    record = _records(out)[0]
    assert record["ci_g_per_kwh"] == pytest.approx(125.67, rel=1e-6)
    assert record["residual_ci_g_per_kwh"] == pytest.approx(370.22, rel=0.01)
    assert record["inflation_pct"] == pytest.approx(194.0, abs=2.0)


# --- schedule ---------------------------------------------------------------------------

def test_schedule_bare_signal(capsys, tmp_path: Path) -> None:
    signal = tmp_path / "signal.csv"
    signal.write_text(SIGNAL_CSV, encoding="utf-8")
    code, out = _run(capsys, "schedule", "--signal", str(signal), "--duration", "1")
    assert code == 0
    record = _records(out)[0]
    assert record["hours"] == "1"
    assert record["reported_ci_avg_g_per_kwh"] == 50.0
    assert record["discrepancy_pct"] == 0.0


def test_schedule_worst_policy_and_window(capsys, tmp_path: Path) -> None:
    signal = tmp_path / "signal.csv"
    signal.write_text(SIGNAL_CSV, encoding="utf-8")
    code, out = _run(
        capsys,
        "schedule", "--signal", str(signal), "--duration", "1",
        "--policy", "worst_window", "--window", "0:1",
    )
    assert code == 0
    assert _records(out)[0]["hours"] == "0"


def test_schedule_residual_fraction(capsys, fixture_dir: Path) -> None:
    code, out = _run(
        capsys,
        "schedule",
        "--signal", str(fixture_dir / "duck-curve.csv"),
        "--residual-fraction", "1.0",
        "--duration", "1",
        "--energy-per-hour", "7000",
    )
    assert code == 0
    record = _records(out)[0]
    assert record["hours"] == "12"
    assert record["reported_ci_avg_g_per_kwh"] == 121.0
    assert record["actual_ci_avg_g_per_kwh"] == 582.0


def test_schedule_two_signals(capsys, tmp_path: Path) -> None:
    reported = tmp_path / "reported.csv"
    reported.write_text(SIGNAL_CSV, encoding="utf-8")
    actual = tmp_path / "actual.csv"
    actual.write_text(
        "timestamp,ci_g_per_kwh\n"
        "2022-06-01T00:00:00Z,120\n"
        "2022-06-01T01:00:00Z,130\n"
        "2022-06-01T02:00:00Z,210\n",
        encoding="utf-8",
    )
    code, out = _run(
        capsys,
        "schedule", "--signal", str(reported), "--actual", str(actual), "--duration", "1",
    )
    assert code == 0
    record = _records(out)[0]
    assert record["actual_ci_avg_g_per_kwh"] == 130.0
    assert record["difference_g_per_kwh"] == 80.0


# --- CEF overrides ------------------------------------------------------------------------

def test_cef_flag(capsys, tmp_path: Path, toy_csv: Path) -> None:
    table = tmp_path / "cef.yaml"
    table.write_text("coal: 800\n", encoding="utf-8")
    code, out = _run(capsys, "ci", "--mix", str(toy_csv), "--cef", str(table))
    assert code == 0
    assert _records(out)[0]["ci_g_per_kwh"] == 400.0


def test_cef_env_var(capsys, tmp_path: Path, toy_csv: Path, monkeypatch) -> None:
    table = tmp_path / "cef.yaml"
    table.write_text("coal: 600\n", encoding="utf-8")
    monkeypatch.setenv(CEF_TABLE_ENV, str(table))
    code, out = _run(capsys, "ci", "--mix", str(toy_csv))
    assert code == 0
    assert _records(out)[0]["ci_g_per_kwh"] == 300.0


def test_cef_flag_beats_env(capsys, tmp_path: Path, toy_csv: Path, monkeypatch) -> None:
    env_table = tmp_path / "env.yaml"
    env_table.write_text("coal: 600\n", encoding="utf-8")
    flag_table = tmp_path / "flag.yaml"
    flag_table.write_text("coal: 800\n", encoding="utf-8")
    monkeypatch.setenv(CEF_TABLE_ENV, str(env_table))
    _, out = _run(capsys, "ci", "--mix", str(toy_csv), "--cef", str(flag_table))
    assert _records(out)[0]["ci_g_per_kwh"] == 400.0


# --- exit codes ------------------------------------------------------------------------------

def test_validation_error_exits_1(capsys, toy_csv: Path) -> None:
    code = main(["residual", "--mix", str(toy_csv), "--fraction", "1.5"])
    captured = capsys.readouterr()
    assert code == 1
    assert "error:" in captured.err


def test_missing_file_exits_2(capsys, tmp_path: Path) -> None:
    code = main(["ci", "--mix", str(tmp_path / "nope.csv")])
    captured = capsys.readouterr()
    assert code == 2
    assert "error:" in captured.err


def test_unknown_builtin_exits_1(capsys) -> None:
    code = main(["scenario", "does-not-exist"])
    assert code == 1
    assert "error:" in capsys.readouterr().err
