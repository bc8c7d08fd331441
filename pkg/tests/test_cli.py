import csv
import io
import json

import pytest

from conftest import CONFIGS, GOLDEN, run_cli


def _json_report(*args):
    proc = run_cli(*args)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def test_analyze_json_totals():
    report = _json_report("analyze", "--stack", "asap7", "--area", "1", "--yield", "1", "--format", "json")
    result = report["result"]
    assert result["stack_metrics"]["total_pfas_layers"] == 29
    assert result["stack_metrics"]["by_region"] == {"FEOL": 4, "MOL": 3, "BEOL": 22}
    assert result["stack_metrics"]["total_litho_energy"] == 128.0
    assert result["chip_pfas"]["value"] == 29.0
    assert report["command"] == "analyze"
    assert report["schema_version"] == "1"


def test_analyze_csv_matches_json_numbers():
    args = ("analyze", "--stack", "asap7", "--area", "1", "--yield", "0.875")
    report = _json_report(*args, "--format", "json")
    proc = run_cli(*args, "--format", "csv")
    assert proc.returncode == 0
    rows = list(csv.DictReader(io.StringIO(proc.stdout)))
    per_layer = {pl["name"]: pl for pl in report["result"]["stack_metrics"]["per_layer"]}
    for row in rows[:-1]:
        expected = per_layer[row["name"]]
        assert int(row["pfas_layers"]) == expected["pfas_layers"]
        assert float(row["litho_energy"]) == expected["litho_energy"]
        assert int(row["litho_steps"]) == expected["litho_steps"]
    totals = rows[-1]
    assert totals["name"] == "TOTAL"
    assert int(totals["pfas_layers"]) == 29
    assert float(totals["litho_energy"]) == 128.0
    assert int(totals["litho_steps"]) == 86


def test_analyze_table_has_reference_columns():
    proc = run_cli("analyze", "--stack", "asap7", "--area", "1", "--yield", "1")
    assert proc.returncode == 0
    assert "# Litho steps" in proc.stdout
    assert "E_litho" in proc.stdout
    assert "# PFAS_litho" in proc.stdout


def test_stack_roundtrip_through_report(tmp_path):
    report = _json_report("analyze", "--stack", "asap7", "--area", "1", "--yield", "1", "--format", "json")
    stack_doc = report["inputs"]["stack"]
    path = tmp_path / "stack.json"
    path.write_text(json.dumps(stack_doc), encoding="utf-8")
    again = _json_report("analyze", "--stack", str(path), "--area", "1", "--yield", "1", "--format", "json")
    assert again["result"]["stack_metrics"] == report["result"]["stack_metrics"]


def test_compare_positional_stacks():
    report = _json_report("compare", "n7_duv", "n7_euv", "--format", "json")
    reduction = report["result"]["percent_reduction"]
    assert 0.16 <= reduction <= 0.20


def test_compare_from_config():
    report = _json_report("compare", "--config", str(CONFIGS / "compare_n7.json"), "--format", "json")
    assert report["result"]["a"]["total_pfas_layers"] == 36
    assert report["result"]["b"]["total_pfas_layers"] == 29


def test_sweep_beol_only_series():
    proc = run_cli(
        "sweep", "--stack", "asap7", "--targets", "M7,M5,M3", "--beol-only", "--format", "csv"
    )
    assert proc.returncode == 0
    rows = list(csv.DictReader(io.StringIO(proc.stdout)))
    series = [int(r["beol_pfas_layers"]) for r in rows[1:]]  # skip baseline row
    assert series == [18, 12, 6]


def test_sweep_retention_from_flags():
    report = _json_report(
        "sweep", "--stack", "asap7", "--targets", "M3", "--retain-power-grid",
        "--format", "json",
    )
    points = report["result"]["points"]
    assert points[0]["metrics"]["total_pfas_layers"] == 29
    assert points[1]["metrics"]["total_pfas_layers"] == 17


def test_sweep_conflicting_flags():
    proc = run_cli("sweep", "--stack", "asap7", "--targets", "M3", "--retain-power-grid", "--beol-only")
    assert proc.returncode == 1
    assert "beol-only" in proc.stderr


def test_soc_report():
    report = _json_report("soc", "--config", str(CONFIGS / "soc_trainer.json"), "--format", "json")
    result = report["result"]
    assert result["target_top"] == "M4"
    assert 0.023 <= result["area_increase"] <= 0.025
    assert result["baseline"]["metrics"]["total_pfas_layers"] == 29
    assert result["constrained"]["metrics"]["total_pfas_layers"] == 20


def test_trend_ref_override():
    report = _json_report(
        "trend", "--config", str(CONFIGS / "trend_nodes.json"), "--ref", "7nm", "--format", "json"
    )
    points = {p["node"]: p["normalized"] for p in report["result"]["points"]}
    assert points["7nm"] == 1.0
    assert points["28nm"] == 20 / 29


def test_carbon_profile_flag():
    report = _json_report(
        "analyze", "--stack", "asap7", "--area", "1", "--yield", "1",
        "--carbon-profile", str(CONFIGS / "carbon_profile_example.json"),
        "--format", "json",
    )
    carbon = report["result"]["carbon"]
    assert carbon["low_kg"] < carbon["embodied_kg"] < carbon["high_kg"]


def test_sweep_csv_matches_json_numbers():
    args = (
        "sweep", "--config", str(CONFIGS / "sweep_asap7.json"),
    )
    report = _json_report(*args, "--format", "json")
    proc = run_cli(*args, "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(proc.stdout)))
    for row, point in zip(rows, report["result"]["points"]):
        assert int(row["total_pfas_layers"]) == point["metrics"]["total_pfas_layers"]
        assert int(row["beol_pfas_layers"]) == point["metrics"]["by_region"]["BEOL"]
        assert float(row["litho_energy"]) == point["metrics"]["total_litho_energy"]
        assert float(row["chip_pfas"]) == point["chip_pfas"]["value"]
        assert float(row["embodied_kg"]) == point["carbon"]["embodied_kg"]


def test_soc_csv_matches_json_numbers():
    args = ("soc", "--config", str(CONFIGS / "soc_trainer.json"))
    report = _json_report(*args, "--format", "json")
    proc = run_cli(*args, "--format", "csv")
    lines = proc.stdout.split("metric,baseline,constrained\n")
    summary = {r["metric"]: r for r in csv.DictReader(
        io.StringIO("metric,baseline,constrained\n" + lines[1]))}
    result = report["result"]
    assert float(summary["area_increase"]["constrained"]) == result["area_increase"]
    assert float(summary["chip_pfas"]["baseline"]) == result["baseline"]["chip_pfas"]["value"]
    assert float(summary["pfas_layer_ratio"]["constrained"]) == result["pfas_layer_ratio"]


def test_trend_csv_matches_json_numbers():
    args = ("trend", "--config", str(CONFIGS / "trend_nodes.json"))
    report = _json_report(*args, "--format", "json")
    proc = run_cli(*args, "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(proc.stdout)))
    by_node = {p["node"]: p for p in report["result"]["points"]}
    for row in rows:
        assert float(row["normalized"]) == by_node[row["node"]]["normalized"]


def test_compare_csv_matches_json_numbers():
    args = ("compare", "n7_duv", "n7_euv")
    report = _json_report(*args, "--format", "json")
    proc = run_cli(*args, "--format", "csv")
    rows = {r["metric"]: r for r in csv.DictReader(io.StringIO(proc.stdout))}
    assert float(rows["pfas_layers"]["ratio_a_over_b"]) == report["result"]["ratio_pfas"]
    assert float(rows["percent_reduction"]["ratio_a_over_b"]) == report["result"]["percent_reduction"]


def test_export_catalog_matches_golden(tmp_path):
    out = tmp_path / "catalog.json"
    proc = run_cli("export-catalog", "--out", str(out))
    assert proc.returncode == 0
    assert out.read_bytes() == (GOLDEN / "catalog_export.json").read_bytes()


def test_export_catalog_csv_has_nine_rows():
    proc = run_cli("export-catalog", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(proc.stdout)))
    assert len(rows) == 9
    assert rows[0]["id"] == "ArF_LE"


@pytest.mark.parametrize(
    "args, needle",
    [
        (("analyze", "--stack", "asap9", "--area", "1", "--yield", "1"), "asap9"),
        (("analyze", "--stack", "asap7", "--area", "1", "--yield", "1.2"), "yield"),
        (("analyze", "--stack", "asap7"), "design"),
        (("analyze", "--stack", "asap7", "--config", "missing.json"), "missing.json"),
        (("sweep", "--stack", "asap7", "--targets", "M12"), "M12"),
        (("trend",), "trend"),
    ],
)
def test_error_paths_exit_one_with_location(args, needle):
    proc = run_cli(*args)
    assert proc.returncode == 1
    assert needle in proc.stderr
    assert proc.stdout == ""


def test_usage_error_exits_two():
    proc = run_cli("frobnicate")
    assert proc.returncode == 2
    proc = run_cli("analyze", "--format", "yaml")
    assert proc.returncode == 2


def test_unwritable_out_path_exits_one():
    proc = run_cli("export-catalog", "--out", "/nonexistent_dir/x.json")
    assert proc.returncode == 1
    assert "cannot write report" in proc.stderr
    assert "Traceback" not in proc.stderr


def test_invalid_yield_flag_cites_range():
    proc = run_cli("analyze", "--stack", "asap7", "--area", "1", "--yield", "0")
    assert proc.returncode == 1
    assert "(0, 1]" in proc.stderr


def test_strict_mode_rejects_unknown_config_keys(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(
        '{"stack": "asap7", "design": {"area_cm2": 1, "yield": 1}, "extra": true}',
        encoding="utf-8",
    )
    lenient = run_cli("analyze", "--config", str(path), "--format", "json")
    assert lenient.returncode == 0
    assert "warning" in lenient.stderr
    strict = run_cli("analyze", "--config", str(path), "--strict", "--format", "json")
    assert strict.returncode == 1
    assert "extra" in strict.stderr


def test_invalid_stack_file_reports_violations(tmp_path):
    path = tmp_path / "stack.json"
    path.write_text(
        json.dumps(
            {
                "technology_node": "t",
                "layers": [{"name": "M1", "region": "BEOL", "metal_process": "ArFi_LE9"}],
            }
        ),
        encoding="utf-8",
    )
    proc = run_cli("analyze", "--stack", str(path), "--area", "1", "--yield", "1")
    assert proc.returncode == 1
    assert "M1" in proc.stderr
    assert "unknown-process" in proc.stderr
