import json

import pytest

from spherical_ic.catalog import datum_to_json, hecke_gl2
from spherical_ic.cli import main


def test_check_hecke_gl2(capsys):
    assert main(["check", "hecke-gl2", "--bound", "6", "--q", "4"]) == 0
    assert "all checks passed" in capsys.readouterr().out


def test_validate_broken_pair(tmp_path, capsys):
    obj = datum_to_json(hecke_gl2())
    obj["colors"][0]["valuation"] = [2, -1]
    obj["colors"][1]["valuation"] = [-1, 0]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(obj))
    assert main(["validate", str(path)]) == 1
    assert "pairing-not-one" in capsys.readouterr().out


def test_basic_table(capsys):
    assert main(["basic", "hecke-gl2-det", "--bound", "5", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows == [{"key": [-k, -k], "value": "1"} for k in range(6)]


def test_catalog_listing(capsys):
    assert main(["list"]) == 0
    names = capsys.readouterr().out.split()
    assert "nfold(2)" in names and "hecke-pgl2" in names


def test_missing_file(capsys):
    assert main(["validate", "nowhere/datum.json"]) == 1
    assert "nowhere/datum.json" in capsys.readouterr().err


def test_unknown_option_rejected():
    with pytest.raises(SystemExit):
        main(["check", "hecke-gl2", "--colour", "red"])


def test_computation_error_exit_code(capsys):
    assert main(["series", "hecke-gl2", "--kind", "frobenius"]) == 2


def test_crystal_exports_are_deterministic(tmp_path):
    a, b = tmp_path / "a.dot", tmp_path / "b.dot"
    assert main(["crystal", "nfold(2)", "--format", "dot", "--output", str(a)]) == 0
    assert main(["crystal", "nfold(2)", "--format", "dot", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    j = tmp_path / "c.json"
    assert main(["crystal", "hecke-gl2-det", "--output", str(j)]) == 0
    data = json.loads(j.read_text())
    assert len(data["provenance"]) == len(data["elements"])


def test_series_csv(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["series", "hecke-gl2", "--bound", "4", "--kind", "asymptotics", "--output", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "x0,x1,q_exponent,coefficient"


def test_plancherel_summary(capsys):
    assert main(["plancherel", "hecke-gl2", "--bound", "2", "--grid", "16"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["parseval"] == pytest.approx(1.09375)
    assert set(summary) >= {"quadrature", "parseval", "difference", "grid", "bound"}


def test_plancherel_warns_on_small_grid(capsys):
    assert main(["plancherel", "hecke-gl2", "--bound", "12", "--grid", "4"]) == 0
    assert "aliases" in capsys.readouterr().err


def test_round_trip_via_file(tmp_path, capsys):
    path = tmp_path / "d.json"
    path.write_text(json.dumps(datum_to_json(hecke_gl2())))
    assert main(["check", str(path), "--bound", "4"]) == 0
