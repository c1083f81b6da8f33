import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from domcomplex import cli
from domcomplex.morse import CycleReport

SCHEMA = json.loads(resources.files("domcomplex").joinpath("data/report.schema.json").read_text())


def run_json(capsys, *argv):
    code = cli.main([*argv, "--json"])
    out = capsys.readouterr().out
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert report["exit_code"] == code
    return code, report


def test_stats_examples(capsys):
    code, r = run_json(capsys, "stats", "--n", "6", "--k", "3")
    assert code == 0 and r["results"]["euler"] == 92
    code, r = run_json(capsys, "stats", "--n", "4", "--k", "2")
    assert r["results"]["f_vector"] == [6, 15, 16, 3] and r["results"]["dim"] == 3
    code, r = run_json(capsys, "stats", "--n", "5", "--k", "5")
    assert code == 0 and r["results"]["f_vector"] == [] and r["results"]["euler"] == 0


def test_stats_stream_matches_table(capsys):
    _, a = run_json(capsys, "stats", "--n", "6", "--k", "3", "--stream")
    _, b = run_json(capsys, "stats", "--n", "6", "--k", "3")
    assert a["results"]["f_vector"] == b["results"]["f_vector"]
    assert a["results"]["mode"] == "stream"


def test_budget_exit_code(capsys, monkeypatch):
    code, r = run_json(capsys, "stats", "--n", "6", "--k", "3", "--budget", "100")
    assert code == cli.EXIT_BUDGET and "budget" in r["results"]["error"]
    monkeypatch.setenv("DOMCOMPLEX_BUDGET", "100")
    code, _ = run_json(capsys, "stats", "--n", "6", "--k", "3")
    assert code == cli.EXIT_BUDGET
    code, _ = run_json(capsys, "stats", "--n", "6", "--k", "3", "--stream")
    assert code == 0


def test_morse_examples(capsys):
    code, r = run_json(capsys, "morse", "--n", "7")
    assert code == 0 and r["results"]["census"] == [1, 0, 160, 0]
    code, r = run_json(capsys, "morse", "--d52")
    assert code == 0 and r["results"]["census"] == [1, 0, 0, 0, 0, 4, 0]
    code, r = run_json(capsys, "morse", "--n", "5", "--check-restriction")
    assert code == 0
    assert {c["name"] for c in r["checks"]} >= {"restricts to n = 4", "no Q12 cycles outside"}


def test_morse_cycle_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "verify_acyclic",
                        lambda m, cells: CycleReport(False, [0b1, 0b11, 0b10, 0b11, 0b1]))
    code, r = run_json(capsys, "morse", "--n", "4")
    assert code == cli.EXIT_CYCLE
    assert "witness" in r["results"]


def test_morse_matching_file(tmp_path, capsys):
    path = tmp_path / "m.txt"
    assert cli.main(["morse", "--n", "4", "--matching-out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert len(lines) == 18 and lines[-1].startswith("2 ")


def test_homology_examples(capsys):
    _, r = run_json(capsys, "homology", "--n", "5", "--k", "3")
    assert r["results"]["betti"] == [1, 0, 19, 0]
    _, r = run_json(capsys, "homology", "--n", "5", "--k", "2")
    assert r["results"]["betti"][5] == 4
    code, r = run_json(capsys, "homology", "--n", "4", "--k", "2", "--mode", "int")
    assert code == 0 and r["results"]["torsion"] == {}


def test_reproduce_list(capsys):
    code, r = run_json(capsys, "reproduce", "--list")
    keys = [row["key"] for row in r["results"]["rows"]]
    assert code == 0 and "hasse-4" in keys and "euler-7-3" in keys
    assert r["checks"] == []
    heavy = {row["key"] for row in r["results"]["rows"] if row["heavy"]}
    assert heavy == {"euler-7-3", "betti-7-5-int"}


def test_export_import_round_trip(tmp_path, capsys):
    path = tmp_path / "d53.txt"
    code, r = run_json(capsys, "export", "--n", "5", "--k", "3", str(path))
    assert code == 0 and r["results"]["cells"] == 140
    code, r = run_json(capsys, "import", str(path), "--verify")
    assert code == 0 and all(c["passed"] for c in r["checks"])
    path.write_text(path.read_text().replace("domcomplex v1", "domcomplex v9"))
    code, r = run_json(capsys, "import", str(path))
    assert code == cli.EXIT_IO and "version" in r["results"]["error"]
    code, _ = run_json(capsys, "import", str(tmp_path / "missing.txt"))
    assert code == cli.EXIT_IO


def test_export_d42_size(tmp_path, capsys):
    path = tmp_path / "d42.txt"
    cli.main(["export", "--n", "4", "--k", "2", str(path)])
    assert len(path.read_text().splitlines()) == 1 + 40


def test_usage_errors(capsys):
    assert cli.main(["morse", "--n", "3", "--json"]) == cli.EXIT_USAGE
    assert cli.main(["stats", "--n", "4", "--k", "9", "--json"]) == cli.EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        cli.main(["stats", "--n", "4"])
    assert exc.value.code == 2


def test_json_is_deterministic(capsys):
    _, a = run_json(capsys, "morse", "--n", "6")
    _, b = run_json(capsys, "morse", "--n", "6")
    a.pop("wall_time")
    b.pop("wall_time")
    assert a == b


def test_human_and_json_agree(capsys):
    cli.main(["stats", "--n", "6", "--k", "3"])
    text = capsys.readouterr().out
    _, r = run_json(capsys, "stats", "--n", "6", "--k", "3")
    assert "f_vector: (15, 105, 455, 1185, 1647, 915, 180)" in text
    assert r["results"]["f_vector"] == [15, 105, 455, 1185, 1647, 915, 180]
    assert "euler: 92" in text


def test_out_flag(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert cli.main(["stats", "--n", "4", "--k", "2", "--json", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    jsonschema.validate(json.loads(out.read_text()), SCHEMA)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "domcomplex", "stats", "--n", "4", "--k", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "euler: 4" in proc.stdout
