import csv
import json
import math
from fractions import Fraction
import subprocess
import sys

import pytest

from mothergraph.cli import EXIT_CAP, EXIT_INFINITE, EXIT_USAGE, main, parse_ranges


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_ranges():
    assert parse_ranges("5", 8) == {5}
    assert parse_ranges("0:3,6:", 8) == {0, 1, 2, 6, 7}
    with pytest.raises(ValueError):
        parse_ranges("9", 8)


def test_build(capsys, tmp_path):
    code, out, _ = run(capsys, "build", "--d", "1", "--m", "2", "--n", "3")
    g = json.loads(out)
    assert code == 0 and len(g["vertices"]) == 8 and len(g["edges"]) == 8
    code, out, _ = run(capsys, "build", "--d", "0", "--m", "2", "--n", "4")
    g = json.loads(out)
    assert len(g["vertices"]) == 16 and len(g["edges"]) == 15
    dot = tmp_path / "g.dot"
    code, out, _ = run(capsys, "build", "--d", "1", "--m", "3", "--n", "2", "--out", str(tmp_path / "g.json"),
                       "--dot", str(dot))
    g = json.loads((tmp_path / "g.json").read_text())
    assert max(int(e["conductance"].split("/")[0]) for e in g["edges"]) > 1
    assert dot.read_text().startswith("graph")


def test_build_full_and_cap(capsys):
    code, out, _ = run(capsys, "build", "--d", "1", "--m", "3", "--n", "2", "--full")
    assert len(json.loads(out)["vertices"]) == 9
    code, _, err = run(capsys, "build", "--d", "1", "--m", "4", "--n", "6", "--full", "--cap", "100")
    assert code == EXIT_CAP and "cap" in err


def test_resist(capsys, tmp_path):
    code, out, _ = run(capsys, "resist", "--d", "1", "--m", "2", "--n", "3", "--A", "0", "--B", "7")
    assert code == 0 and json.loads(out) == {"res": "19/4"}
    code, out, _ = run(capsys, "resist", "--d", "0", "--n", "6", "--A", "0", "--B", "63")
    assert json.loads(out) == {"res": "63/1"}
    code, out, _ = run(capsys, "resist", "--d", "0", "--n", "6", "--A", "0", "--B", "63", "--mode", "float")
    payload = json.loads(out)
    assert payload["res"] == pytest.approx(63) and payload["residual"] <= 1e-10
    path = tmp_path / "g.json"
    run(capsys, "build", "--d", "1", "--n", "3", "--out", str(path))
    code, out, _ = run(capsys, "resist", "--graph", str(path), "--A", "0", "--B", "7")
    assert json.loads(out) == {"res": "19/4"}


def test_resist_disconnected(capsys, tmp_path):
    graph = {"vertices": [{"word": "a"}, {"word": "b"}, {"word": "c"}],
             "edges": [{"u": "a", "v": "b", "conductance": "1/1"}]}
    path = tmp_path / "split.json"
    path.write_text(json.dumps(graph))
    code, out, _ = run(capsys, "resist", "--graph", str(path), "--A", "0", "--B", "2")
    assert code == EXIT_INFINITE and json.loads(out) == {"res": "inf"}
    code, _, _ = run(capsys, "resist", "--d", "1", "--n", "3", "--A", "0:3", "--B", "2:5")
    assert code == EXIT_USAGE


def test_bound(capsys, tmp_path):
    js, table = tmp_path / "b.json", tmp_path / "b.csv"
    code, out, _ = run(capsys, "bound", "--d", "1", "--m", "2", "--s", "1", "--t", "2", "--n", "3",
                       "--certify", "--out", str(js), "--csv", str(table))
    assert code == 0 and out.startswith("bound=2/5 res=5/3")
    cert = json.loads(js.read_text())
    assert cert["bound"] == "2/5" and len(cert["meta"]["certificate"]) == 2
    rows = list(csv.DictReader(table.open()))
    assert [r["conductance"] for r in rows] == ["5/1", "5/1"]
    assert rows[1]["asymptotic"] == "4.0"
    code, out, _ = run(capsys, "bound", "--d", "0", "--s", "1", "--t", "3", "--n", "5")
    assert out.startswith("bound=7/1 res=7/1")
    code, out, _ = run(capsys, "bound", "--d", "2", "--s", "1", "--t", "8", "--n", "10")
    fields = dict(part.split("=") for part in out.split())
    # inside the d = 2 bracket measured by the acceptance sweep
    assert code == 0 and 0.4 < float(Fraction(fields["bound"])) / math.log(8) < 0.6
    code, _, _ = run(capsys, "bound", "--d", "1", "--s", "3", "--t", "2", "--n", "4")
    assert code == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "lemma", "--d", "1", "--n", "8"],
        ["verify", "action", "--d", "2", "--m", "3", "--n", "4"],
        ["verify", "weights", "--d", "2", "--m", "3,2,4", "--n", "5"],
        ["verify", "wnw", "--graphs", "random", "--trials", "200"],
    ],
)
def test_verify(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and "FAIL" not in out


def test_scaling(capsys):
    code, out, _ = run(capsys, "scaling", "--d", "1", "--tmax", "6")
    rows = list(csv.DictReader(out.splitlines()))
    assert [int(r["t"]) for r in rows] == [2, 3, 4, 5, 6]
    assert all(Fraction(r["bound"]) <= Fraction(r["res"]) for r in rows)
    code, out, _ = run(capsys, "scaling", "--d", "0", "--tmax", "5")
    for r in csv.DictReader(out.splitlines()):
        assert float(Fraction(r["bound"])) == pytest.approx(float(r["res"]), rel=1e-9)
    code, out, _ = run(capsys, "scaling", "--d", "2", "--s", "0", "--tmax", "5")
    rows = list(csv.DictReader(out.splitlines()))
    assert [int(r["t"]) for r in rows] == [2, 3, 4, 5] and all(r["increment"] for r in rows)


def test_scaling_workers_deterministic(capsys):
    _, serial, _ = run(capsys, "scaling", "--d", "2", "--tmax", "5")
    _, pooled, _ = run(capsys, "scaling", "--d", "2", "--tmax", "5", "--workers", "2")
    assert serial == pooled


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mothergraph", "resist", "--A", "0", "--B", "7"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout) == {"res": "19/4"}
