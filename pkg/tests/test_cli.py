import csv
import io
import json

import pytest

from planted.cli import run
from planted.graph import parse_edge_list


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sample_planted_and_detect(tmp_path, capsys):
    path = tmp_path / "g.txt"
    code, _, _ = _run(capsys, "sample", "--n", "12", "--p", "0.1", "--model", "tree", "--seed", "3",
                      "--out", str(path))
    assert code == 0
    g, planted = parse_edge_list(path.read_text())
    assert planted[0] == "tree" and len(planted[1]) == 11
    assert all(g.edges[e] for e in planted[1])

    code, out, _ = _run(capsys, "detect", "--in", str(path), "--model", "tree", "--p", "0.1")
    assert code == 0
    report = json.loads(out)
    assert set(report) == {"statistic", "threshold", "decision"}
    assert report["decision"] in ("null", "planted")


def test_sample_null_is_deterministic(capsys):
    _, a, _ = _run(capsys, "sample", "--n", "10", "--p", "1/3", "--null", "--seed", "5")
    _, b, _ = _run(capsys, "sample", "--n", "10", "--p", "1/3", "--null", "--seed", "5")
    assert a == b and a.startswith("n 10\n") and "planted" not in a


def test_detect_empty_graph(tmp_path, capsys):
    path = tmp_path / "empty.txt"
    path.write_text("n 4\n")
    code, out, _ = _run(capsys, "detect", "--in", str(path), "--p", "0")
    assert code == 0
    report = json.loads(out)
    assert report["statistic"] == pytest.approx(5 / 18) and report["threshold"] == pytest.approx(5 / 24)
    assert report["decision"] == "null"
    code, out, _ = _run(capsys, "detect", "--in", str(path), "--p", "0.2", "--detector", "edgecount")
    assert json.loads(out)["decision"] == "null"


def test_exact_json(capsys):
    code, out, _ = _run(capsys, "exact", "--n", "4", "--model", "matching", "--p", "1/10")
    assert code == 0
    report = json.loads(out)
    assert report["tv"]["exact"] == "179901/250000"
    assert report["chi2"]["exact"] == "105705/16384"


def test_collisions_modes(capsys):
    _, out, _ = _run(capsys, "collisions", "--n", "4", "--mode", "formula", "--exact")
    assert out == "k,probability\n0,2/3\n1,0/1\n2,1/3\n"
    _, out, _ = _run(capsys, "collisions", "--n", "6", "--mode", "brute", "--exact")
    assert out == "k,probability\n0,8/15\n1,2/5\n3,1/15\n"
    _, out, _ = _run(capsys, "collisions", "--n", "20", "--mode", "mc", "--pairs", "2000")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert abs(sum(float(r["probability"]) for r in rows) - 1) < 1e-12


def test_bounds_csv(capsys):
    code, out, _ = _run(capsys, "bounds", "--model", "matching", "--p-expr", "3*n^-0.3333333",
                        "--n-list", "256,1024")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["method"] for r in rows] == ["poisson-diagnostic"] * 2
    _, out, _ = _run(capsys, "bounds", "--model", "tree", "--p-expr", "n^-0.4", "--n-list", "200")
    assert "binomial-bound" in out


def test_risk_sweep_formats(tmp_path, capsys):
    args = ["risk-sweep", "--n-list", "32", "--p-expr", "n^-0.75", "--trials", "10", "--seed", "1"]
    _, out_csv, _ = _run(capsys, *args)
    _, out_json, _ = _run(capsys, *args, "--format", "json")
    header = out_csv.splitlines()[0]
    assert header == "n,p,model,detector,trials,false_alarm,miss,risk,half_width,seed"
    assert list(json.loads(out_json)[0]) == header.split(",")
    _, out, _ = _run(capsys, "risk-sweep", "--n-list", "32", "--p-expr", "")
    assert out == header + "\n"


def test_chi2_mc(capsys):
    code, out, _ = _run(capsys, "chi2-mc", "--n", "6", "--model", "tree", "--p", "0.25", "--pairs", "20000")
    assert code == 0
    report = json.loads(out)
    assert {"chi2", "stderr", "mgf_mean", "q2"} <= set(report)


@pytest.mark.parametrize("argv", [
    ["sample", "--n", "5", "--p", "0.1", "--model", "matching"],
    ["exact", "--n", "4", "--p", "0"],
    ["risk-sweep", "--n-list", "32", "--p-expr", "n^0.5"],
    ["detect", "--in", "/nonexistent/graph.txt", "--p", "0.1"],
    ["collisions", "--n", "6", "--model", "tree", "--mode", "formula"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == 2 and err.startswith("planted: error")


@pytest.mark.parametrize("argv", [
    ["exact", "--n", "8", "--p", "1/2"],
    ["collisions", "--n", "12", "--mode", "brute"],
])
def test_capacity_errors_exit_3(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == 3 and "capacity" in err


def test_main_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "planted", "exact", "--n", "9", "--model", "tree", "--p", "1/2"],
                          capture_output=True, text=True)
    assert proc.returncode == 3
