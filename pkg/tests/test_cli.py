import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from rpcrank import fixtures
from rpcrank.cli import main

DATA = {name: str(fixtures.data_path(name)) for name in fixtures.bundled_tables()}


def read_ranking(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_trio_a_fit_ranks_c_b_a(capsys):
    code, out, _ = run(capsys, "fit", "--input", DATA["trio_a"], "--id-col", "id", "--alpha", "+,+")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "id,score,rank"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["C", "B", "A"]
    assert [ln.split(",")[2] for ln in lines[1:]] == ["1", "2", "3"]


def test_fit_writes_all_outputs(tmp_path, capsys):
    out = tmp_path / "rank.csv"
    rep = tmp_path / "rep.json"
    curve = tmp_path / "curve.csv"
    code, _, _ = run(capsys, "fit", "--input", DATA["scurve"], "--id-col", "id",
                     "--alpha", "+,+,-,-", "--output", str(out), "--report", str(rep),
                     "--emit-curve", str(curve), "--curve-samples", "31", "--max-iter", "40",
                     "--plot")
    assert code == 2  # 40 iterations are not enough; files are still written
    rows = read_ranking(out)
    assert len(rows) == 200
    assert sorted(int(r["rank"]) for r in rows) == list(range(1, 201))
    assert all(len(r["score"].split(".")[1]) == 6 for r in rows)
    report = json.loads(rep.read_text())
    assert report["parameter_size"] == 16 and report["converged"] is False
    assert report["iterations"] == 40
    assert (tmp_path / "curve.control.csv").exists()
    assert len(curve.read_text().splitlines()) == 32
    for suffix in ("curve", "trajectory", "scores"):
        assert (tmp_path / f"rank.{suffix}.png").exists()
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".")]


def test_emit_curve_round_trip(tmp_path, capsys):
    rep = tmp_path / "rep.json"
    curve = tmp_path / "curve.csv"
    code, _, _ = run(capsys, "emit-curve", "--input", DATA["countries"], "--id-col", "country",
                     "--alpha", "+,+,-,-", "--emit-curve", str(curve), "--report", str(rep),
                     "--endpoints", "fixed", "--clamp")
    assert code == 0
    report = json.loads(rep.read_text())
    lo, hi = np.array(report["col_min"]), np.array(report["col_max"])
    F = np.loadtxt(curve, delimiter=",", skiprows=1)[:, 1:]
    assert F.shape == (200, 4)
    original = lo + F * (hi - lo)
    assert np.max(np.abs((original - lo) / (hi - lo) - F)) <= 1e-12
    # control points in original units match the report
    cp = list(csv.reader((tmp_path / "curve.control.csv").open()))
    orig = np.array([[float(v) for v in row[2:]] for row in cp[1:] if row[1] == "original"]).T
    assert np.allclose(orig, report["P_original"], rtol=0, atol=0)


def test_alpha_length_mismatch(capsys):
    code, _, err = run(capsys, "fit", "--input", DATA["trio_a"], "--id-col", "id", "--alpha", "+,+,-")
    assert code == 1
    assert "3 entries" in err and "2 attributes" in err
    assert len(err.strip().splitlines()) == 1


@pytest.mark.parametrize("alpha", ["+,x", ""])
def test_bad_alpha_token(capsys, alpha):
    code, _, err = run(capsys, "fit", "--input", DATA["trio_a"], "--id-col", "id", "--alpha", alpha)
    assert code == 1 and "alpha" in err


def test_empty_and_missing_input(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    for sub in ("fit", "assess", "baseline"):
        extra = ["--method", "pca"] if sub == "baseline" else []
        code, _, err = run(capsys, sub, "--input", str(empty), "--alpha", "+", *extra)
        assert code == 1 and err.startswith("rpcrank: error:")
    code, _, _ = run(capsys, "fit", "--input", str(tmp_path / "nope.csv"), "--alpha", "+")
    assert code == 1


def test_constant_column_is_an_input_error(tmp_path, capsys):
    p = tmp_path / "c.csv"
    p.write_text("a,b\n1,5\n2,5\n")
    code, _, err = run(capsys, "fit", "--input", str(p), "--alpha", "+,+")
    assert code == 1 and "b" in err


def test_invalid_method_and_flags(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["baseline", "--input", DATA["trio_a"], "--alpha", "+,+", "--method", "borda"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["fit", "--input", DATA["trio_a"]])
    assert exc.value.code == 1
    code, _, _ = run(capsys, "fit", "--input", DATA["trio_a"], "--id-col", "id", "--alpha", "+,+",
                     "--tol", "0")
    assert code == 1


def test_rankagg_trio(capsys):
    for name in ("trio_a", "trio_b"):
        code, out, _ = run(capsys, "baseline", "--input", DATA[name], "--id-col", "id",
                           "--alpha", "+,+", "--method", "rankagg")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        kappa = {r["id"]: float(r["score"]) for r in rows}
        first = "A" if name == "trio_a" else "A'"
        assert kappa == {first: 1.5, "B": 1.5, "C": 3.0}
        assert rows[0]["id"] == "C" and rows[0]["rank"] == "1"


def test_rankagg_single_attribute(tmp_path, capsys):
    p = tmp_path / "one.csv"
    p.write_text("v\n0.3\n0.1\n0.7\n")
    code, out, _ = run(capsys, "baseline", "--input", str(p), "--alpha", "+", "--method", "rankagg")
    rows = {r["id"]: float(r["score"]) for r in csv.DictReader(out.splitlines())}
    assert rows == {"1": 2.0, "2": 1.0, "3": 3.0}


def test_pca_on_line_matches_attribute_order(capsys):
    code, out, _ = run(capsys, "baseline", "--input", DATA["line"], "--id-col", "id",
                       "--alpha", "+,+,+", "--method", "pca")
    assert code == 0
    ids = [r["id"] for r in csv.DictReader(out.splitlines())]
    X = np.loadtxt(DATA["line"], delimiter=",", skiprows=1)
    by_attr = [str(int(i)) for i in X[np.argsort(-X[:, 1]), 0]]
    assert ids == by_attr


def test_strict_monotonicity_exit_3(tmp_path, capsys):
    code, _, err = run(capsys, "fit", "--input", DATA["countries"], "--id-col", "country",
                       "--alpha", "+,+,-,-", "--strict", "--output", str(tmp_path / "r.csv"))
    assert code == 3 and "not strictly monotone" in err
    assert (tmp_path / "r.csv").exists()
    code, _, _ = run(capsys, "fit", "--input", DATA["countries"], "--id-col", "country",
                     "--alpha", "+,+,-,-", "--strict", "--endpoints", "fixed", "--clamp",
                     "--output", str(tmp_path / "r.csv"))
    assert code == 0


def test_reruns_are_byte_identical(tmp_path, capsys):
    def go(tag):
        d = tmp_path / tag
        d.mkdir()
        code, _, _ = run(capsys, "fit", "--input", DATA["scurve"], "--id-col", "id",
                         "--alpha", "+,+,-,-", "--output", str(d / "r.csv"), "--report",
                         str(d / "r.json"), "--emit-curve", str(d / "c.csv"), "--max-iter", "30",
                         "--seed", "4", "--plot")
        return {p.name: p.read_bytes() for p in d.iterdir()}

    first, second = go("one"), go("two")
    assert first.keys() == second.keys() and len(first) == 7
    for name in first:
        assert first[name] == second[name], name


def test_seed_flag_env_fallback(tmp_path, capsys, monkeypatch):
    rep = tmp_path / "r.json"
    args = ["fit", "--input", DATA["trio_b"], "--id-col", "id", "--alpha", "+,+", "--report", str(rep)]
    monkeypatch.setenv("RPCRANK_SEED", "7")
    run(capsys, *args)
    assert json.loads(rep.read_text())["config"]["seed"] == 7
    run(capsys, *args, "--seed", "2")
    assert json.loads(rep.read_text())["config"]["seed"] == 2
    monkeypatch.setenv("RPCRANK_SEED", "seven")
    code, _, err = run(capsys, *args)
    assert code == 1 and "RPCRANK_SEED" in err
    monkeypatch.delenv("RPCRANK_SEED")
    run(capsys, *args)
    assert json.loads(rep.read_text())["config"]["seed"] == 0


def test_restarts_flag_keeps_best(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, _, _ = run(capsys, "fit", "--input", DATA["trio_b"], "--id-col", "id", "--alpha", "+,+",
                     "--endpoints", "fixed", "--clamp", "--restarts", "5", "--output", str(out))
    assert code in (0, 2)
    assert len(read_ranking(out)) == 3


def test_assess_scurve(tmp_path, capsys):
    rep = tmp_path / "a.json"
    code, _, _ = run(capsys, "assess", "--input", DATA["scurve"], "--id-col", "id",
                     "--alpha", "+,+,-,-", "--trials", "1", "--report", str(rep))
    assert code == 0
    d = json.loads(rep.read_text())
    assert d["all_passed"] and d["parameter_size"]["value"] == 16


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rpcrank.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "rpcrank" in proc.stdout
