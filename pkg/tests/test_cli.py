import csv
import io
import json
from pathlib import Path

import pytest

from sonc.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_circuits_json(capsys):
    code, out, _ = run(capsys, "--json", "circuits", DATA / "motzkin.json")
    assert code == 0
    data = json.loads(out)
    assert data["circuits"][0]["vector"] == [1, 1, 1, -3]


def test_edges_only(capsys):
    code, out, _ = run(capsys, "circuits", DATA / "simplex.json", "--edges-only", "--json")
    assert code == 0
    assert len(json.loads(out)["circuits"]) == 4


def test_subdivide_and_tropical(capsys):
    code, out, _ = run(capsys, "subdivide", DATA / "quartic.json", "--weights", "0,0,1,0,0", "--json")
    assert code == 0
    assert json.loads(out)["cells"] == [[0, 1, 2], [2, 3, 4]]
    code, out, _ = run(capsys, "tropical", DATA / "quartic.json", "--weights", "0,0,1,0,0", "--json")
    assert code == 0


def test_census_counts_ten_complexes(capsys):
    code, out, _ = run(capsys, "census", DATA / "simplex.json", "--sonc-complexes")
    assert code == 0
    assert out.strip().splitlines()[-1].strip() == "10"


def test_hk_sample_and_relation_error(capsys):
    code, out, _ = run(capsys, "hk-sample", "D0", "--t", "1,1,1,1", "--z", "[1,1]", "--json")
    assert code == 0
    assert json.loads(out)["sample"]["a"] == ["3", "-2", "3", "-7", "-1", "4"]
    code, _, err = run(capsys, "hk-sample", "D1", "--t", "1,1", "--z", "[[1,1],[2,1]]")
    assert code == 1 and "error" in err


def test_verify_disc_is_deterministic(capsys):
    args = ("verify-disc", "D1", "--poly", "D1", "--samples", "20", "--seed", "3", "--json")
    code, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert code == 0 and first == second
    data = json.loads(first)
    assert data["nonzero"] == []


def test_boundary_sample_grid(capsys, tmp_path):
    grid = tmp_path / "slice.csv"
    code, out, _ = run(
        capsys, "boundary-sample", DATA / "simplex.json", "--emit-grid", grid, "--poly", "D0", "--grid-steps", "3", "--json"
    )
    assert code == 0
    rows = list(csv.reader(io.StringIO(grid.read_text())))
    assert len(rows) == 1 + 9 and len(rows[0]) == 8
    dec = json.loads(out)
    assert "decomposition" in dec


def test_strata_and_quartic(capsys):
    code, out, _ = run(capsys, "strata", "--d", "4", "--slice", "--json")
    assert code == 0
    assert {x["label"] for x in json.loads(out)["labels"]} == {"{1,2,3}", "{1|3}", "{1,3}"}
    code, out, _ = run(capsys, "quartic-test", "--w1", "1/2", "--w3", "1/2")
    assert code == 0 and "interior" in out
    code, out, _ = run(capsys, "strata", "--d", "4", "--poset", "--dot")
    assert code == 0 and "digraph" in out


def test_check_equality(capsys):
    code, out, _ = run(capsys, "check-equality", DATA / "equality.json", "--json")
    assert code == 0
    assert json.loads(out)["verdict"] == "equal"


def test_eval_and_minimize(capsys):
    code, out, _ = run(capsys, "eval", DATA / "motzkin_f.json", "--at", "2,1")
    assert code == 0 and out.strip().endswith("9")
    code, out, _ = run(capsys, "minimize", DATA / "motzkin_f.json", "--json")
    assert code == 0
    assert abs(json.loads(out)["min_found"]) < 1e-9


def test_csv_output(capsys):
    code, out, _ = run(capsys, "--csv", "circuits", DATA / "motzkin.json")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "support" and len(rows) == 2


def test_out_file(capsys, tmp_path):
    target = tmp_path / "c.json"
    code, out, _ = run(capsys, "circuits", DATA / "motzkin.json", "--json", "--out", target)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["circuits"]


def test_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "circuits", tmp_path / "missing.json")
    assert code == 2 and "input error" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "circuits", bad)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["circuits", str(DATA / "motzkin.json"), "--bogus"])
    assert exc.value.code == 2
