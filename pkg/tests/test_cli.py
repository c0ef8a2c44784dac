from __future__ import annotations

import json
from importlib import resources

import pytest

from threesq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def golden_path() -> str:
    return str(resources.files("threesq").joinpath("data/golden_rows.json"))


def test_solve_csv(capsys):
    code, out, _ = run(capsys, "solve", "--p", "79", "--format", "csv")
    assert code == 0
    assert out == "p,b,x,y,n\n79,1,63,29,3\n"


def test_solve_p5_empty(capsys):
    code, out, _ = run(capsys, "solve", "--p", "5", "--format", "csv")
    assert code == 0 and out == "p,b,x,y,n\n"


def test_solve_rejects_composite(capsys):
    code, _, err = run(capsys, "solve", "--p", "6")
    assert code == 2 and "not prime" in err


def test_solve_json_and_md(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", "--p", "7")
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == 1 and doc["kind"] == "solve"
    assert doc["report"]["solutions"] == [{"p": 7, "b": 1, "x": 3, "y": 5, "n": 3}]
    assert doc["report"]["config"]["b_max_search"] == 64
    code, out, _ = run(capsys, "solve", "--p", "7", "--format", "md")
    assert "| 7 | 1 | 3 | 5 | 3 |" in out
    path = tmp_path / "solve.json"
    assert main(["solve", "--p", "7", "--output", str(path)]) == 0
    assert main(["verify", str(path)]) == 0


def test_bmax_echoed(capsys):
    _, out, _ = run(capsys, "solve", "--p", "79", "--bmax-search", "12")
    assert json.loads(out)["report"]["config"]["b_max_search"] == 12


def test_missing_defective_data(capsys, tmp_path):
    code, _, err = run(capsys, "solve", "--p", "7", "--defective-data", str(tmp_path / "none.txt"))
    assert code == 2 and "defective tables unavailable" in err


def test_scan_and_certificates(capsys, tmp_path):
    report = tmp_path / "scan.json"
    certs = tmp_path / "certs.json"
    code, _, _ = run(capsys, "scan", "--pmax", "60", "--output", str(report), "--certificates", str(certs))
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["kind"] == "scan" and doc["unresolved"] == []
    assert [(r["p"], r["n"]) for r in doc["table"]] == [(2, 3), (7, 3), (11, 5)]
    assert "runtime" in doc
    assert run(capsys, "verify", str(report))[0] == 0
    assert run(capsys, "verify", str(certs))[0] == 0
    code, out, _ = run(capsys, "scan", "--pmax", "60", "--format", "csv")
    assert out.splitlines()[0] == "p,b,x,y,n" and "\r" not in out


def test_scan_unwritable_output(capsys, tmp_path):
    code, _, err = run(capsys, "scan", "--pmax", "20", "--output", str(tmp_path / "no" / "such" / "x.json"))
    assert code == 2 and "cannot write" in err


def test_verify_golden(capsys):
    code, out, _ = run(capsys, "verify", golden_path())
    assert code == 0 and "checked 9 solutions" in out


def test_verify_tampered_row(capsys, tmp_path):
    doc = json.loads(open(golden_path()).read())
    doc["solutions"][2]["y"] += 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "verify", str(path))
    assert code == 1 and "223,1,345,78,3" in err


def test_verify_malformed(capsys, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert run(capsys, "verify", str(empty))[0] == 2
    broken = tmp_path / "broken.json"
    broken.write_text('{\n  "schema_version": 1,\n  "kind": \n}')
    code, _, err = run(capsys, "verify", str(broken))
    assert code == 2 and "line 4" in err
    future = tmp_path / "future.json"
    future.write_text('{"schema_version": 99, "kind": "solutions", "solutions": []}')
    code, _, err = run(capsys, "verify", str(future))
    assert code == 2 and "schema_version" in err
    missing = tmp_path / "missing.json"
    missing.write_text('{"schema_version": 1, "kind": "solutions", "solutions": [{"p": 7}]}')
    code, _, err = run(capsys, "verify", str(missing))
    assert code == 2 and "solutions[0]" in err
    assert run(capsys, "verify", str(tmp_path / "absent.json"))[0] == 2


def test_verify_csv(capsys, tmp_path):
    good = tmp_path / "t.csv"
    good.write_text("p,b,x,y,n\n7,1,3,5,3\n")
    assert run(capsys, "verify", str(good))[0] == 0
    bad = tmp_path / "u.csv"
    bad.write_text("p,b,x,y,n\n7,1,3,5\n")
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 2 and "line 2" in err


def test_verify_tampered_certificate(capsys, tmp_path):
    doc = {
        "schema_version": 1,
        "kind": "certificates",
        "certificates": [{"kind": "BasicModulus", "p": 7, "n": 3, "signs": [1], "s": 7}],
    }
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "verify", str(path))
    assert code == 1 and "does not replay" in err


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--ymax", "5", "--n", "3")
    assert code == 0 and "7,1,3,5,3,7" in out
    _, out, _ = run(capsys, "oracle", "--ymax", "10", "--n", "4", "--d-filter", "any")
    assert out == "p,b,x,y,n,d\n"
    _, out, _ = run(capsys, "oracle", "--ymax", "30", "--n", "3,5", "--format", "json")
    hits = json.loads(out)["hits"]
    assert {(h["p"], h["n"]) for h in hits} == {(2, 3), (7, 3), (11, 5), (79, 3), (3109, 5)}


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["scan"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["oracle", "--ymax", "5", "--n", "x"])
    assert exc.value.code == 2
