import json
import subprocess
import sys
import textwrap

import pytest

from totpos.automorph import random_spec, tabulate
from totpos.cli import main
from totpos.serialize import spec_to_json, table_to_json


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def mat(rows):
    return {"rows": len(rows), "cols": len(rows[0]), "entries": rows}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_identity(tmp_path, capsys):
    path = write(tmp_path, "id2.json", mat([[1, 0], [0, 1]]))
    code, out, _ = run(capsys, "classify", "--input", path)
    assert code == 0 and out.splitlines()[0] == "ITN_not_TP"
    code, out, _ = run(capsys, "classify", "--input", path, "--json")
    assert json.loads(out)["witness"] == {"alpha": [1], "beta": [2], "value": "0"}


def test_classify_exit_codes(tmp_path, capsys):
    code, out, _ = run(capsys, "classify", "--input", write(tmp_path, "a.json", mat([[1, 2], [3, 4]])))
    assert code == 1 and out.startswith("NOT_TN")
    code, out, _ = run(capsys, "classify", "--input", write(tmp_path, "b.json", mat([[1, 1], [1, 1]])))
    assert code == 0 and out.startswith("TN_singular")
    csv = write(tmp_path, "c.csv", "2,1\n1,1\n")
    code, out, _ = run(capsys, "classify", "--format", "csv", "--input", csv)
    assert code == 0 and out.strip() == "TP"
    code, out, _ = run(capsys, "classify", "--method", "fekete", "--format", "csv", "--input", csv)
    assert code == 0 and out.strip() == "True"


def test_factorize_not_itn(tmp_path, capsys):
    code, out, err = run(capsys, "factorize", "--input", write(tmp_path, "n.json", mat([[1, 1], [1, 1]])))
    assert code == 1 and "not ITN" in err and out == ""


def test_factorize_synthesize_roundtrip(tmp_path, capsys):
    A = mat([[2, 1], [1, 1]])
    code, out, _ = run(capsys, "factorize", "--input", write(tmp_path, "a.json", A))
    assert code == 0
    f = json.loads(out)
    assert f["d"] == ["2", "1/2"]
    code, out, _ = run(capsys, "synthesize", "--input", write(tmp_path, "f.json", f))
    assert code == 0 and json.loads(out)["entries"] == [[2, 1], [1, 1]]
    code, out, _ = run(capsys, "ldu", "--input", write(tmp_path, "a.json", A))
    assert json.loads(out)["L"]["entries"] == [[1, 0], ["1/2", 1]]


def test_malformed_json_reports_position(tmp_path, capsys):
    path = write(tmp_path, "bad.json", '{"rows": 2, "cols": 2, "entries": [[1, 0], [0 1]]}')
    code, _, err = run(capsys, "classify", "--input", path)
    assert code == 2 and "line 1 column" in err and "char" in err


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "nosuch")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "classify", "--input", str(tmp_path / "missing.json"))[0] == 2
    path = write(tmp_path, "r.json", mat([[1, 2]]))
    assert run(capsys, "classify", "--input", path)[0] == 2
    assert run(capsys, "check-all", "--dims", "2,13")[0] == 2
    assert run(capsys, "check-all", "--trials", "0")[0] == 2


def test_apply_and_verify(tmp_path, capsys):
    spec = {"n": 3, "orientation": "antidiagonal", "r": [1, 2, "5/3"], "mu_exponent": "2/3"}
    sp = write(tmp_path, "s.json", spec)
    code, out, _ = run(capsys, "verify-aut", "--spec", sp, "--trials", "100", "--dim", "3", "--seed", "7")
    assert code == 0 and out.startswith("PASS")
    assert run(capsys, "verify-aut", "--spec", sp, "--dim", "2")[0] == 2
    A = write(tmp_path, "a.json", mat([[1, 1, 0], [0, 1, 0], [0, 0, 1]]))
    code, out, _ = run(capsys, "apply-aut", "--spec", sp, "--input", A)
    assert code == 0 and json.loads(out)["body"]["entries"][2][1] == "5/6"
    bad = write(tmp_path, "b.json", mat([[1, 2, 0], [3, 4, 0], [0, 0, 1]]))
    assert run(capsys, "apply-aut", "--spec", sp, "--input", bad)[0] == 1


def test_recover(tmp_path, capsys):
    import random

    s = random_spec(3, random.Random(3))
    table = table_to_json(tabulate(s))
    code, out, _ = run(capsys, "recover-aut", "--table", write(tmp_path, "t.json", table))
    assert code == 0 and json.loads(out) == spec_to_json(s.normalized())
    table["entries"][0]["image"]["scale"] = {"rational": "2"}
    code, _, err = run(capsys, "recover-aut", "--table", write(tmp_path, "t2.json", table))
    assert code == 1 and "entry 0" in err


def test_centralizer(tmp_path, capsys):
    D = write(tmp_path, "d.json", mat([[2, 0, 0], [0, 2, 0], [0, 0, 3]]))
    code, out, _ = run(capsys, "centralizer", "--diag", D)
    assert code == 0 and json.loads(out) == {"composition": [2, 1]}
    X = write(tmp_path, "x.json", mat([[1, 1, 0], [1, 2, 0], [0, 0, 3]]))
    code, out, _ = run(capsys, "centralizer", "--diag", D, "--test", X, "--json")
    assert code == 0 and json.loads(out)["member"] is True
    Y = write(tmp_path, "y.json", mat([[1, 1, 1], [1, 2, 0], [0, 0, 3]]))
    assert run(capsys, "centralizer", "--diag", D, "--test", Y)[0] == 1


def test_perturb_and_random(tmp_path, capsys, monkeypatch):
    code, out, _ = run(capsys, "perturb", "--input", write(tmp_path, "i.json", mat([[1, 0], [0, 1]])), "--eps", "1/10")
    assert code == 0 and json.loads(out)["entries"][0][1] != 0
    code, out, _ = run(capsys, "random", "--dim", "3", "--seed", "5", "--count", "2")
    first = json.loads(out)
    assert len(first) == 2
    monkeypatch.setenv("TOTPOS_SEED", "5")
    code, out, _ = run(capsys, "random", "--dim", "3", "--seed", "999", "--count", "2")
    assert json.loads(out) == first


def test_extend_with_oracle(tmp_path, capsys):
    script = write(tmp_path, "o.py", textwrap.dedent("""
        import json, sys
        for line in sys.stdin:
            m = json.loads(line)["matrix"]
            print(json.dumps({"matrix": m}), flush=True)
    """))
    ref = write(tmp_path, "r.json", mat([[2, 1], [1, 1]]))
    X = write(tmp_path, "x.json", mat([[1, 3], [0, 1]]))
    cmd = f"{sys.executable} {script}"
    code, out, _ = run(capsys, "extend", "--oracle", cmd, "--reference", ref, "--input", X)
    assert code == 0 and json.loads(out)["body"]["entries"] == [[1, 3], [0, 1]]


def test_check_all_cli(capsys):
    code, out, _ = run(capsys, "check-all", "--dims", "2,3", "--trials", "1")
    assert code == 0 and out.strip().endswith("properties passed")
    code, out, _ = run(capsys, "check-all", "--dims", "2,3", "--trials", "2", "--mutant", "transpose", "--json")
    assert code == 1
    reports = {r["id"]: r for r in json.loads(out)}
    assert not reports["aut-homomorphism"]["passed"]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "totpos.cli", "random", "--dim", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["rows"] == 2
