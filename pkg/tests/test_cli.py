import json
import subprocess
import sys

import jsonschema
import pytest

from digitdrift.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def validate(schema_dir, command, text):
    doc = json.loads(text)
    schema = json.loads((schema_dir / f"{command}.schema.json").read_text())
    jsonschema.validate(doc, schema)
    return doc


def test_dist_json(capsys, schema_dir):
    code, out, _ = run(capsys, "dist", "5")
    assert code == 0
    doc = validate(schema_dir, "dist", out)
    rows = {r["d"]: r["value"] for r in doc["results"]["rows"]}
    assert rows[0] == {"num": "1", "exp": 3}


def test_dist_zero(capsys, schema_dir):
    code, out, _ = run(capsys, "dist", "0")
    doc = validate(schema_dir, "dist", out)
    assert doc["results"]["rows"] == [{"d": 0, "value": {"num": "1", "exp": 0}, "decimal": "1.0"}]
    assert doc["results"]["distribution"]["tail"] is False


def test_dist_even_matches_half(capsys):
    _, out10, _ = run(capsys, "dist", "10")
    _, out5, _ = run(capsys, "dist", "5")
    d10, d5 = json.loads(out10), json.loads(out5)
    for d in (d10, d5):
        d["parameters"].pop("a")
        d["results"]["distribution"].pop("a")
    assert d10 == d5


def test_dist_csv_expanded(capsys):
    code, out, _ = run(capsys, "dist", "1", "--format", "csv", "--min-d", "-2")
    lines = out.splitlines()
    assert lines[0] == "d,exact_num,exact_exp,decimal"
    assert lines[1:5] == ["1,1,1,0.5", "0,1,2,0.25", "-1,1,3,0.125", "-2,1,4,0.0625"]
    assert lines[-1].startswith("tail,D=1")


@pytest.mark.parametrize("bad", [["dist", "abc"], ["dist", "-1"], ["scan", "--family", "Q", "--n-max", "2"], []])
def test_usage_errors(capsys, bad):
    with pytest.raises(SystemExit) as exc:
        main(bad)
    assert exc.value.code == 2


def test_prefixes_text(capsys):
    code, out, _ = run(capsys, "prefixes", "5", "0")
    assert out.splitlines()[:3] == ["00110", "01110", "1010"]
    _, out, _ = run(capsys, "prefixes", "0", "0")
    assert out.splitlines()[0] == "(empty)"
    code, out, _ = run(capsys, "prefixes", "5", "3")
    assert code == 0 and out.splitlines()[0].startswith("# 0 words")


def test_prefixes_json(capsys, schema_dir):
    _, out, _ = run(capsys, "prefixes", "5", "0", "--format", "json")
    doc = validate(schema_dir, "prefixes", out)
    assert doc["results"]["words"] == ["00110", "01110", "1010"]
    assert doc["results"]["measure"] == {"num": "1", "exp": 3}


def test_variance_cmd(capsys, schema_dir):
    code, out, _ = run(capsys, "variance", "25")
    doc = validate(schema_dir, "variance", out)
    assert code == 0 and doc["results"]["proof_upper_ok"]
    code, out, _ = run(capsys, "variance", "0")
    validate(schema_dir, "variance", out)


def test_norm_cmd(capsys, schema_dir):
    code, out, _ = run(capsys, "norm", "341", "--points", "4096")
    doc = validate(schema_dir, "norm", out)
    assert code == 0 and doc["results"]["abs_diff"] <= 1e-8


def test_check_lemmas_cmd(capsys, schema_dir):
    code, out, _ = run(capsys, "check-lemmas", "--grid", "256", "--kmax", "8", "--gauss-grid", "1000")
    doc = validate(schema_dir, "check-lemmas", out)
    assert code == 0 and all(r["violations"] == 0 for r in doc["results"])


def test_scan_cmd(capsys, schema_dir, tmp_path):
    code, out, _ = run(capsys, "scan", "--family", "A", "--n-max", "4", "--format", "json")
    validate(schema_dir, "scan", out)
    target = tmp_path / "a.csv"
    code, out, _ = run(capsys, "scan", "--family", "A", "--n-max", "32", "--out", str(target))
    assert code == 0 and out == ""
    lines = target.read_bytes().decode().split("\n")
    assert lines[0] == "n,bitlen,l,neg2V_num,neg2V_exp,ratio_decimal"
    assert len(lines) == 35 and lines[-1] == ""


def test_verify_cmd(capsys, schema_dir):
    code, out, _ = run(capsys, "verify", "5", "--m", "14", "--min-d", "-10")
    doc = validate(schema_dir, "verify", out)
    assert code == 0 and doc["results"]["ok"]
    assert min(r["d"] for r in doc["results"]["rows"]) == -10
    code, _, err = run(capsys, "verify", "5", "--m", "3")
    assert code == 2


def test_tree_cmd(capsys):
    code, out, _ = run(capsys, "tree", "5", "--depth", "2")
    assert code == 0 and "  1 -> (3,-1)" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "digitdrift", "prefixes", "5", "0"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("00110\n")
