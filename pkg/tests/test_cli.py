import json

import pytest

from gersten_lab import cli
from gersten_lab.serialize import dumps

STD11 = {"ring": "Z@5", "ranks": {"1": 2, "0": 2},
         "d": {"1": {"rows": 2, "cols": 2, "entries": ["5", "0", "0", "1"]}}}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj), encoding="utf-8")
    return str(p)


def test_classify_standard(tmp_path, capsys):
    code, out, _ = run(capsys, "classify", write(tmp_path, "x.json", STD11))
    assert code == 0
    rep = json.loads(out)
    assert (rep["n"], rep["m"]) == (1, 1) and rep["witness"]["identity"] is True


def test_classify_snf_example(tmp_path, capsys):
    x = {"ranks": {"1": 2, "0": 2}, "d": {"1": {"rows": 2, "cols": 2, "entries": ["1", "1", "5", "1"]}}}
    code, out, _ = run(capsys, "classify", "--ring", "Z@5", write(tmp_path, "x.json", x))
    rep = json.loads(out)
    assert code == 0 and (rep["n"], rep["m"]) == (0, 2) and rep["witness"]["verified"]


def test_classify_not_in_c(tmp_path, capsys):
    x = {"ring": "Z@5", "ranks": {"1": 1, "0": 1}, "d": {"1": {"rows": 1, "cols": 1, "entries": ["25"]}}}
    code, out, _ = run(capsys, "classify", write(tmp_path, "x.json", x))
    assert code == 1 and json.loads(out)["error"] == "NotInC"


def test_classify_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{", encoding="utf-8")
    assert run(capsys, "classify", str(p))[0] == 2
    assert run(capsys, "classify", str(tmp_path / "missing.json"))[0] == 2


def test_k0(capsys):
    code, out, _ = run(capsys, "k0", "5")
    rep = json.loads(out)
    assert code == 0 and rep["class"] == 0 and rep["additive"]
    assert all(rep["ses"]["certificate"].values())
    code, out, _ = run(capsys, "k0", "25")
    assert code == 0 and json.loads(out)["class"] == 0
    code, out, _ = run(capsys, "k0", "3")
    assert code == 1 and json.loads(out)["error"] == "UnitElement"
    code, out, _ = run(capsys, "k0", "--ring", "Q[t]@t", "t^2+t^3")
    assert code == 0 and json.loads(out)["class"] == 0


def test_verify_exit_codes(capsys):
    assert run(capsys, "verify", "--count", "0")[0] == 2
    assert run(capsys, "verify", "--ring", "Z@6")[0] == 2
    assert run(capsys, "verify", "--sabotage", "bogus")[0] == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["verify", "--format", "xml"])
    assert e.value.code == 2
    code, out, _ = run(capsys, "verify", "--count", "2", "--only", "algebra.valuation,k0.telescope")
    assert code == 0 and json.loads(out)["passed"]


def test_verify_list(capsys):
    code, out, _ = run(capsys, "verify", "--list")
    assert code == 0 and "category.triangulation" in out


def test_verify_deterministic_and_seed_env(capsys, monkeypatch):
    args = ["verify", "--count", "3", "--only", "category.composition"]
    a = run(capsys, *args)[1]
    assert run(capsys, *args)[1] == a
    monkeypatch.setenv("GERSTEN_LAB_SEED", "42")
    assert run(capsys, *args)[1] == a
    monkeypatch.setenv("GERSTEN_LAB_SEED", "43")
    assert json.loads(run(capsys, *args)[1])["config"]["seed"] == 43
    assert json.loads(run(capsys, *args, "--seed", "44")[1])["config"]["seed"] == 44


def test_sabotage_and_replay(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, _, _ = run(capsys, "verify", "--count", "10", "--sabotage=ut-sign",
                     "--only", "category.triangulation", "-o", str(out))
    assert code == 1
    rep = json.loads(out.read_text(encoding="utf-8"))
    cx = rep["checks"][0]["counterexample"]
    assert cx["reason"] and cx["input"]
    code, text, _ = run(capsys, "replay", str(out))
    assert code == 1 and json.loads(text)["replayed"][0]["reproduced"]


def test_markdown_format(capsys):
    code, out, _ = run(capsys, "verify", "--count", "1", "--only", "k0.telescope", "--format", "markdown")
    assert code == 0 and out.startswith("# Verification report")


def test_report_bytes_are_canonical(capsys):
    code, out, _ = run(capsys, "verify", "--count", "1", "--only", "k0.telescope")
    assert out == dumps(json.loads(out))
