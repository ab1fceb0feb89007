from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from virblocks import cli, verify


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_rank_example(capsys):
    assert run(capsys, "rank", "--k", "2", "--genus", "0", "--labels", "2,2,2,2,2,2")[:2] == (0, "5\n")


def test_divisor_genus1_minus_two_lambda(capsys):
    code, out, _ = run(capsys, "divisor", "--k", "2", "--genus", "1", "--labels", "1")
    data = json.loads(out)
    assert code == 0 and data["sign"] == "coinvariant"
    # -2 lambda = -1/6 delta_irr
    assert data["canonical"]["delta_irr"] == "-1/6"


def test_conformal_block_negates(capsys):
    _, a, _ = run(capsys, "divisor", "--k", "3", "--labels", "2,2,3,3")
    _, b, _ = run(capsys, "divisor", "--k", "3", "--labels", "2,2,3,3", "--conformal-block")
    fa, fb = json.loads(a)["fingerprint"], json.loads(b)["fingerprint"]
    assert [Fraction(x) for x in fa] == [-Fraction(x) for x in fb]


def test_fusion_and_fnef(capsys):
    code, out, _ = run(capsys, "fusion", "--k", "4", "--labels", "2,3,5")
    assert code == 0 and json.loads(out)["product"] == {"1": 1, "2": 1, "3": 2, "4": 2}
    code, out, _ = run(capsys, "fnef", "--k", "2", "--labels", "2,2,2,2,2")
    rep = json.loads(out)
    assert code == 0 and rep["fnef"] and rep["fample"]
    assert rep["witness"]["value"] == "1/1"


def test_cap_violation_exit_2(capsys, monkeypatch):
    monkeypatch.delenv("VIRBLOCKS_CAPS", raising=False)
    code, _, err = run(capsys, "rank", "--k", "9", "--labels", "2,2,2")
    assert code == 2 and "cap violation" in err
    code, _, err = run(capsys, "rank", "--k", "2", "--genus", "3", "--labels", "2")
    assert code == 2 and "cap violation" in err


def test_caps_from_env(capsys, monkeypatch):
    monkeypatch.setenv("VIRBLOCKS_CAPS", "k=9")
    assert run(capsys, "rank", "--k", "9", "--labels", "2,2,2")[0] == 0
    monkeypatch.setenv("VIRBLOCKS_CAPS", "bogus")
    assert run(capsys, "rank", "--k", "2", "--labels", "2,2,2")[0] == 2
    assert cli.Caps.from_env("n=20,g=1") == cli.Caps(6, 20, 1)


def test_usage_errors(capsys):
    assert run(capsys, "rank", "--k", "2", "--labels", "x")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "rank", "--k", "2", "--labels", "2,2")[0] == 2
    assert run(capsys, "indsys", "--p", "-1", "--n", "5")[0] == 2


def test_verify_subcommands(capsys):
    code, out, _ = run(capsys, "verify", "virdeg", "--k-max", "4")
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(capsys, "verify", "basis", "--n", "4")
    assert code == 0 and json.loads(out)["ok"]
    assert run(capsys, "verify", "basis", "--n", "12")[0] == 2
    assert run(capsys, "verify", "genvireff", "--k", "8")[0] == 2


def test_genvireff_records_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.jsonl", tmp_path / "b.jsonl"]
    for p, jobs in zip(paths, ("1", "2")):
        code, out, _ = run(capsys, "verify", "genvireff", "--k", "4", "--jobs", jobs, "--records", str(p))
        assert code == 0 and json.loads(out)["all_certified"]
    a, b = (p.read_text() for p in paths)
    assert a == b
    lines = a.splitlines()
    assert json.loads(lines[0]) == {"schema": "v1"}
    recs = [json.loads(x) for x in lines[1:]]
    assert all(set(r) >= {"k", "labels", "method", "status", "t"} for r in recs)
    assert all(r["t"] is None or "/" in r["t"] for r in recs)
    assert any(r["t"] is not None for r in recs)


def test_stable_and_diff(capsys):
    code, out, _ = run(capsys, "stable", "--labels", "2,2,3,3")
    data = json.loads(out)
    assert code == 0 and data["critical_level"] == 4 and data["effectivity"] == "AllStandardNegative"
    code, out, _ = run(capsys, "diff", "--labels", "2,2,4,5,5", "--k", "5")
    assert code == 0 and json.loads(out)["fnef"]
    code, out, _ = run(capsys, "diff", "--labels", "5,5,5,6,6,6", "--k", "6")
    data = json.loads(out)
    assert code == 0 and not data["fnef"] and not data["hypotheses_hold"]


def test_indsys_command(capsys):
    code, out, _ = run(capsys, "indsys", "--p", "1/2", "--n", "6", "--axiom-n", "5")
    data = json.loads(out)
    assert code == 0 and data["positivity"]["fample"] and data["axioms"]["ok"]
    assert data["p"] == "1/2"


def test_report_all(capsys, tmp_path, monkeypatch):
    fast = {i: verify.CRITERIA[i] for i in (1, 2, 7, 11)}
    fast[6] = lambda: verify.criterion_6(entry_max=3, n_max=5)
    fast[5] = lambda k, jobs, keep_records: verify.criterion_5(k=3, jobs=1, keep_records=True)
    monkeypatch.setattr(verify, "CRITERIA", dict(sorted(fast.items())))
    code, out, err = run(capsys, "report", "all", "--out", str(tmp_path), "--jobs", "1")
    assert code == 0 and json.loads(out)["passed"] == 6
    assert err.count("PASS") == 6
    rows = [json.loads(x) for x in (tmp_path / "acceptance.jsonl").read_text().splitlines()]
    assert rows[0] == {"schema": "v1"} and len(rows) == 7
    assert (tmp_path / "stabilization.csv").read_text().startswith("# schema: v1\n")
    assert (tmp_path / "genvireff_k5.jsonl").exists()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "virblocks", "rank", "--k", "2", "--labels", "2,2,2,2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "2"


def test_serializer_rejects_floats():
    with pytest.raises(TypeError):
        cli.dumps({"x": object()})
    assert cli.dumps({"x": Fraction(3, 4)}) == '{"x": "3/4"}'
