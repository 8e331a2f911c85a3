import csv
import json
import math
from pathlib import Path

import pytest

from lpcompact import cli

FIX = Path(cli.__file__).parent / "fixtures"
BUDGET = ["--restarts", "4", "--samples", "32", "--iters", "100"]


def run(tmp_path, *args):
    out = tmp_path / "out"
    code = cli.main([*args, "--out", str(out), *BUDGET])
    return code, out


def load(path):
    return json.loads(path.read_text())["result"]


def test_analyze_harmonic_basis(tmp_path, capsys):
    code, out = run(tmp_path, "analyze-sequence", "--input", str(FIX / "seq-harmonic-basis.json"))
    assert code == 0
    res = load(out / "report.json")
    assert res["in_lpc"] and not res["in_lp"]
    assert res["triple_norm"] == pytest.approx(1, abs=1e-9)
    with open(out / "tails.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["m", "shadow_sup_tail", "strong_partial_norm"] and len(rows) == 102
    assert "in_lpc=True" in capsys.readouterr().out


def test_analyze_p1_adds_decay_and_pinf_writes_nets(tmp_path):
    code, out = run(tmp_path, "analyze-sequence", "--input", str(FIX / "seq-unit-basis.json"), "--p", "1")
    assert code == 0
    res = load(out / "report.json")
    assert res["domain"] == "c0" and res["c0_decay"]["decays"] is False
    code, out = run(tmp_path, "analyze-sequence", "--input", str(FIX / "seq-unit-basis.json"), "--p", "inf")
    assert code == 0 and (out / "nets.csv").exists()


def test_numrange_shift_pair(tmp_path):
    code, out = run(tmp_path, "numrange", "--input", str(FIX / "tuple-shift-pair.json"), "--count", "64")
    assert code == 0
    res = load(out / "radius.json")
    assert res["omega"] == pytest.approx(1 / math.sqrt(2), abs=1e-9)
    assert res["tuple_norm"] == pytest.approx(1, abs=1e-9)
    assert res["sandwich"]["holds"] and res["range_sample"]["below_omega"]
    with open(out / "range.csv") as fh:
        assert sum(1 for _ in fh) == 65


def test_cfun_exit_codes(tmp_path):
    code, out = run(tmp_path, "cfun", "--input", str(FIX / "cfun-geometric.json"))
    assert code == 0
    res = load(out / "cfun.json")
    assert res["type"] == "compact-type" and res["all_bounds_hold"]
    code, out = run(tmp_path, "cfun", "--input", str(FIX / "cfun-bump-train.json"))
    assert code == 4
    assert load(out / "cfun.json")["premise_failures"]


def test_bad_json_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"space": {"space": "cn", "n": 2},\n "p": 2, "terms": [ }')
    code, _ = run(tmp_path, "analyze-sequence", "--input", str(bad))
    assert code == 2
    assert f"{bad}:2:" in capsys.readouterr().err


def test_dimension_mismatch_exit_3(tmp_path):
    data = json.loads((FIX / "tuple-nilpotent.json").read_text())
    data["d"] = 3
    path = tmp_path / "t.json"
    path.write_text(json.dumps(data))
    code, _ = run(tmp_path, "numrange", "--input", str(path))
    assert code == 3


def test_bad_flags_exit_2(tmp_path):
    code, _ = run(tmp_path, "numrange", "--input", str(FIX / "tuple-nilpotent.json"), "--p", "banana")
    assert code == 2
    code, _ = run(tmp_path, "numrange", "--input", str(FIX / "tuple-nilpotent.json"), "--count", "0")
    assert code == 2


def test_outputs_are_deterministic(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    args = ["numrange", "--input", str(FIX / "tuple-identity-zeros.json"), "--seed", "3", *BUDGET]
    assert cli.main([*args, "--out", str(a)]) == 0
    assert cli.main([*args, "--out", str(b)]) == 0
    for name in ("radius.json", "range.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_verify_single_file_and_zero_budget(tmp_path):
    code, out = run(tmp_path, "verify", "--input", str(FIX / "tuple-identity-pair.json"))
    assert code == 0
    assert json.loads((out / "verify.json").read_text())["result"]["all_pass"]
    code = cli.main(["verify", "--out", str(tmp_path / "z"), "--restarts", "0", "--samples", "4"])
    assert code == 1
