from __future__ import annotations

import json

import pytest

from vwccg.atm_pool import HANDCRAFTED
from vwccg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_accept_reject(capsys):
    code, out, _ = run(capsys, "parse", "theorems.ccg", "We", "prove", "two", "theorems")
    assert code == 0 and out.strip() == "ACCEPT"
    code, out, _ = run(capsys, "parse", "ab_eps.ccg", "--empty")
    assert code == 0
    code, out, _ = run(capsys, "parse", "theorems.ccg", "theorems prove")
    assert code == 1 and out.strip() == "REJECT"


def test_parse_uncertified_rejection(capsys, tmp_path):
    g = tmp_path / "loop.ccg"
    g.write_text("start S\nlex EPS := T/A\nlex EPS := A/A/A\nrule fwd deg=2 slashes=//\n")
    code, out, _ = run(capsys, "parse", str(g), "--empty")
    assert code == 3
    code, _, _ = run(capsys, "parse", str(g), "--empty", "--arity-cap", "2")
    assert code == 1


def test_parse_budget(capsys):
    code, _, err = run(capsys, "parse", "ab_eps.ccg", "a", "b", "--max-items", "3")
    assert code == 3 and "budget" in err


def test_check_round_trip_and_mutation(capsys, tmp_path):
    d = tmp_path / "d.json"
    assert run(capsys, "parse", "theorems.ccg", "We prove two theorems", "--derivation", str(d))[0] == 0
    assert run(capsys, "check", "theorems.ccg", str(d))[0] == 0
    doc = json.loads(d.read_text())
    doc["children"][1]["cat"] = "S"
    d.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "check", "theorems.ccg", str(d))
    assert code == 1 and out.startswith("VIOLATION root")
    d.write_text('{"cat": "S", "rule": 0, "child')
    assert run(capsys, "check", "theorems.ccg", str(d))[0] == 2


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "parse", str(tmp_path / "missing.ccg"), "a")[0] == 2
    bad = tmp_path / "bad.ccg"
    bad.write_text("start S\nrule sideways\n")
    assert run(capsys, "parse", str(bad), "a")[0] == 2
    assert run(capsys, "parse", "theorems.ccg", "unknown")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2


def test_solve_sat(capsys, tmp_path):
    code, out, _ = run(capsys, "solve-sat", "running.cnf", "--oracle")
    assert code == 0 and out.split() == ["SAT", "v1=1", "v2=0"]
    assert run(capsys, "solve-sat", "contradiction.cnf")[0] == 1
    empty = tmp_path / "e.cnf"
    empty.write_text("p cnf 1 1\n0\n")
    assert run(capsys, "solve-sat", str(empty))[0] == 2


def test_reduce_sat_artifacts(capsys, tmp_path):
    g, w = tmp_path / "g.ccg", tmp_path / "w.txt"
    code, _, _ = run(capsys, "reduce-sat", "running.cnf", "--out-grammar", str(g), "--out-input", str(w))
    assert code == 0
    assert w.read_text().split() == "c3 c2 c1 c0 v1 v2 v3 d2 d1".split()
    assert run(capsys, "parse", str(g), w.read_text().strip(), "--arity-cap", "4")[0] == 0
    assert not [p for p in tmp_path.iterdir() if p.name.endswith(".tmp")]


def test_json_format(capsys):
    code, out, _ = run(capsys, "--format", "json", "solve-sat", "running.cnf")
    doc = json.loads(out)
    assert set(doc) == {"command", "accepted", "exit", "stats"}
    assert doc["accepted"] is True and doc["exit"] == code == 0
    assert doc["stats"]["assignment"] == {"v1": 1, "v2": 0}


def test_atm_commands(capsys, tmp_path):
    for name, expected in [("accept_all", 0), ("reject_all", 1), ("find_b", 0)]:
        assert run(capsys, "run-atm", f"{name}.atm", "ab")[0] == expected
        assert run(capsys, "solve-atm", f"{name}.atm", "ab", "--oracle")[0] == expected
    tree = tmp_path / "c.json"
    assert run(capsys, "solve-atm", "fork.atm", "a", "--tree", str(tree))[0] == 0
    doc = json.loads(tree.read_text())
    assert doc["state"] == "q0" and len(doc["children"]) == 2
    out = tmp_path / "g.ccg"
    assert run(capsys, "reduce-atm", "fork.atm", "a", "--out", str(out))[0] == 0
    meta = json.loads((tmp_path / "g.ccg.meta.json").read_text())
    assert meta["arity_bound"] == 4
    assert run(capsys, "parse", str(out), "--empty", "--arity-cap", "4")[0] == 0


def test_atm_pool_sweep_never_disagrees(capsys, tmp_path):
    for name, text in HANDCRAFTED.items():
        path = tmp_path / f"{name}.atm"
        path.write_text(text)
        for w in ["a", "aa", "ab"]:
            code, out, err = run(capsys, "solve-atm", str(path), w, "--oracle")
            assert "DISAGREE" not in out
            # 2 only for inputs outside the machine's alphabet
            assert code in (0, 1) or "not in the alphabet" in err


def test_commands_are_deterministic(capsys, tmp_path):
    outs = []
    for k in range(2):
        d = tmp_path / f"d{k}.json"
        code, out, _ = run(capsys, "--format", "json", "parse", "ab_eps.ccg", "a b a b", "--derivation", str(d))
        outs.append((code, out, d.read_bytes()))
    assert outs[0] == outs[1]
