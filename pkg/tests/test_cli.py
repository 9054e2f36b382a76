import json

import pytest

from awarekit.cli import main
from awarekit.modelio import fixture_path, load_model

TRADE = str(fixture_path("trade.klm.json"))
TRADE_FH = str(fixture_path("trade.fh.json"))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_fixture(capsys):
    code, out, _ = run(capsys, "check", TRADE)
    assert code == 0
    assert "all checks pass" in out


def test_check_json(capsys):
    code, out, _ = run(capsys, "check", TRADE, "--json")
    body = json.loads(out)
    assert code == 0 and body["passed"] and body["model"] == "klm"


def test_check_failing_model(tmp_path, capsys):
    bad = {"kind": "klm", "atoms": ["p"], "agents": ["a"], "worlds": ["u", "v"],
           "relations": {"a": [["u", "v"]]}, "valuation": {"p": ["u"]},
           "awareness": {"a": {"u": ["p"], "v": []}}}
    path = tmp_path / "bad.klm.json"
    path.write_text(json.dumps(bad))
    code, out, _ = run(capsys, "check", str(path))
    assert code == 1
    assert "FAIL" in out


def test_eval_fixture_truths(capsys):
    cases = [
        (("w1@{i,l}", "L", "K{b} i"), "True"),
        (("w1@{i,l}", "L", "K{o} i"), "False"),
        (("w2@{i,l}", "L", "A{b} l"), "False"),
        (("w1@{i}", "L", "K{b} l"), "Undefined"),
        (("w2@{i,l}", "LKA", "X{b} l"), "False"),
    ]
    for (at, lang, formula), expected in cases:
        code, out, _ = run(capsys, "eval", formula, "--model", TRADE,
                           "--at", at, "--lang", lang)
        assert code == 0
        assert out.strip() == expected, (formula, at, lang)


def test_eval_bare_world_means_full_vocabulary(capsys):
    code, out, _ = run(capsys, "eval", "K{b} i", "--model", TRADE, "--at", "w1")
    assert code == 0 and out.strip() == "True"


def test_eval_usage_errors(capsys):
    code, _, err = run(capsys, "eval", "X{b} l", "--model", TRADE,
                       "--at", "w1", "--lang", "L")
    assert code == 2 and "X{" in err
    code, _, err = run(capsys, "eval", "i", "--model", TRADE, "--at", "w9")
    assert code == 2
    code, _, err = run(capsys, "eval", "i &", "--model", TRADE, "--at", "w1")
    assert code == 2


def test_eval_fh_model(capsys):
    code, out, _ = run(capsys, "eval", "A{b} l", "--model", TRADE_FH,
                       "--at", "w2", "--lang", "LKA")
    assert code == 0 and out.strip() == "False"


def test_transform_and_check(tmp_path, capsys):
    out_path = str(tmp_path / "trade.hms.json")
    code, out, _ = run(capsys, "transform", "--kind", "H",
                       "--in", TRADE, "--out", out_path)
    assert code == 0
    code, out, _ = run(capsys, "check", out_path)
    assert code == 0
    # and back again
    back = str(tmp_path / "back.klm.json")
    code, out, _ = run(capsys, "transform", "--kind", "L",
                       "--in", out_path, "--out", back)
    assert code == 0
    assert load_model(back).awareness["b"]["w2@{i,l}"] == frozenset({"i"})


def test_equiv(capsys):
    code, out, _ = run(capsys, "equiv", TRADE, "--lang", "L",
                       "--depth", "1", "--json")
    body = json.loads(out)
    assert code == 0
    assert body["kind"] == "equivalence" and body["failures"] == []
    assert set(body) == {"kind", "depth", "checked", "failures"}


def test_axioms_pass_and_include_5(capsys):
    code, out, _ = run(capsys, "axioms", "--suite", "hms", "--models", TRADE,
                       "--depth", "1", "--no-rules")
    assert code == 0 and "suite passes" in out
    code, out, _ = run(capsys, "axioms", "--suite", "hms", "--models", TRADE,
                       "--depth", "1", "--no-rules", "--include-5", "--json")
    assert code == 1
    body = json.loads(out)
    assert body["schemas"]["5"]["failures"][0]["state"] == "w2@{i,l}"


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--atoms", "p", "--agents", "a",
                       "--depth", "1")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "T" and "K{a} p" in lines
    assert len(lines) == len(set(lines))


def test_fixture_name_resolution(capsys):
    # bundled fixture names work from any directory
    code, out, _ = run(capsys, "check", "triv1.klm.json")
    assert code == 0


def test_fixtures_listing(capsys):
    code, out, _ = run(capsys, "fixtures")
    assert code == 0
    assert "trade.klm.json" in out and "trade.fh.json" in out


def test_missing_file(capsys):
    code, _, err = run(capsys, "check", "no-such-file.json")
    assert code == 2 and "no such model file" in err
