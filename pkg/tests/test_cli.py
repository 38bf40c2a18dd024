import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from rsrl.automata import equiv
from rsrl.cli import run
from rsrl.errors import SpecFileError
from rsrl.ops import OPERATORS, goals
from rsrl.regex import parse_regex as P
from rsrl.specfile import dump_spec, parse_spec, parse_spec_text

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def cli_json(*argv):
    code, out, _ = cli(*argv, "--json")
    return code, json.loads(out)


def write(tmp_path, text, name="s.rsrl"):
    p = tmp_path / name
    p.write_bytes(text.encode("utf-8"))
    return p


# -- spec files -------------------------------------------------------------


def test_parse_intro_fixture():
    r, q = parse_spec(FIX / "intro.rsrl")
    assert q is None and len(goals(r)) == 4


def test_parse_error_has_position():
    with pytest.raises(SpecFileError) as info:
        parse_spec_text("sigma: a b\ndelta:\n  D := a +* b\nK: D\n")
    assert (info.value.line, info.value.column) == (3, 11)
    assert str(info.value).startswith("line 3, column 11:")


def test_empty_word_in_generator_rejected():
    with pytest.raises(SpecFileError) as info:
        parse_spec_text("sigma: a\ndelta:\n  D1 := a\nK: D1*\n")
    assert "empty word" in str(info.value) and info.value.line == 4


def test_name_clash_rejected():
    with pytest.raises(SpecFileError) as info:
        parse_spec_text("sigma: a b\ndelta:\n  a := b\nK: a\n")
    assert "disjoint" in str(info.value)


def test_undeclared_symbols_rejected():
    with pytest.raises(SpecFileError):
        parse_spec_text("sigma: a\ndelta:\n  D := a\nK: E\n")
    with pytest.raises(SpecFileError):
        parse_spec_text("sigma: a\ndelta:\n  D := a\nK: D\nR: b\n")


def test_crlf_and_comments(tmp_path):
    text = (FIX / "example1.rsrl").read_text().replace("\n", "\r\n")
    p = write(tmp_path, "# leading comment\r\n" + text)
    r, q = parse_spec(p)
    assert r == parse_spec(FIX / "example1.rsrl")[0] and q is not None


def test_dump_round_trip():
    r, q = parse_spec(FIX / "example1.rsrl")
    assert parse_spec_text(dump_spec(r, q)).rsrl == r


# -- commands ---------------------------------------------------------------


def test_member_intro_with_meta_names_in_query():
    code, out, _ = cli("member", "--spec", FIX / "intro.rsrl", "--query", "Sstar b Sstar")
    assert code == 0 and "Sb" in out
    code, _, _ = cli("member", "--spec", FIX / "intro.rsrl", "--query", "(a + b + c + d)*")
    assert code == 1


def test_member_uses_query_from_spec():
    code, data = cli_json("member", "--spec", FIX / "example1.rsrl")
    assert code == 0 and data["answer"] is True
    assert data["witness"] == "D1 D2 D2 D1"
    assert set(data) >= {"command", "answer", "witness", "stats"}


@pytest.mark.parametrize("algorithm,code", [("general", 1), ("oracle", 2)])
def test_member_negative_and_inconclusive(algorithm, code):
    got, _, _ = cli("member", "--spec", FIX / "example1.rsrl", "--query", "b", "--algorithm", algorithm, "--max-len", 4)
    assert got == code


def test_member_starfree_rejects_stars():
    code, _, err = cli("member", "--spec", FIX / "example1.rsrl", "--algorithm", "starfree")
    assert code == 2 and "error" in err


def test_goals_json():
    code, data = cli_json("goals", "--spec", FIX / "intro.rsrl")
    assert code == 0 and data["command"] == "goals" and len(data["goals"]) == 4
    langs = [P(g) for g in data["goals"]]
    for x in "abcd":
        assert any(equiv(l, P(f"(a + b + c + d)* {x} (a + b + c + d)*"), "a b c d") for l in langs)


def test_op_union_then_equiv(tmp_path):
    out = tmp_path / "c.rsrl"
    code, _, _ = cli("op", "--kind", "union", "--left", FIX / "left.rsrl", "--right", FIX / "right.rsrl", "--out", out)
    assert code == 0
    code, _, _ = cli("equiv", "--left", out, "--right", FIX / "union_expected.rsrl")
    assert code == 0
    code, _, _ = cli("equiv", "--left", FIX / "left.rsrl", "--right", FIX / "union_expected.rsrl")
    assert code == 1
    code, _, _ = cli("include", "--left", FIX / "left.rsrl", "--right", FIX / "union_expected.rsrl")
    assert code == 0


@pytest.mark.parametrize("kind", ["intersection", "difference", "symdiff", "pw-complement", "cart-union", "star"])
def test_emitted_specs_reparse(tmp_path, kind):
    out = tmp_path / "o.rsrl"
    argv = ["op", "--kind", kind, "--left", FIX / "left.rsrl", "--out", out]
    if kind not in ("pw-complement", "star"):
        argv += ["--right", FIX / "right.rsrl"]
    assert cli(*argv)[0] == 0
    back, _ = parse_spec(out)
    if kind == "star":
        return
    fn, arity = OPERATORS[kind]
    left, right = parse_spec(FIX / "left.rsrl")[0], parse_spec(FIX / "right.rsrl")[0]
    expected = fn(left, right) if arity == "binary" else fn(left)
    assert goals(back) == goals(expected)


def test_op_requires_operands():
    assert cli("op", "--kind", "union", "--left", FIX / "left.rsrl")[0] == 2
    assert cli("op", "--kind", "pw-union", "--left", FIX / "left.rsrl")[0] == 2


def test_limited():
    assert cli("limited", "--spec", FIX / "unlimited.rsrl")[0] == 1
    code, data = cli_json("limited", "--spec", FIX / "example1.rsrl", "--chain", "D1 D1*")
    assert code == 0 and data["answer"] is True


def test_rewrite_and_decompose():
    code, data = cli_json("rewrite", "--spec", FIX / "example1.rsrl")
    assert code == 0 and data["stats"]["states"] > 0
    code, out, _ = cli("decompose", "--regex", "(a + b) c")
    assert code == 0 and out.split("\n")[:2] == ["a c", "b c"]


def test_errors_exit_two(tmp_path):
    bad = write(tmp_path, "sigma: a\nK: D\n")
    code, out, err = cli("goals", "--spec", bad, "--json")
    assert code == 2 and json.loads(out)["answer"] is None and err
    assert cli("goals", "--spec", tmp_path / "missing.rsrl")[0] == 2
    assert cli("frobnicate")[0] == 2


def test_state_budget_from_environment(monkeypatch):
    monkeypatch.setenv("RSRL_STATE_BUDGET", "2")
    code, _, err = cli("member", "--spec", FIX / "example1.rsrl")
    assert code == 2 and "budget" in err
    # the flag wins over the environment
    assert cli("member", "--spec", FIX / "example1.rsrl", "--state-budget", "100000")[0] == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rsrl", "member", "--spec", str(FIX / "intro.rsrl"), "--query", "Sstar b Sstar"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
