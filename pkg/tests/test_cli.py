import json
from pathlib import Path

import pytest

from polyprog import cli
from polyprog.fixtures import path

GOLDEN = Path(__file__).parent / "golden"


def fx(name):
    return str(path(name))


def invoke(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("golden,argv", [
    ("check-division.json", ["check", fx("division.poly"), "--json"]),
    ("run-div.json", ["run", fx("division.poly"), "div", "7", "1", "--json"]),
    ("certify-division-strict.json", ["certify", fx("division.poly"), fx("division-strict.interp"), "--json"]),
    ("bounds-sort.json", ["bounds", fx("sort.poly"), fx("sort.interp"), "sort", "[2,1]", "[2,0,1,1]", "--json"]),
])
def test_golden_json(capsys, golden, argv):
    code, out, _ = invoke(capsys, *argv)
    assert code == cli.OK
    assert json.loads(out) == json.loads((GOLDEN / golden).read_text())


def test_run_text_and_trace(capsys, tmp_path):
    trace = tmp_path / "t.jsonl"
    code, out, _ = invoke(capsys, "run", fx("sort.poly"), "sort", "[2,1]", "--trace", trace)
    assert code == cli.OK and "[1,2]" in out
    lines = trace.read_text().splitlines()
    assert len(lines) == 7 and json.loads(lines[0])["step"] == 1


def test_certify_failures_exit_uncertified(capsys):
    code, out, _ = invoke(capsys, "certify", fx("sort.poly"), fx("sort.interp"))
    assert code == cli.UNCERTIFIED
    assert "sort#3" in out


def test_fuel_exhaustion(capsys):
    code, _, err = invoke(capsys, "run", fx("division.poly"), "div", "7", "1", "--fuel", "0")
    assert code == cli.EXHAUSTED


@pytest.mark.parametrize("argv", [
    ["bogus"],
    [],
    ["run", "/nonexistent/x.poly", "f"],
    ["run", fx("division.poly"), "nosuch", "1"],
    ["run", fx("division.poly"), "div", "1"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = cli.main(argv)
        raise SystemExit(code)
    assert info.value.code == cli.USAGE


def test_invalid_program(capsys, tmp_path):
    bad = tmp_path / "bad.poly"
    bad.write_text("sorts: n\nconstructors:\n  zero : -> n\nfunctions:\n  f : n -> n\nrules:\n  f(x) => g(x)\n")
    code, _, err = invoke(capsys, "check", bad)
    assert code == cli.INVALID and "g" in err


def test_bounds_violation_exit(capsys, tmp_path):
    weak = tmp_path / "weak.interp"
    weak.write_text(path("division-strict.interp").read_text().replace(
        "heat div(x, y) = x^2 + 2*x*y + 2*x", "heat div(x, y) = 1"))
    code, out, _ = invoke(capsys, "bounds", fx("division.poly"), weak, "div", "7;1")
    assert code == cli.VIOLATION


def test_compile_tm(capsys, tmp_path):
    prefix = tmp_path / "oracle"
    code, _, _ = invoke(capsys, "compile-tm", fx("oracle.tm"), "-o", prefix, "--verify", "4")
    assert code == cli.OK
    assert (tmp_path / "oracle.poly").exists()
    code, _, _ = invoke(capsys, "compile-tm", fx("oracle.tm"), "--clock", "2x+3", "-o", prefix, "--verify", "3")
    assert code == cli.OK
    assert invoke(capsys, "certify", tmp_path / "oracle.poly", tmp_path / "oracle.interp")[0] == cli.OK
    code, _, _ = invoke(capsys, "compile-tm", fx("oracle.tm"), "--clock", "x", "-o", prefix, "--verify", "3")
    assert code == cli.INVALID
    code, _, _ = invoke(capsys, "compile-tm", fx("oracle.tm"), "--clock", "x^", "-o", prefix)
    assert code == cli.INVALID
