import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyprog.engine import (
    LEFTMOST,
    STRUCTURE_EAGER,
    FuelExhausted,
    StaleMatch,
    Undefined,
    application,
    apply_match,
    check_completeness,
    check_orthogonal,
    evaluate,
    find_redexes,
    normalize,
    run,
)
from polyprog.fixtures import program
from polyprog.frontend import format_value, load_program, numeral, parse_value
import json


def value(P, f, *args):
    return [format_value(v, P) for v in evaluate(P, f, list(args))]


def test_division_examples(division):
    assert value(division, "minus", numeral(5), numeral(2)) == ["3"]
    assert value(division, "minus", numeral(2), numeral(5)) == ["0"]
    assert value(division, "div", numeral(7), numeral(1)) == ["3"]
    assert value(division, "div", numeral(0), numeral(3)) == ["0"]


def test_sort_example_and_trace(sort_program):
    v, trace = run(sort_program, "sort", [parse_value("[2,1]", "l", sort_program)])
    assert format_value(v[0], sort_program) == "[1,2]"
    assert trace.counts() == {"total": 7, "computation": 6, "structure": 1}
    lines = [json.loads(x) for x in trace.to_jsonl().splitlines()]
    assert [e["step"] for e in lines] == list(range(1, 8))
    assert set(lines[0]) == {"step", "rule", "kind", "anchor", "size_before", "size_after"}


def test_split_returns_two_values(sort_program):
    out = evaluate(sort_program, "split", [parse_value("[0,1,2]", "l", sort_program)])
    assert [format_value(v, sort_program) for v in out] == ["[0,2]", "[1]"]


@given(st.integers(0, 6), st.integers(0, 6))
def test_strategies_agree(m, n):
    P = program("arith")
    a = evaluate(P, "mult", [numeral(m), numeral(n)], LEFTMOST)
    b = evaluate(P, "mult", [numeral(m), numeral(n)], STRUCTURE_EAGER)
    assert a == b == [numeral(m * n)]


def test_fuel_exhaustion_keeps_the_partial_trace(division):
    with pytest.raises(FuelExhausted) as info:
        run(division, "div", [numeral(6), numeral(1)], fuel=3)
    assert info.value.trace.total == 3
    with pytest.raises(FuelExhausted):
        run(division, "div", [numeral(6), numeral(1)], fuel=0)


def test_unknown_strategy(division):
    with pytest.raises(ValueError):
        normalize(application(division, "div", [numeral(1), numeral(1)]), division, "random")


def test_find_and_apply_redexes(arith):
    d = application(arith, "add", [numeral(2), numeral(1)])
    ms = find_redexes(d.normal_form(), arith)
    assert [m.rule.name for m in ms] == ["add#2"]
    d2 = apply_match(d.normal_form(), ms[0])
    assert d2 != d
    with pytest.raises(StaleMatch):
        apply_match(d2.normal_form(), ms[0])


def test_undefined_results_are_reported():
    P = load_program("sorts: n\nconstructors:\n  zero : -> n\n  succ : n -> n\nfunctions:\n"
                     "  pred : n -> n\nrules:\n  pred(succ(x)) => x\n")
    with pytest.raises(Undefined) as info:
        run(P, "pred", [numeral(0)])
    assert info.value.normal_form is not None
    report = check_completeness(P, 3)
    assert not report.ok
    assert report.counterexamples[0] == ("pred", (numeral(0),))


def test_bundled_programs_are_complete_and_orthogonal(programs):
    for P in programs.values():
        assert check_completeness(P, 4).ok
        assert check_orthogonal(P).ok


def test_merge_overlap_is_weak(sort_program):
    report = check_orthogonal(sort_program)
    assert [(o.first, o.second, o.weak) for o in report.overlaps] == [("merge#1", "merge#2", True)]


def test_critical_overlap_is_reported():
    P = load_program("sorts: n\nconstructors:\n  zero : -> n\n  succ : n -> n\nfunctions:\n"
                     "  g : n -> n\nrules:\n  g(x) => zero\n  g(succ(x)) => x\n")
    report = check_orthogonal(P)
    assert not report.ok
    assert report.overlaps[0].term == "g(succ(y0))"
