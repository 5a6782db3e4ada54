import random

import pytest

from polyprog.bounds import (
    BoundViolation,
    NotAdditive,
    Sampler,
    compute_bounds,
    monitor_trace,
    monitored_run,
    nu,
    structure_count,
    trace_law_violations,
)
from polyprog.engine import run
from polyprog.fixtures import interpretation, program, text
from polyprog.frontend import numeral, parse_value
from polyprog.interp import load_interp
from polyprog.interp.expr import evaluate


def test_structure_counts(programs):
    assert structure_count(programs["division"]) == 6
    assert structure_count(programs["arith"]) == 1
    assert structure_count(programs["sort"]) == 1  # one crossing: x, y, l1, l2 -> x, l1, y, l2


def test_sizes(division, sort_program):
    assert nu([numeral(5)], division) == (6,)
    assert nu([parse_value("[2,1]", "l", sort_program)], sort_program) == (5,)
    assert nu([parse_value("[]", "l", sort_program)], sort_program) == (1,)


@pytest.mark.parametrize("name", ["division", "sort", "arith"])
def test_bound_identities(programs, name):
    P = programs[name]
    b = compute_bounds(P, interpretation(name, P))
    rng = random.Random(7)
    for f in P.functions:
        fb = b[f.name]
        for _ in range(20):
            x = [rng.randint(1, 30) for _ in range(f.arity)]
            v = fb.at(x)
            assert v["S"] == b.K * v["M"] ** 2
            assert v["Q"] == v["P"] * (1 + v["S"])


def test_sort_numbers(sort_program):
    b = compute_bounds(sort_program, interpretation("sort", sort_program))
    assert b["sort"].at([5]) == {"M": 5, "S": b.K * 25, "P": 9, "Q": 9 * (1 + b.K * 25)}
    js = b.to_json()
    assert set(js["functions"]["sort"]) == {"M", "S", "P", "Q"}


def test_not_additive(division):
    bad = load_interp(text("division.interp").replace("current zero = 1", "current zero = 0"), division)
    with pytest.raises(NotAdditive):
        compute_bounds(division, bad)


def test_monitored_runs_respect_bounds(arith, certified):
    I = certified["arith"]
    b = compute_bounds(arith, I)
    for m in range(6):
        for n in range(6):
            args = [numeral(m), numeral(n)]
            values, trace, report = monitored_run(arith, I, "mult", args, b)
            assert values == [numeral(m * n)]
            assert report.ok and min(report.margins.values()) >= 0
            assert trace_law_violations(trace, b, "mult", nu(args, arith)) == []


def test_sampler_agrees_with_initial_heat(arith, certified):
    I = certified["arith"]
    b = compute_bounds(arith, I)
    args = [numeral(3), numeral(4)]
    _, trace = run(arith, "mult", args, sampler=Sampler(I))
    sizes = nu(args, arith)
    assert trace.initial_samples["heat"] == evaluate(I.heat.expr(arith.two_cells["mult"]), sizes)
    assert trace.computation <= b["mult"].at(sizes)["P"]


def test_sabotaged_bounds_are_caught(division, certified):
    I = certified["division"]
    args = [numeral(7), numeral(1)]
    _, trace = run(division, "div", args, sampler=Sampler(I))
    sabotaged = load_interp(text("division-strict.interp").replace(
        "heat div(x, y) = x^2 + 2*x*y + 2*x", "heat div(x, y) = 1"), division)
    bad = compute_bounds(division, sabotaged)
    with pytest.raises(BoundViolation) as info:
        monitor_trace(trace, "div", args, bad, division)
    assert "exceed P" in str(info.value)
    report = monitor_trace(trace, "div", args, bad, division, raise_on_violation=False)
    assert not report.ok and report.margins["P"] < 0


def test_unsampled_traces_are_rejected(division, certified):
    _, trace = run(division, "div", [numeral(2), numeral(1)])
    with pytest.raises(ValueError):
        monitor_trace(trace, "div", [numeral(2), numeral(1)],
                      compute_bounds(division, certified["division"]), division)
