import random

import pytest

from helpers import structure_over_values
from polyprog.engine import normalize
from polyprog.fixtures import program
from polyprog.frontend import decode_value, encode_value, numeral, parse_value
from polyprog.frontend.ast import TTuple
from polyprog.signature import STRUCTURE, Diagram, compose1, validate_polygraph
from polyprog.structure import (
    crossing,
    delta_cell,
    duplicator,
    eps_cell,
    eraser,
    structure_cells,
    structure_rules,
    tau_cell,
    word_crossing,
)


def test_structure_cells_per_wire_type():
    cells = structure_cells(("n", "l"))
    assert len(cells) == 4 + 2 + 2
    assert tau_cell("n", "l").tgt == ("l", "n")
    assert delta_cell("n").tgt == ("n", "n")
    assert eps_cell("l").tgt == ()


@pytest.mark.parametrize("N", [1, 2, 3, 5])
def test_structure_rule_counts(N):
    assert len(program("division").structure_rules) == 8
    assert len(program("sort", N).structure_rules) == 6 * N + 18


def test_derived_gates_have_the_right_boundaries():
    assert crossing(("n", "l"), "n").source == ("n", "l", "n")
    assert crossing(("n", "l"), "n").target == ("n", "n", "l")
    assert crossing(("n", "l"), "n", "left").target == ("n", "l", "n")
    assert word_crossing(("n",), ("l", "l")).target == ("l", "l", "n")
    assert duplicator(("n", "l")).target == ("n", "l", "n", "l")
    assert eraser(("n", "l")).target == ()


def test_rules_are_parallel_pairs():
    P = program("sort")
    for r in structure_rules(P):
        assert r.kind == STRUCTURE
        assert r.lhs.source == r.rhs.source and r.lhs.target == r.rhs.target
    assert validate_polygraph(P).ok


def test_duplicating_a_value_copies_it():
    P = program("sort")
    v = parse_value("[2,0,1]", "l", P)
    d = compose1(encode_value(v, P), Diagram.cell(delta_cell("l")))
    nf, trace = normalize(d, P)
    assert decode_value(nf) == TTuple((v, v))
    assert trace.structure == trace.total > 0


def test_erasing_and_crossing_values():
    P = program("division")
    two, three = numeral(2), numeral(3)
    d = compose1(encode_value(TTuple((two, three)), P), Diagram.cell(tau_cell("n", "n")))
    assert decode_value(normalize(d, P)[0]) == TTuple((three, two))
    e = compose1(encode_value(three, P), Diagram.cell(eps_cell("n")))
    assert normalize(e, P)[0] == Diagram.identity()


def test_structure_rules_reduce_gates_over_values_to_values():
    rng = random.Random(7)
    for name in ("division", "sort"):
        P = program(name)
        for _ in range(40):
            d = structure_over_values(P, rng)
            nf, trace = normalize(d, P, rules=P.structure_rules)
            assert all(s.cell.kind == "constructor" for s in nf.slices)
            assert trace.computation == 0
