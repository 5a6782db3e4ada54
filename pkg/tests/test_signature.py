import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import random_diagram, shuffle_by_exchanges
from polyprog.signature import (
    CONSTRUCTOR,
    COMPUTATION,
    FUNCTION,
    BoundaryMismatch,
    Diagram,
    DiagramError,
    MalformedDiagram,
    Polygraph,
    ThreeCell,
    TwoCell,
    closed_components,
    compose0,
    compose1,
    exchange_normal_form,
    legal_swaps,
    size,
    swap,
    tensor,
    validate_polygraph,
)
from polyprog.structure import eps_cell

ZERO = TwoCell("zero", (), ("n",), CONSTRUCTOR)
SUCC = TwoCell("succ", ("n",), ("n",), CONSTRUCTOR)
F = TwoCell("f", ("n", "n"), ("n",), FUNCTION)
EPS = eps_cell("n")


def test_cell_arity_and_repr():
    assert F.arity == 2 and F.coarity == 1
    assert repr(ZERO) == "<zero: * => n>"


def test_constructor_needs_one_output():
    with pytest.raises(ValueError):
        TwoCell("bad", ("n",), ("n", "n"), CONSTRUCTOR)


def test_structure_tag_is_checked():
    with pytest.raises(ValueError):
        TwoCell("weird", ("n",), ("n",), "structure", ("eps", "n"))


def test_composition_boundaries():
    two = compose0(Diagram.cell(ZERO), Diagram.cell(ZERO))
    assert two.source == () and two.target == ("n", "n")
    d = compose1(two, Diagram.cell(F))
    assert d.target == ("n",) and len(d) == 3
    with pytest.raises(BoundaryMismatch):
        compose1(Diagram.cell(ZERO), Diagram.cell(F))


def test_from_ops_rejects_ill_typed_slices():
    with pytest.raises(MalformedDiagram):
        Diagram.from_ops(("n",), [(0, F)])


def test_identity_is_neutral():
    d = Diagram.cell(SUCC)
    assert compose1(Diagram.identity(("n",)), d) == d
    assert compose0(Diagram.identity(), d) == d


def test_exchange_law_equates_layouts():
    a = Diagram.from_ops(("n", "n"), [(0, SUCC), (1, SUCC)])
    b = Diagram.from_ops(("n", "n"), [(1, SUCC), (0, SUCC)])
    assert not a.same_layout(b)
    assert a == b and hash(a) == hash(b)


def test_dependent_cells_cannot_swap():
    d = Diagram.from_ops(("n",), [(0, SUCC), (0, SUCC)])
    assert legal_swaps(d) == []
    with pytest.raises(DiagramError):
        swap(d, 0)


def test_normal_form_is_idempotent_and_a_representative():
    d = Diagram.from_ops(("n", "n"), [(1, SUCC), (0, SUCC), (0, F)])
    nf = exchange_normal_form(d)
    assert nf == d
    assert nf.normal_form().same_layout(nf)


def test_size_counts_selected_cells():
    d = compose1(tensor(Diagram.cell(ZERO), Diagram.cell(ZERO)), Diagram.cell(F))
    assert size(d) == 3
    assert size(d, [ZERO]) == 2
    assert size(d, lambda c: c.kind == FUNCTION) == 1


def test_closed_components_are_detected():
    # zero;eps floats free of the boundary; succ on the input wire does not
    ops = [(0, SUCC), (1, ZERO), (1, EPS)]
    comps = closed_components(ops, 1)
    assert comps == [[1, 2]]


def test_floating_components_have_a_unique_normal_form():
    # two closed components sharing a gap can be interleaved in many ways
    d1 = Diagram.from_ops((), [(0, ZERO), (0, SUCC), (0, EPS), (0, ZERO), (0, EPS)])
    d2 = Diagram.from_ops((), [(0, ZERO), (0, EPS), (0, ZERO), (0, SUCC), (0, EPS)])
    d3 = Diagram.from_ops((), [(0, ZERO), (1, ZERO), (1, EPS), (0, SUCC), (0, EPS)])
    assert d1 == d2 == d3


def _division_cells():
    from polyprog.fixtures import program
    return program("division")


@given(st.integers(0, 10**6), st.integers(1, 25))
def test_normal_form_invariant_under_random_exchanges(seed, n):
    P = _division_cells()
    rng = random.Random(seed)
    d = random_diagram(P, rng, n)
    e = shuffle_by_exchanges(d, rng, 50)
    assert d.normal_form().same_layout(Diagram.from_ops(e.source, e.ops).normal_form())


@given(st.integers(0, 10**6))
def test_normal_form_invariant_with_two_wire_types(seed):
    from polyprog.fixtures import program
    P = program("sort")
    rng = random.Random(seed)
    d = random_diagram(P, rng, rng.randint(1, 20))
    e = shuffle_by_exchanges(d, rng, 50)
    assert d == e


def test_validate_reports_globular_and_linearity_problems():
    lhs = compose1(tensor(Diagram.identity(("n",)), Diagram.cell(ZERO)), Diagram.cell(F))
    bad_boundary = ThreeCell("r1", lhs, Diagram.identity(("n",)) @ Diagram.identity(("n",)), COMPUTATION)
    dangling = ThreeCell("r2", compose0(Diagram.cell(F), Diagram.cell(ZERO)),
                         compose0(Diagram.cell(F), Diagram.cell(ZERO)), COMPUTATION)
    P = Polygraph(("n",), [ZERO, SUCC, F, EPS], [bad_boundary, dangling])
    report = validate_polygraph(P)
    assert not report.ok
    assert "GlobularViolation" in report.kinds()
    assert report.kinds() & {"LinearityViolation", "PatternShapeViolation"}


def test_validate_reports_undeclared_wire_types():
    P = Polygraph(("n",), [TwoCell("g", ("m",), ("n",))])
    assert validate_polygraph(P).kinds() == {"UndeclaredOneCell"}


def test_bundled_programs_are_valid(programs):
    for P in programs.values():
        assert validate_polygraph(P).ok
