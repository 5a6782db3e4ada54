import random

import pytest

from polyprog.engine import evaluate, normalize
from polyprog.fixtures import text
from polyprog.frontend import TApp, decode_value, encode_value, numeral
from polyprog.interp import certify, load_interp
from polyprog.interp.expr import evaluate as eval_expr
from polyprog.interp.expr import render
from polyprog.signature import compose1
from polyprog.tmc import (
    BLANK,
    Configuration,
    StepLimit,
    TMError,
    TuringMachine,
    arithmetic_program,
    clock_value,
    clocked_interp_source,
    compile_clocked_tm,
    compile_tm,
    decode_word,
    encode_configuration,
    encode_word,
    expected_rule_count,
    format_clock,
    parse_clock,
    parse_tm,
    poly_diagram,
    poly_interpretation,
    simulate_tm,
    step_cell,
    tm_output,
    tm_step,
)


@pytest.fixture(scope="module")
def oracle():
    return parse_tm(text("oracle.tm"))


def random_machine(rng, n_states=3, alphabet=("a", "b")):
    states = tuple(f"q{i}" for i in range(n_states)) + ("qf",)
    symbols = alphabet + (BLANK,)
    delta = {(q, a): (rng.choice(states), rng.choice(symbols), rng.choice("LR"))
             for q in states[:-1] for a in symbols}
    return TuringMachine(alphabet, states, "q0", "qf", delta).validate()


def words(alphabet, n):
    out = [()]
    for _ in range(n):
        out += [w + (a,) for w in out if len(w) == len(out[-1]) for a in alphabet]
    return sorted(set(out), key=lambda w: (len(w), w))


def test_oracle_swaps_letters(oracle):
    c, steps = simulate_tm(oracle, ("a", "a", "b"))
    assert steps == 2 * 3 + 3
    assert c.right == (BLANK, "b", "b", "a", BLANK)


def test_shuttle_covers_all_move_cases():
    # moves left and right both at the tape ends and over letters
    M = parse_tm("alphabet: a\nstates: q0 q1 q2 qf\ninitial: q0\nfinal: qf\n"
                 "delta q0 _ -> q1 a L\ndelta q0 a -> q1 a R\n"
                 "delta q1 _ -> q2 _ R\ndelta q1 a -> q2 a R\n"
                 "delta q2 _ -> qf _ R\ndelta q2 a -> q2 a L\n")
    c = Configuration("q0", BLANK, (), ())
    c = tm_step(M, c)  # left at the left end
    assert c == Configuration("q1", BLANK, (), ("a",))
    c = tm_step(M, c)  # right over a letter
    assert c == Configuration("q2", "a", (BLANK,), ())
    c = tm_step(M, c)  # left over a letter
    assert c == Configuration("q2", BLANK, (), ("a",))
    assert tm_step(M, Configuration("q1", "a", (), ())) == Configuration("q2", BLANK, ("a",), ())


def test_step_limit():
    M = parse_tm("alphabet: a\nstates: q0 qf\ninitial: q0\nfinal: qf\n"
                 "delta q0 _ -> q0 _ R\ndelta q0 a -> q0 a R\n")
    with pytest.raises(StepLimit) as info:
        simulate_tm(M, ("a",), max_steps=50)
    assert info.value.steps == 50


@pytest.mark.parametrize("body,where", [
    ("alphabet: a\nstates: q0 qf\ninitial: q0\nfinal: qf\ndelta q0 a -> qf a R\n", "no transition"),
    ("alphabet: a\nstates: q0 qf\ninitial: q0\nfinal: qf\ndelta q0 a -> qf a X\ndelta q0 _ -> qf a R\n",
     "direction"),
    ("alphabet: nil\nstates: q0 qf\ninitial: q0\nfinal: qf\n", "reserved"),
    ("alphabet: a\nstates: q0 qf\ninitial: q9\nfinal: qf\n", "unknown state"),
    ("alphabet: a\nstates: q0 qf\nfinal: qf\n", "missing initial"),
    ("alphabet: a\nstates: q0 qf\ninitial: q0\nfinal: qf\nwhat is this\n", "line 5"),
])
def test_malformed_machines(body, where):
    with pytest.raises(TMError, match=where):
        parse_tm(body)


def test_word_encoding():
    t = encode_word(("a", BLANK, "b"))
    assert t == TApp("a", (TApp("blank", (TApp("b", (TApp("nil"),)),)),))
    assert decode_word(t) == ("a", BLANK, "b")
    c = Configuration("q1", "a", ("b",), ())
    assert encode_configuration(c).head == step_cell("q1", "a") == "step_q1_a"
    assert encode_configuration(c, 2).args[0] == TApp("succ", (TApp("succ", (TApp("zero"),)),))


def test_rule_counts(oracle):
    assert len(compile_tm(oracle).computation_rules) == expected_rule_count(oracle) == 40
    P = compile_clocked_tm(oracle, [3, 2])
    assert len(P.computation_rules) == expected_rule_count(oracle, True) == 57


def test_configuration_correspondence_on_random_machines(rng):
    """Every compiled step function computes what the machine computes from that configuration."""
    checked = 0
    for _ in range(12):
        M = random_machine(rng)
        P = compile_tm(M)
        for _ in range(25):
            start = Configuration(rng.choice(M.states[:-1]), rng.choice(M.symbols),
                                  tuple(rng.choice(M.symbols) for _ in range(rng.randint(0, 3))),
                                  tuple(rng.choice(M.symbols) for _ in range(rng.randint(0, 3))))
            try:
                final, steps = simulate_tm(M, (), max_steps=20, start=start)
            except StepLimit:
                continue
            t = encode_configuration(start)
            (out,) = evaluate(P, t.head, list(t.args))
            assert decode_word(out) == final.right
            checked += 1
    assert checked > 50


def test_clocked_counter_runs_out_exactly(rng):
    for _ in range(8):
        M = random_machine(rng)
        P = compile_clocked_tm(M, [1])
        for _ in range(10):
            start = Configuration("q0", BLANK, (), tuple(rng.choice(M.alphabet) for _ in range(rng.randint(0, 3))))
            try:
                final, steps = simulate_tm(M, (), max_steps=20, start=start)
            except StepLimit:
                continue
            enough = encode_configuration(start, steps)
            (out,) = evaluate(P, enough.head, list(enough.args))
            assert decode_word(out) == final.right
            if steps:
                short = encode_configuration(start, steps - 1)
                (out,) = evaluate(P, short.head, list(short.args))
                assert decode_word(out) == ()


def test_plain_compilation_agrees_on_short_words(oracle):
    P = compile_tm(oracle)
    for w in words(("a", "b"), 5):
        (out,) = evaluate(P, "f", [encode_word(w)])
        assert decode_word(out) == tm_output(oracle, w)


@pytest.mark.parametrize("clock,expected", [
    ("x^2+3x+1", [1, 3, 1]),
    ("2x + 3", [3, 2]),
    ("x", [0, 1]),
    ("5", [5]),
    ("x^2 + x^2", [0, 0, 2]),
])
def test_clock_parser(clock, expected):
    assert parse_clock(clock) == expected
    assert parse_clock(format_clock(expected).replace("*", "")) == expected


@pytest.mark.parametrize("bad", ["", "x^", "2y", "x++1", "-x"])
def test_clock_parser_rejects(bad):
    with pytest.raises(ValueError):
        parse_clock(bad)


@pytest.mark.parametrize("coeffs", [[0], [0, 1], [2, 0, 1], [1, 3, 1], [3, 2], [0, 0, 0, 1]])
def test_poly_diagram_computes_the_polynomial(coeffs):
    A = arithmetic_program()
    d = poly_diagram(coeffs, A)
    for n in range(5):
        arg = encode_value(numeral(n), A)
        nf, _ = normalize(compose1(arg, d), A)
        assert decode_value(nf) == numeral(clock_value(coeffs, n))


def test_poly_interpretation():
    assert render(poly_interpretation([2, 0, 1])[0]) == "x0^2 + 3"
    cur, heat = poly_interpretation([1, 3, 1])
    for x in range(1, 10):
        assert eval_expr(cur, [x]) >= clock_value([1, 3, 1], x)
    assert render(poly_interpretation([0])[0]) == "1"


def test_clocked_compilation_certifies(oracle):
    P = compile_clocked_tm(oracle, [3, 2])
    I = load_interp(clocked_interp_source(oracle, [3, 2]), P)
    assert certify(P, I, depth=3).ok
    for w in words(("a", "b"), 4):
        (out,) = evaluate(P, "f", [encode_word(w)])
        assert decode_word(out) == tm_output(oracle, w)


def test_under_clocked_compilation_disagrees(oracle):
    P = compile_clocked_tm(oracle, [0, 1])
    (out,) = evaluate(P, "f", [encode_word(("a", "b"))])
    assert decode_word(out) != tm_output(oracle, ("a", "b"))
