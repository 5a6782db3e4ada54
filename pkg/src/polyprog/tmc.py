"""Turing machines: a direct simulator and compilation to programs.

Words over the alphabet are encoded with a constructor ``nil`` for the empty
word and one unary constructor per letter, the first letter outermost
(``ab`` is ``a(b(nil))``).  The blank symbol, written ``_`` in ``.tm`` files,
is the constructor ``blank``.  A configuration ``(q, a, left, right)``, with
``left`` stored in reverse order, is encoded as ``step_q_a(left, right)``.

``compile_tm`` builds the plain program; ``compile_clocked_tm`` builds the
clocked one, where every step also consumes one ``succ`` of a unary counter
initialised to ``P(|w|)`` for a clock polynomial ``P``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .frontend import TApp, TLet, TVar, load_program, term_diagram
from .interp.expr import poly_to_expr, render, to_poly
from .interp.interpretation import symbolic_current, symbolic_heat
from .signature import Diagram, Polygraph

BLANK = "_"
BLANK_CELL = "blank"
LEFT, RIGHT = "L", "R"
_RESERVED = {"nil", BLANK_CELL, "f", "size", "zero", "succ", "add", "mult", "x", "l", "r", "n", "s"}
_IDENT = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")


class TMError(ValueError):
    """An ill-formed machine description."""

    def __init__(self, message: str, line: int = 0) -> None:
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


# ---------------------------------------------------------------------------
# machines and direct simulation

@dataclass(frozen=True)
class TuringMachine:
    """A deterministic one-tape machine; ``delta[(q, a)] = (q2, c, 'L' | 'R')``."""

    alphabet: tuple
    states: tuple
    initial: str
    final: str
    delta: dict = field(hash=False)

    @property
    def symbols(self) -> tuple:
        """The alphabet together with the blank."""
        return tuple(self.alphabet) + (BLANK,)

    def validate(self) -> "TuringMachine":
        for a in self.alphabet:
            if not _IDENT.match(a) or a in _RESERVED or a.startswith("step"):
                raise TMError(f"letter {a!r} must be an identifier distinct from reserved names")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise TMError("repeated letter in the alphabet")
        for q in self.states:
            if not _IDENT.match(q):
                raise TMError(f"state {q!r} must be alphanumeric")
        if len(set(self.states)) != len(self.states):
            raise TMError("repeated state")
        for q in (self.initial, self.final):
            if q not in self.states:
                raise TMError(f"unknown state {q!r}")
        for (q, a), (q2, c, d) in self.delta.items():
            if q == self.final:
                raise TMError(f"final state {q} has a transition")
            if q not in self.states or q2 not in self.states:
                raise TMError(f"unknown state in transition from ({q}, {a})")
            if a not in self.symbols or c not in self.symbols:
                raise TMError(f"unknown symbol in transition from ({q}, {a})")
            if d not in (LEFT, RIGHT):
                raise TMError(f"direction must be L or R in transition from ({q}, {a})")
        for q in self.states:
            if q == self.final:
                continue
            for a in self.symbols:
                if (q, a) not in self.delta:
                    raise TMError(f"no transition for ({q}, {a})")
        return self


@dataclass(frozen=True)
class Configuration:
    """State, read symbol, left word (nearest letter first) and right word."""

    state: str
    head: str
    left: tuple = ()
    right: tuple = ()

    def __str__(self) -> str:
        w = lambda t: "".join(t) or "e"  # noqa: E731
        return f"({self.state}, {self.head}, {w(self.left)}, {w(self.right)})"


class StepLimit(RuntimeError):
    """The machine did not halt within the step budget."""

    def __init__(self, config: Configuration, steps: int) -> None:
        super().__init__(f"no final state after {steps} steps")
        self.config = config
        self.steps = steps


def initial_configuration(M: TuringMachine, word: Sequence[str]) -> Configuration:
    return Configuration(M.initial, BLANK, (), tuple(word))


def tm_step(M: TuringMachine, c: Configuration) -> Configuration:
    """One transition; the configuration must not be final."""
    q2, sym, d = M.delta[(c.state, c.head)]
    if d == LEFT:
        if not c.left:
            return Configuration(q2, BLANK, (), (sym,) + c.right)
        return Configuration(q2, c.left[0], c.left[1:], (sym,) + c.right)
    if not c.right:
        return Configuration(q2, BLANK, (sym,) + c.left, ())
    return Configuration(q2, c.right[0], (sym,) + c.left, c.right[1:])


def simulate_tm(M: TuringMachine, word: Sequence[str], max_steps: int = 100_000,
                start: Configuration | None = None) -> tuple[Configuration, int]:
    """Run from ``(q0, blank, e, word)`` to the final state; returns it and the step count."""
    c = start if start is not None else initial_configuration(M, word)
    steps = 0
    while c.state != M.final:
        if steps >= max_steps:
            raise StepLimit(c, steps)
        c = tm_step(M, c)
        steps += 1
    return c, steps


def tm_output(M: TuringMachine, word: Sequence[str], max_steps: int = 100_000) -> tuple:
    """The word computed by the machine: the right word of the final configuration."""
    return simulate_tm(M, word, max_steps)[0].right


# ---------------------------------------------------------------------------
# .tm files

def parse_tm(text: str) -> TuringMachine:
    """Read ``alphabet:``, ``states:``, ``initial:``, ``final:`` and ``delta`` lines."""
    header: dict = {}
    delta: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^(alphabet|states|initial|final)\s*:\s*(.*)$", line)
        if m:
            if m.group(1) in header:
                raise TMError(f"duplicate {m.group(1)} line", lineno)
            header[m.group(1)] = (m.group(2).split(), lineno)
            continue
        m = re.match(r"^delta\s+(\S+)\s+(\S+)\s*->\s*(\S+)\s+(\S+)\s+(\S+)$", line)
        if m:
            q, a, q2, c, d = m.groups()
            if (q, a) in delta:
                raise TMError(f"duplicate transition for ({q}, {a})", lineno)
            delta[(q, a)] = (q2, c, d)
            continue
        raise TMError("expected alphabet/states/initial/final or 'delta q a -> q2 c L|R'", lineno)
    for key in ("alphabet", "states", "initial", "final"):
        if key not in header:
            raise TMError(f"missing {key} line")
    for key in ("initial", "final"):
        words, lineno = header[key]
        if len(words) != 1:
            raise TMError(f"{key} takes exactly one state", lineno)
    return TuringMachine(tuple(header["alphabet"][0]), tuple(header["states"][0]),
                         header["initial"][0][0], header["final"][0][0], delta).validate()


def load_tm(path) -> TuringMachine:
    with open(path, encoding="utf-8") as fh:
        return parse_tm(fh.read())


# ---------------------------------------------------------------------------
# words as terms

def letter_cell(sym: str) -> str:
    return BLANK_CELL if sym == BLANK else sym


def step_cell(q: str, sym: str) -> str:
    return f"step_{q}_{letter_cell(sym)}"


def encode_word(word: Iterable[str]) -> TApp:
    t = TApp("nil")
    for sym in reversed(tuple(word)):
        t = TApp(letter_cell(sym), (t,))
    return t


def decode_word(term) -> tuple:
    out = []
    while term.head != "nil":
        out.append(BLANK if term.head == BLANK_CELL else term.head)
        (term,) = term.args
    return tuple(out)


def encode_configuration(c: Configuration, counter: int | None = None) -> TApp:
    """``step_q_a(left, right)``, with a leading unary counter when given."""
    args = (encode_word(c.left), encode_word(c.right))
    if counter is not None:
        args = (_numeral(counter),) + args
    return TApp(step_cell(c.state, c.head), args)


def _numeral(k: int) -> TApp:
    t = TApp("zero")
    for _ in range(k):
        t = TApp("succ", (t,))
    return t


# ---------------------------------------------------------------------------
# clock polynomials

_MONO = re.compile(r"^(\d+)?\s*\*?\s*(x(?:\s*\^\s*(\d+))?)?$")


def parse_clock(text: str) -> list[int]:
    """Coefficients ``[a0, a1, ...]`` of a polynomial like ``x^2+3x+1``."""
    coeffs: dict = {}
    body = text.replace(" ", "")
    if not body:
        raise ValueError("empty clock polynomial")
    for term in body.split("+"):
        m = _MONO.match(term)
        if not term or not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"bad monomial {term!r} in clock polynomial {text!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        k = 0 if m.group(2) is None else int(m.group(3)) if m.group(3) else 1
        coeffs[k] = coeffs.get(k, 0) + c
    top = max(coeffs)
    return [coeffs.get(k, 0) for k in range(top + 1)]


def clock_value(coeffs: Sequence[int], n: int) -> int:
    return sum(c * n ** k for k, c in enumerate(coeffs))


def format_clock(coeffs: Sequence[int]) -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else "x" if k == 1 else f"x^{k}"
        parts.append(str(c) if not mono else mono if c == 1 else f"{c}*{mono}")
    return " + ".join(parts) or "0"


def horner_term(coeffs: Sequence[int], var: str = "x") -> TApp | TVar:
    """``a0 + x*(a1 + x*(...))`` over zero/succ/add/mult, constants added first."""
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        return TApp("zero")
    x = TVar(var)
    h = _numeral(cs[-1])
    for a in reversed(cs[:-1]):
        h = x if h == _numeral(1) else TApp("mult", (x, h))
        if a:
            h = TApp("add", (_numeral(a), h))
    return h


def arithmetic_program() -> Polygraph:
    from .fixtures import text
    return load_program(text("arith.poly"))


def poly_diagram(coeffs: Sequence[int], P: Polygraph | None = None) -> Diagram:
    """One-input diagram over the arithmetic program computing the clock polynomial."""
    P = P if P is not None else arithmetic_program()
    return term_diagram(P, [("x", "n")], horner_term(coeffs))


def poly_interpretation(coeffs: Sequence[int], interp=None):
    """Symbolic current and heat of ``poly_diagram(coeffs)`` (as expressions in ``x0``)."""
    from .fixtures import interpretation
    interp = interp if interp is not None else interpretation("arith")
    d = poly_diagram(coeffs, interp.polygraph)
    (cur,) = symbolic_current(interp.phi, d)
    heat = symbolic_heat(interp.heat, interp.phi, d)
    return _simplify(cur), _simplify(heat)


def _simplify(e):
    p = to_poly(e, 1)
    return poly_to_expr(p) if p is not None else e


# ---------------------------------------------------------------------------
# compilation

def _signature(M: TuringMachine, clocked: bool) -> list[str]:
    letters = [letter_cell(s) for s in M.symbols]
    step_src = "n * w * w" if clocked else "w * w"
    lines = ["sorts: n, w" if clocked else "sorts: w", "constructors:"]
    if clocked:
        lines += ["  zero : -> n", "  succ : n -> n"]
    lines += ["  nil : -> w", *[f"  {a} : w -> w" for a in letters], "functions:"]
    if clocked:
        lines += ["  add : n * n -> n", "  mult : n * n -> n", "  size : w -> n"]
    lines.append("  f : w -> w")
    lines += [f"  {step_cell(q, a)} : {step_src} -> w" for q in M.states for a in M.symbols]
    return lines


def _transition_rules(M: TuringMachine, clocked: bool) -> list[str]:
    """One rule per transition case; the counter (if any) loses one ``succ``."""
    n_in, n_out = ("succ(n), ", "n, ") if clocked else ("", "")
    out = []
    for q in M.states:
        if q == M.final:
            continue
        for a in M.symbols:
            q2, c, d = M.delta[(q, a)]
            cc = letter_cell(c)
            lhs = step_cell(q, a)
            if d == LEFT:
                out.append(f"{lhs}({n_in}nil, r) => {step_cell(q2, BLANK)}({n_out}nil, {cc}(r))")
                for b in M.symbols:
                    out.append(f"{lhs}({n_in}{letter_cell(b)}(l), r) => "
                               f"{step_cell(q2, b)}({n_out}l, {cc}(r))")
            else:
                out.append(f"{lhs}({n_in}l, nil) => {step_cell(q2, BLANK)}({n_out}{cc}(l), nil)")
                for b in M.symbols:
                    out.append(f"{lhs}({n_in}l, {letter_cell(b)}(r)) => "
                               f"{step_cell(q2, b)}({n_out}{cc}(l), r)")
    return out


def compile_tm_source(M: TuringMachine) -> str:
    """Program text of the plain compilation."""
    M.validate()
    lines = [f"# Compiled from a Turing machine with states {' '.join(M.states)}.", *_signature(M, False),
             "rules:", f"  f(x) => {step_cell(M.initial, BLANK)}(nil, x)"]
    lines += [f"  {r}" for r in _transition_rules(M, False)]
    lines += [f"  {step_cell(M.final, a)}(l, r) => r" for a in M.symbols]
    return "\n".join(lines) + "\n"


def compile_tm(M: TuringMachine) -> Polygraph:
    return load_program(compile_tm_source(M))


def expected_rule_count(M: TuringMachine, clocked: bool = False) -> int:
    """Computation rules produced by the compilation of ``M``."""
    k = len(M.symbols)
    running = len(M.states) - 1
    n = 1 + running * k * (1 + k) + k
    if clocked:
        n += 4 + (1 + k) + running * k  # arithmetic, size, zero-counter guards
    return n


def compile_clocked_tm_source(M: TuringMachine, coeffs: Sequence[int]) -> str:
    """Program text of the clocked compilation with clock polynomial ``coeffs``."""
    M.validate()
    clock = horner_term(coeffs, "s")
    lines = [f"# Compiled from a Turing machine with states {' '.join(M.states)},",
             f"# clocked by P(x) = {format_clock(coeffs)}.", *_signature(M, True), "rules:",
             "  add(zero, y) => y",
             "  add(succ(x), y) => succ(add(x, y))",
             "  mult(x, zero) => zero",
             "  mult(x, succ(y)) => add(x, mult(x, y))",
             "  size(nil) => zero"]
    lines += [f"  size({letter_cell(a)}(x)) => succ(size(x))" for a in M.symbols]
    init = TLet(("s",), TApp("size", (TVar("x"),)),
                TApp(step_cell(M.initial, BLANK), (clock, TApp("nil"), TVar("x"))))
    lines.append(f"  f(x) => {init}")
    lines += [f"  {r}" for r in _transition_rules(M, True)]
    lines += [f"  {step_cell(q, a)}(zero, l, r) => nil"
              for q in M.states if q != M.final for a in M.symbols]
    lines += [f"  {step_cell(M.final, a)}(n, l, r) => r" for a in M.symbols]
    return "\n".join(lines) + "\n"


def compile_clocked_tm(M: TuringMachine, coeffs: Sequence[int]) -> Polygraph:
    return load_program(compile_clocked_tm_source(M, coeffs))


def clocked_interp_source(M: TuringMachine, coeffs: Sequence[int]) -> str:
    """Interpretation of the clocked program used for its certificate.

    Steps carry the sum of their inputs and cost the counter; ``f`` carries
    ``phi(P)(x) + x + 1`` and costs ``heat(P)(x) + phi(P)(x) + x + 1``, where
    ``phi(P)`` and ``heat(P)`` are computed from the clock diagram.
    """
    cur, heat = poly_interpretation(coeffs)
    pc, ph = render(cur, ["x"]), render(heat, ["x"])
    lines = [f"# Certificate interpretation for the clock P(x) = {format_clock(coeffs)}.",
             "domain n = N-{0}", "domain w = N-{0}",
             "current zero = 1", "current succ(x) = x + 1",
             "current add(x, y) = x + y", "current mult(x, y) = x * y",
             "current nil = 1", *[f"current {letter_cell(a)}(x) = x + 1" for a in M.symbols],
             "current size(x) = x",
             f"current f(x) = {pc} + x + 1",
             *[f"current {step_cell(q, a)}(x, y, z) = x + y + z" for q in M.states for a in M.symbols],
             "heat add(x, y) = x", "heat mult(x, y) = (x + 1) * y", "heat size(x) = x",
             f"heat f(x) = {ph} + {pc} + x + 1",
             *[f"heat {step_cell(q, a)}(x, y, z) = x" for q in M.states for a in M.symbols]]
    return "\n".join(lines) + "\n"
