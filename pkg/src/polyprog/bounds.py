"""Complexity bounds of additive interpretations and trace monitoring.

For a function gate ``f`` with inputs of sizes ``x = (x1, ..., xn)`` and the
largest constructor constant ``gamma``:

* ``M_f(x)``: largest current of ``f`` at inputs ``gamma*x`` (bounds every
  wire current during a computation);
* ``P_f(x)``: heat of ``f`` at ``gamma*x`` (bounds the computation steps);
* ``S_f(x) = K * M_f(x)^2``: bound on the structure-heat increase caused by a
  single computation step, where ``K`` is the largest number of structure
  gates in a computation rule's right-hand side;
* ``Q_f(x) = P_f(x) * (1 + S_f(x))``: bound on the total number of steps.

Bounds are kept as composed expressions and evaluated on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .engine.rewrite import DEFAULT_FUEL, LEFTMOST, Trace
from .engine.semantics import run
from .frontend.values import encode_value
from .interp.checks import check_additive
from .interp.expr import Const, Expr, Var, add, evaluate, mul, power, render, substitute
from .interp.interpretation import SUM, Interpretation, derived_max, structure_heat
from .signature import COMPUTATION, STRUCTURE, Polygraph, TwoCell, size


class NotAdditive(ValueError):
    """The interpretation has no additive constructor currents."""


class BoundViolation(AssertionError):
    """A run exceeded one of its predicted bounds."""

    def __init__(self, report: "MonitorReport") -> None:
        super().__init__("; ".join(report.violations))
        self.report = report


# ---------------------------------------------------------------------------
# bound maps

@dataclass(frozen=True)
class FunctionBounds:
    name: str
    arity: int
    M: Expr
    S: Expr
    P: Expr
    Q: Expr

    def at(self, x: Sequence[int]) -> dict:
        """All four bounds at the input sizes ``x``."""
        x = [int(v) for v in x]
        return {k: int(evaluate(getattr(self, k), x)) for k in ("M", "S", "P", "Q")}

    def to_json(self) -> dict:
        return {k: render(getattr(self, k)) for k in ("M", "S", "P", "Q")}


@dataclass(frozen=True)
class BoundSet:
    gamma: int
    K: int
    functions: dict  # name -> FunctionBounds

    def __getitem__(self, name: str) -> FunctionBounds:
        return self.functions[name]

    def to_json(self) -> dict:
        return {"gamma": self.gamma, "K": self.K,
                "functions": {k: v.to_json() for k, v in sorted(self.functions.items())}}


def structure_count(P: Polygraph) -> int:
    """Largest number of structure gates in a computation rule's right-hand side."""
    return max((size(r.rhs, lambda c: c.kind == STRUCTURE) for r in P.computation_rules), default=0)


def _scaled(cell: TwoCell, gamma: int) -> list[Expr]:
    return [mul(Const(gamma), Var(i)) if gamma != 1 else Var(i) for i in range(cell.arity)]


def compute_bounds(P: Polygraph, interp: Interpretation) -> BoundSet:
    """Bound maps of every function gate of ``P``."""
    verdict, gamma = check_additive(interp.phi)
    if not verdict.ok:
        raise NotAdditive(verdict.message)
    K = structure_count(P)
    maxheat = derived_max(interp.phi)
    out = {}
    for f in P.functions:
        xs = _scaled(f, gamma)
        M = substitute(maxheat.expr(f), xs)
        Pf = substitute(interp.heat.expr(f), xs)
        S = mul(Const(K), power(M, 2))
        Q = mul(Pf, add(Const(1), S))
        out[f.name] = FunctionBounds(f.name, f.arity, M, S, Pf, Q)
    return BoundSet(gamma, K, out)


def nu(args: Sequence, P: Polygraph) -> tuple[int, ...]:
    """Sizes (number of constructor gates) of the argument values."""
    return tuple(len(encode_value(a, P).ops) for a in args)


# ---------------------------------------------------------------------------
# sampling quantities along a run

class Sampler:
    """Callable recording heat, largest current and structure heat of a diagram.

    Used as the ``sampler`` of ``normalize``: it receives the source word and
    the list of ``(offset, cell)`` gates of the current diagram.
    """

    def __init__(self, interp: Interpretation) -> None:
        phi = interp.phi
        sh = structure_heat(phi)
        self._sum = interp.heat.monoid == SUM
        self._cells = {cell.name: (phi.fn(cell), interp.heat.fn(cell), sh.fn(cell))
                       for cell in interp.polygraph.two_cells.values()}

    def __call__(self, src, ops) -> dict:
        cur: list = [0] * len(src)
        heat = 0
        top = 0
        sheat = 0
        for off, cell in ops:
            cf, hf, sf = self._cells[cell.name]
            k = len(cell.src)
            args = cur[off:off + k]
            heat = heat + hf(*args) if self._sum else max(heat, hf(*args))
            sheat += sf(*args)
            out = cf(*args)
            top = max(top, *args, *out) if (args or out) else top
            cur[off:off + k] = out
        return {"heat": int(heat), "maxheat": int(top), "structure_heat": int(sheat)}


# ---------------------------------------------------------------------------
# monitoring

@dataclass
class MonitorReport:
    function: str
    sizes: tuple
    predicted: dict
    computation_steps: int
    total_steps: int
    max_current: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def margins(self) -> dict:
        return {"P": self.predicted["P"] - self.computation_steps,
                "Q": self.predicted["Q"] - self.total_steps,
                "M": self.predicted["M"] - self.max_current}

    def to_json(self) -> dict:
        return {"function": self.function, "sizes": list(self.sizes), "predicted": self.predicted,
                "observed": {"computation": self.computation_steps, "total": self.total_steps,
                             "max_current": self.max_current},
                "margins": self.margins, "ok": self.ok, "violations": list(self.violations)}


def _samples(trace: Trace) -> list[dict]:
    if trace.initial_samples is None or any(e.samples is None for e in trace.events):
        raise ValueError("trace was recorded without a sampler")
    return [trace.initial_samples] + [e.samples for e in trace.events]


def monitor_trace(trace: Trace, f: str, args: Sequence, bounds: BoundSet, P: Polygraph,
                  raise_on_violation: bool = True) -> MonitorReport:
    """Compare a sampled run of ``f`` on ``args`` with the predicted bounds.

    Checks computation steps against ``P_f``, total steps against ``Q_f`` and
    the running maximum of the largest current against ``M_f``, all at the
    argument sizes.
    """
    sizes = nu(args, P)
    predicted = bounds[f].at(sizes)
    samples = _samples(trace)
    top = max(s["maxheat"] for s in samples)
    report = MonitorReport(f, sizes, predicted, trace.computation, trace.total, top)
    if trace.computation > predicted["P"]:
        report.violations.append(f"computation steps {trace.computation} exceed P = {predicted['P']}")
    if trace.total > predicted["Q"]:
        report.violations.append(f"total steps {trace.total} exceed Q = {predicted['Q']}")
    if top > predicted["M"]:
        report.violations.append(f"largest current {top} exceeds M = {predicted['M']}")
    if report.violations and raise_on_violation:
        raise BoundViolation(report)
    return report


def monitored_run(P: Polygraph, interp: Interpretation, f: str, args: Sequence,
                  bounds: BoundSet | None = None, strategy: str = LEFTMOST, fuel: int = DEFAULT_FUEL,
                  raise_on_violation: bool = True):
    """Evaluate ``f`` on ``args`` with sampling; returns ``(values, trace, report)``."""
    bounds = bounds or compute_bounds(P, interp)
    values, trace = run(P, f, args, strategy, fuel, Sampler(interp))
    return values, trace, monitor_trace(trace, f, args, bounds, P, raise_on_violation)


def trace_law_violations(trace: Trace, bounds: BoundSet, f: str, sizes: Sequence[int]) -> list[str]:
    """Step-by-step laws of a run under a certified interpretation.

    * heat never increases, and drops strictly at every computation step;
    * the number of computation steps is at most the initial heat;
    * the largest current never increases, and stays below ``M_f``;
    * a computation step raises the structure heat by at most ``S_f``.
    """
    samples = _samples(trace)
    b = bounds[f].at(sizes)
    out = []
    if trace.computation > samples[0]["heat"]:
        out.append(f"{trace.computation} computation steps exceed initial heat {samples[0]['heat']}")
    for e, prev, cur in zip(trace.events, samples, samples[1:]):
        where = f"step {e.step} ({e.rule})"
        if cur["heat"] > prev["heat"]:
            out.append(f"{where}: heat increases {prev['heat']} -> {cur['heat']}")
        if e.kind == COMPUTATION and cur["heat"] >= prev["heat"]:
            out.append(f"{where}: heat does not drop ({prev['heat']} -> {cur['heat']})")
        if cur["maxheat"] > prev["maxheat"]:
            out.append(f"{where}: largest current increases {prev['maxheat']} -> {cur['maxheat']}")
        if cur["maxheat"] > b["M"]:
            out.append(f"{where}: largest current {cur['maxheat']} exceeds M = {b['M']}")
        if e.kind == COMPUTATION and cur["structure_heat"] - prev["structure_heat"] > b["S"]:
            out.append(f"{where}: structure heat rises by {cur['structure_heat'] - prev['structure_heat']}"
                       f" > S = {b['S']}")
    if samples[0]["maxheat"] > b["M"]:
        out.append(f"initial largest current {samples[0]['maxheat']} exceeds M = {b['M']}")
    return out
