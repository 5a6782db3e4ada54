"""Current (functorial) and heat (differential) interpretations.

A current interpretation gives each wire type a domain of positive naturals
and each gate a monotone map from input currents to output currents.  A heat
interpretation gives each gate a natural-number cost of its input currents;
the heat of a diagram adds (or maxes) the cost of every gate at the currents
flowing into it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..signature import CONSTRUCTOR, FUNCTION, STRUCTURE, Diagram, Polygraph, TwoCell
from .domains import POSITIVE, Domain, DomainViolation
from .expr import (
    Const,
    Expr,
    Tup,
    Var,
    add,
    compile_expr,
    maximum,
    mul,
    power,
    substitute,
)

SUM = "sum"
MAX = "max"


class MissingEntry(KeyError):
    """An interpretation has no entry for a gate that needs one."""


def cartesian_current(cell: TwoCell) -> Tup:
    """Swap for crossings, copy for duplicators, nothing for erasers."""
    kind = cell.tag[0]
    if kind == "tau":
        return Tup((Var(1), Var(0)))
    if kind == "delta":
        return Tup((Var(0), Var(0)))
    return Tup(())


def _as_tuple(e: Expr) -> Tup:
    return e if isinstance(e, Tup) else Tup((e,))


@dataclass
class FunctorialInterp:
    """Domains per wire type and current maps per gate."""

    polygraph: Polygraph
    domains: Mapping[str, Domain]
    entries: Mapping[str, Expr]
    _fns: dict = field(default_factory=dict, repr=False, compare=False)
    _vfns: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.entries = {k: _as_tuple(v) for k, v in self.entries.items()}
        self.domains = dict(self.domains)

    def domain(self, sort: str) -> Domain:
        return self.domains.get(sort, POSITIVE)

    def expr(self, cell: TwoCell) -> Tup:
        e = self.entries.get(cell.name)
        if e is not None:
            return e
        if cell.kind == STRUCTURE:
            return cartesian_current(cell)
        raise MissingEntry(f"no current map for {cell.name}")

    def fn(self, cell: TwoCell):
        f = self._fns.get(cell.name)
        if f is None:
            f = compile_expr(self.expr(cell), cell.arity)
            self._fns[cell.name] = f
        return f

    def vfn(self, cell: TwoCell):
        f = self._vfns.get(cell.name)
        if f is None:
            f = compile_expr(self.expr(cell), cell.arity, True)
            self._vfns[cell.name] = f
        return f

    def apply(self, cell: TwoCell, args: Sequence[int]) -> tuple:
        return self.fn(cell)(*args)


@dataclass
class DifferentialInterp:
    """Heat maps per gate combined under ``monoid`` (``sum`` or ``max``)."""

    polygraph: Polygraph
    entries: Mapping[str, Expr]
    monoid: str = SUM
    _fns: dict = field(default_factory=dict, repr=False, compare=False)
    _vfns: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.monoid not in (SUM, MAX):
            raise ValueError(f"unknown monoid {self.monoid!r}")
        self.entries = dict(self.entries)

    def expr(self, cell: TwoCell) -> Expr:
        e = self.entries.get(cell.name)
        if e is not None:
            return e
        if cell.kind in (CONSTRUCTOR, STRUCTURE):
            return Const(0)
        raise MissingEntry(f"no heat map for {cell.name}")

    def fn(self, cell: TwoCell):
        f = self._fns.get(cell.name)
        if f is None:
            f = compile_expr(self.expr(cell), cell.arity)
            self._fns[cell.name] = f
        return f

    def vfn(self, cell: TwoCell):
        f = self._vfns.get(cell.name)
        if f is None:
            f = compile_expr(self.expr(cell), cell.arity, True)
            self._vfns[cell.name] = f
        return f

    def combine(self, a, b):
        if self.monoid == SUM:
            return a + b
        return np.maximum(a, b) if isinstance(a, np.ndarray) or isinstance(b, np.ndarray) else max(a, b)


@dataclass
class Interpretation:
    """A current interpretation together with a heat interpretation."""

    phi: FunctorialInterp
    heat: DifferentialInterp

    @property
    def polygraph(self) -> Polygraph:
        return self.phi.polygraph

    def derived_max(self) -> DifferentialInterp:
        return derived_max(self.phi)

    def structure_heat(self) -> DifferentialInterp:
        return structure_heat(self.phi)


# ---------------------------------------------------------------------------
# derived interpretations

def derived_max(phi: FunctorialInterp) -> DifferentialInterp:
    """The max-heat interpretation: each gate costs its largest current."""
    entries = {}
    for cell in phi.polygraph.two_cells.values():
        try:
            outs = phi.expr(cell).items
        except MissingEntry:
            continue
        ins = [Var(i) for i in range(cell.arity)]
        entries[cell.name] = maximum(*ins, *outs) if ins or outs else Const(0)
    return DifferentialInterp(phi.polygraph, entries, MAX)


def structure_heat(phi: FunctorialInterp) -> DifferentialInterp:
    """Crossing ``x*y``, duplicator ``x^2``, eraser ``x``; everything else 0."""
    entries: dict = {}
    for cell in phi.polygraph.two_cells.values():
        if cell.kind != STRUCTURE:
            entries[cell.name] = Const(0)
        elif cell.tag[0] == "tau":
            entries[cell.name] = mul(Var(0), Var(1))
        elif cell.tag[0] == "delta":
            entries[cell.name] = power(Var(0), 2)
        else:
            entries[cell.name] = Var(0)
    return DifferentialInterp(phi.polygraph, entries, SUM)


def size_interpretation(P: Polygraph) -> FunctorialInterp:
    """Currents counting constructors: each constructor adds 1 to its inputs."""
    entries = {c.name: Tup((add(*[Var(i) for i in range(c.arity)], Const(1)),))
               for c in P.constructors}
    return FunctorialInterp(P, {s: POSITIVE for s in P.one_cells}, entries)


# ---------------------------------------------------------------------------
# scalar evaluation

def _check(phi: FunctorialInterp, sorts, values, where: str) -> None:
    for s, v in zip(sorts, values):
        if v not in phi.domain(s):
            raise DomainViolation(f"current {v} of wire {s} is outside {phi.domain(s)} ({where})")


def eval_current(phi: FunctorialInterp, d: Diagram, x: Sequence[int] = (), check: bool = True) -> tuple:
    """Output currents of ``d`` on input currents ``x``."""
    x = tuple(int(v) for v in x)
    if len(x) != len(d.source):
        raise ValueError(f"expected {len(d.source)} input currents, got {len(x)}")
    if check:
        _check(phi, d.source, x, "input")
    cur = list(x)
    for s in d.slices:
        off = len(s.left)
        k = len(s.cell.src)
        out = phi.fn(s.cell)(*cur[off:off + k])
        if check:
            _check(phi, s.cell.tgt, out, s.cell.name)
        cur[off:off + k] = out
    return tuple(cur)


def eval_heat(dd: DifferentialInterp, phi: FunctorialInterp, d: Diagram, x: Sequence[int] = (),
              check: bool = True) -> int:
    """Heat of ``d`` on input currents ``x``."""
    x = tuple(int(v) for v in x)
    if check:
        _check(phi, d.source, x, "input")
    cur = list(x)
    total = 0
    combine = (lambda a, b: a + b) if dd.monoid == SUM else max
    for s in d.slices:
        off = len(s.left)
        k = len(s.cell.src)
        args = cur[off:off + k]
        total = combine(total, dd.fn(s.cell)(*args))
        out = phi.fn(s.cell)(*args)
        if check:
            _check(phi, s.cell.tgt, out, s.cell.name)
        cur[off:off + k] = out
    return total


def current_of_value(phi: FunctorialInterp, d: Diagram) -> int:
    (v,) = eval_current(phi, d, ())
    return v


# ---------------------------------------------------------------------------
# vectorized evaluation over grids of sample points

def eval_current_vec(phi: FunctorialInterp, d: Diagram, xs: Sequence[np.ndarray], shape) -> list:
    """Vectorized ``eval_current``; raises DomainViolation with a witness."""
    cur = [np.broadcast_to(np.asarray(v, dtype=np.int64), shape) for v in xs]
    for s in d.slices:
        off = len(s.left)
        k = len(s.cell.src)
        out = phi.vfn(s.cell)(*cur[off:off + k])
        out = [np.broadcast_to(np.asarray(o, dtype=np.int64), shape) for o in out]
        for sort, o in zip(s.cell.tgt, out):
            bad = ~phi.domain(sort).member_mask(o)
            if bad.any():
                i = int(np.argmax(bad))
                point = tuple(int(v.reshape(-1)[i]) for v in xs)
                raise DomainViolation(
                    f"{s.cell.name} produces {int(o.reshape(-1)[i])} outside {phi.domain(sort)} at {point}")
        cur[off:off + k] = out
    return cur


def eval_heat_vec(dd: DifferentialInterp, phi: FunctorialInterp, d: Diagram, xs, shape) -> np.ndarray:
    cur = [np.broadcast_to(np.asarray(v, dtype=np.int64), shape) for v in xs]
    total = np.zeros(shape, dtype=np.int64)
    for s in d.slices:
        off = len(s.left)
        k = len(s.cell.src)
        args = cur[off:off + k]
        h = np.broadcast_to(np.asarray(dd.vfn(s.cell)(*args), dtype=np.int64), shape)
        total = total + h if dd.monoid == SUM else np.maximum(total, h)
        out = phi.vfn(s.cell)(*args)
        cur[off:off + k] = [np.broadcast_to(np.asarray(o, dtype=np.int64), shape) for o in out]
    return total


# ---------------------------------------------------------------------------
# symbolic evaluation (composition of expressions along a diagram)

def symbolic_current(phi: FunctorialInterp, d: Diagram, inputs: Sequence[Expr] | None = None) -> tuple:
    cur = list(inputs) if inputs is not None else [Var(i) for i in range(len(d.source))]
    for s in d.slices:
        off = len(s.left)
        k = len(s.cell.src)
        out = substitute(phi.expr(s.cell), cur[off:off + k]).items
        cur[off:off + k] = list(out)
    return tuple(cur)


def symbolic_heat(dd: DifferentialInterp, phi: FunctorialInterp, d: Diagram,
                  inputs: Sequence[Expr] | None = None) -> Expr:
    cur = list(inputs) if inputs is not None else [Var(i) for i in range(len(d.source))]
    terms = []
    for s in d.slices:
        off = len(s.left)
        k = len(s.cell.src)
        args = cur[off:off + k]
        h = substitute(dd.expr(s.cell), args)
        if not (isinstance(h, Const) and h.value == 0):
            terms.append(h)
        cur[off:off + k] = list(substitute(phi.expr(s.cell), args).items)
    if dd.monoid == SUM:
        return add(*terms) if terms else Const(0)
    return maximum(*terms) if terms else Const(0)


# ---------------------------------------------------------------------------
# heat bound for arbitrary diagrams (clamped extension)

def clamp(phi: FunctorialInterp, sort: str, v: int) -> int:
    """The largest point of the wire's domain not above ``v``."""
    return phi.domain(sort).clamp(v)


def clamped_heat(dd: DifferentialInterp, phi: FunctorialInterp, cell: TwoCell, bound: int) -> int:
    """Heat of ``cell`` with every input at the clamped value of ``bound``."""
    args = [clamp(phi, s, bound) for s in cell.src]
    return dd.fn(cell)(*args)


def heat_bound(interp: Interpretation, d: Diagram, x: Sequence[int] = ()) -> int:
    """Upper bound on ``heat(d)(x)`` from gate counts and the largest current.

    Every wire current inside ``d`` is at most ``m = maxheat(d)(x)``, so each
    gate costs at most its heat with all inputs clamped to ``m``.
    """
    dm = derived_max(interp.phi)
    m = eval_heat(dm, interp.phi, d, x)
    m = max([m, *x]) if x else m
    total = 0
    for s in d.slices:
        total += clamped_heat(interp.heat, interp.phi, s.cell, m)
    return total
