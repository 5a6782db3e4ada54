"""Verdicts for interpretation properties: additivity, cartesianness,
monotonicity and rule compatibility.

Inequalities are first attempted symbolically: both sides are expanded to
polynomials over fresh naturals ``t_i`` (each wire current written as
``step*t_i + base`` from its domain) and the difference must have only
nonnegative coefficients.  Otherwise the check is bounded-exhaustive over
the first ``B`` domain points per coordinate, in lexicographic order, and
the first failing point is reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..signature import CONSTRUCTOR, STRUCTURE, Diagram, ThreeCell
from .domains import Domain, DomainViolation
from .expr import Const, Expr, Tup, compile_expr, linear_form, poly_add, poly_const, poly_nonneg, to_poly
from .interpretation import (
    DifferentialInterp,
    FunctorialInterp,
    Interpretation,
    cartesian_current,
    derived_max,
    eval_current_vec,
    eval_heat_vec,
    structure_heat,
    symbolic_current,
    symbolic_heat,
)

PROVED = "proved"
VERIFIED = "verified"
COUNTEREXAMPLE = "counterexample"

CURRENT = "current"
HEAT = "heat"
MAXHEAT = "maxheat"
STRUCTURE_HEAT = "structure-heat"
KINDS = (CURRENT, HEAT, MAXHEAT, STRUCTURE_HEAT)

DEFAULT_BOUND = 64
MAX_GRID = 1 << 21


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check.

    ``proved``: holds everywhere (symbolic argument or finite domain fully
    enumerated); ``verified``: holds on the first ``bound`` points per
    coordinate; ``counterexample``: fails at ``point`` with the two compared
    values ``lhs`` and ``rhs``.
    """

    status: str
    bound: int | None = None
    point: tuple | None = None
    lhs: object = None
    rhs: object = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status != COUNTEREXAMPLE

    def to_json(self) -> dict:
        out: dict = {"status": self.status}
        if self.bound is not None:
            out["bound"] = self.bound
        if self.point is not None:
            out["point"] = list(self.point)
            out["lhs"] = self.lhs
            out["rhs"] = self.rhs
        if self.message:
            out["message"] = self.message
        return out

    def __str__(self) -> str:
        if self.status == PROVED:
            return "proved"
        if self.status == VERIFIED:
            return f"verified up to {self.bound}"
        where = f" at {self.point}: {self.lhs} vs {self.rhs}" if self.point is not None else ""
        return f"counterexample{where}" + (f" ({self.message})" if self.message else "")


def _jsonable(v):
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    return int(v)


# ---------------------------------------------------------------------------
# grids

def _grid(domains: Sequence[Domain], B: int):
    """Lexicographic grid of domain points; returns coordinate arrays, shape, bound used."""
    infinite = sum(1 for d in domains if not d.finite)
    b = B
    finite_size = 1
    for d in domains:
        if d.finite:
            finite_size *= len(d.points(B))
    while infinite and b > 2 and finite_size * b ** infinite > MAX_GRID:
        b -= 1
    axes = [np.asarray(d.points(b), dtype=np.int64) for d in domains]
    if not axes:
        return [], (1,), b, True
    mesh = np.meshgrid(*axes, indexing="ij")
    shape = mesh[0].shape
    return list(mesh), shape, b, infinite == 0


def _point(mesh, flat_index: int) -> tuple:
    return tuple(int(m.reshape(-1)[flat_index]) for m in mesh)


# ---------------------------------------------------------------------------
# additivity, cartesianness, degrees

def check_additive(phi: FunctorialInterp) -> tuple[Verdict, int | None]:
    """Every constructor current must be ``x1 + ... + xn + c`` with ``c >= 1``."""
    gamma = 0
    for c in phi.polygraph.constructors:
        (e,) = phi.expr(c).items
        form = linear_form(e, c.arity)
        if form is None or any(k != 1 for k in form[0]) or form[1] < 1:
            return Verdict(COUNTEREXAMPLE, message=f"current of {c.name} is not a sum of its inputs "
                                                     f"plus a positive constant"), None
        gamma = max(gamma, form[1])
    return Verdict(PROVED), max(gamma, 1)


def check_cartesian(interp: Interpretation) -> Verdict:
    """Swap/copy/discard currents on structure gates, zero heat on data and structure gates."""
    phi, heat = interp.phi, interp.heat
    for cell in phi.polygraph.two_cells.values():
        if cell.kind == STRUCTURE and phi.expr(cell) != cartesian_current(cell):
            return Verdict(COUNTEREXAMPLE, message=f"current of {cell.name} is not the cartesian map")
        if cell.kind in (STRUCTURE, CONSTRUCTOR):
            h = heat.expr(cell)
            if not (isinstance(h, Const) and h.value == 0):
                return Verdict(COUNTEREXAMPLE, message=f"heat of {cell.name} is not zero")
    return Verdict(PROVED)


def entry_degrees(interp: Interpretation) -> dict:
    """Polynomial degree bound of every current and heat entry."""
    from .expr import degree
    out = {}
    for cell in interp.polygraph.two_cells.values():
        if cell.kind == STRUCTURE:
            continue
        row = {"current": degree(interp.phi.expr(cell))}
        if cell.kind != CONSTRUCTOR:
            row["heat"] = degree(interp.heat.expr(cell))
        out[cell.name] = row
    return out


# ---------------------------------------------------------------------------
# monotonicity

def check_monotone(e: Expr, domains: Sequence[Domain], B: int = DEFAULT_BOUND) -> Verdict:
    """``e(x) <= e(x')`` whenever ``x'`` is ``x`` with one coordinate advanced
    to its next domain point (successor pairs on the sampled grid)."""
    mesh, shape, b, finite = _grid(domains, B)
    if not domains:
        return Verdict(PROVED)
    f = compile_expr(e, len(domains), True)
    out = f(*mesh)
    items = out if isinstance(e, Tup) else (out,)
    for comp in items:
        vals = np.broadcast_to(np.asarray(comp, dtype=np.int64), shape)
        for axis in range(len(domains)):
            if shape[axis] < 2:
                continue
            diff = np.diff(vals, axis=axis)
            bad = diff < 0
            if bad.any():
                idx = np.unravel_index(int(np.argmax(bad)), bad.shape)
                nxt = list(idx)
                nxt[axis] += 1
                p = tuple(int(m[idx]) for m in mesh)
                q = tuple(int(m[tuple(nxt)]) for m in mesh)
                return Verdict(COUNTEREXAMPLE, b, p, int(vals[idx]), int(vals[tuple(nxt)]),
                               f"decreases from {p} to {q}")
    return Verdict(PROVED if finite else VERIFIED, None if finite else b)


# ---------------------------------------------------------------------------
# compatibility with rules

def heat_for(interp: Interpretation, kind: str) -> DifferentialInterp | None:
    if kind == CURRENT:
        return None
    if kind == HEAT:
        return interp.heat
    if kind == MAXHEAT:
        return derived_max(interp.phi)
    if kind == STRUCTURE_HEAT:
        return structure_heat(interp.phi)
    raise ValueError(f"unknown interpretation kind {kind!r}")


def _symbolic(interp: Interpretation, dd, lhs: Diagram, rhs: Diagram, strict: bool) -> bool:
    phi = interp.phi
    n = len(lhs.source)
    subst = []
    for i, s in enumerate(lhs.source):
        p = phi.domain(s).as_poly(i, n)
        if p is None:
            return False
        subst.append(p)
    try:
        if dd is None:
            ls, rs = symbolic_current(phi, lhs), symbolic_current(phi, rhs)
        else:
            ls, rs = (symbolic_heat(dd, phi, lhs),), (symbolic_heat(dd, phi, rhs),)
    except Exception:  # noqa: BLE001 - any failure just means "not provable this way"
        return False
    for a, b in zip(ls, rs):
        pa, pb = to_poly(a, n, subst), to_poly(b, n, subst)
        if pa is None or pb is None:
            return False
        diff = poly_add(pa, pb, -1)
        if strict:
            diff = poly_add(diff, poly_const(1, n), -1)
        if not poly_nonneg(diff):
            return False
    return True


def compare_diagrams(interp: Interpretation, kind: str, lhs: Diagram, rhs: Diagram,
                     strict: bool = False, B: int = DEFAULT_BOUND, symbolic: bool = True) -> Verdict:
    """Check ``lhs >= rhs`` (``>`` when strict) under the chosen interpretation."""
    dd = heat_for(interp, kind)
    phi = interp.phi
    if symbolic and _symbolic(interp, dd, lhs, rhs, strict):
        return Verdict(PROVED)
    domains = [phi.domain(s) for s in lhs.source]
    mesh, shape, b, finite = _grid(domains, B)
    try:
        if dd is None:
            lv = eval_current_vec(phi, lhs, mesh, shape)
            rv = eval_current_vec(phi, rhs, mesh, shape)
        else:
            eval_current_vec(phi, lhs, mesh, shape)
            eval_current_vec(phi, rhs, mesh, shape)
            lv = [eval_heat_vec(dd, phi, lhs, mesh, shape)]
            rv = [eval_heat_vec(dd, phi, rhs, mesh, shape)]
    except DomainViolation as exc:
        return Verdict(COUNTEREXAMPLE, b, message=str(exc))
    bad = np.zeros(shape, dtype=bool)
    for a, c in zip(lv, rv):
        bad |= (a <= c) if strict else (a < c)
    if bad.any():
        i = int(np.argmax(bad.reshape(-1)))
        lval = tuple(int(a.reshape(-1)[i]) for a in lv)
        rval = tuple(int(c.reshape(-1)[i]) for c in rv)
        if dd is not None:
            lval, rval = lval[0], rval[0]
        return Verdict(COUNTEREXAMPLE, b, _point(mesh, i), _jsonable(lval), _jsonable(rval))
    return Verdict(PROVED if finite else VERIFIED, None if finite else b)


def check_compatible(kind: str, rule: ThreeCell, interp: Interpretation, strict: bool = False,
                     B: int = DEFAULT_BOUND, symbolic: bool = True) -> Verdict:
    """Compare the two sides of ``rule`` pointwise over its source domain."""
    return compare_diagrams(interp, kind, rule.lhs, rule.rhs, strict, B, symbolic)


def check_ranges(interp: Interpretation, B: int = DEFAULT_BOUND) -> dict:
    """Verdict per data gate that its currents stay inside the declared domains."""
    phi = interp.phi
    out = {}
    for cell in phi.polygraph.constructors + phi.polygraph.functions:
        d = Diagram.cell(cell)
        mesh, shape, b, finite = _grid([phi.domain(s) for s in cell.src], B)
        try:
            eval_current_vec(phi, d, mesh, shape)
            out[cell.name] = Verdict(PROVED if finite else VERIFIED, None if finite else b)
        except DomainViolation as exc:
            out[cell.name] = Verdict(COUNTEREXAMPLE, b, message=str(exc))
    return out
