"""Function semantics, completeness and orthogonality of computation rules."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from ..frontend.ast import NotAValue, TApp, TTuple
from ..frontend.values import decode_value, encode_value
from ..signature import (
    CONSTRUCTOR,
    FUNCTION,
    Diagram,
    Polygraph,
    ThreeCell,
    TwoCell,
    compose1,
    tensor,
    validate_polygraph,
)
from .rewrite import DEFAULT_FUEL, LEFTMOST, PCons, PVar, Trace, compile_rule, normalize


class Undefined(ValueError):
    """The normal form of an application is not a value."""

    def __init__(self, message: str, normal_form: Diagram, trace: Trace) -> None:
        super().__init__(message)
        self.normal_form = normal_form
        self.trace = trace


def application(P: Polygraph, f: TwoCell | str, args: Sequence) -> Diagram:
    """The diagram ``(t1 * ... * tn) ; f`` for value terms ``args``."""
    cell = P.cell(f) if isinstance(f, str) else f
    if len(args) != cell.arity:
        raise ValueError(f"{cell.name} expects {cell.arity} arguments, got {len(args)}")
    for a, s in zip(args, cell.src):
        d = encode_value(a, P)
        if d.target != (s,):
            raise NotAValue(f"argument {a} is not of sort {s}")
    return compose1(tensor(*(encode_value(a, P) for a in args)), Diagram.cell(cell))


def run(P: Polygraph, f: TwoCell | str, args: Sequence, strategy: str = LEFTMOST,
        fuel: int = DEFAULT_FUEL, sampler=None) -> tuple[list, Trace]:
    """Evaluate ``f`` on ``args``; returns the result terms and the trace."""
    d = application(P, f, args)
    nf, trace = normalize(d, P, strategy, fuel, sampler)
    try:
        out = decode_value(nf)
    except NotAValue:
        raise Undefined(f"{P.cell(f).name if isinstance(f, str) else f.name} is undefined on "
                        f"({', '.join(map(str, args))})", nf, trace) from None
    return (list(out.items) if isinstance(out, TTuple) else [out]), trace


def evaluate(P: Polygraph, f: TwoCell | str, args: Sequence, strategy: str = LEFTMOST,
             fuel: int = DEFAULT_FUEL) -> list:
    """The value(s) computed by ``f`` on ``args``."""
    return run(P, f, args, strategy, fuel)[0]


# ---------------------------------------------------------------------------
# enumeration of values and term-level matching

def values_up_to(P: Polygraph, sort: str, depth: int) -> list:
    """All values of ``sort`` whose constructor tree has height at most ``depth``."""
    return list(_values(P, sort, depth))


def _values(P: Polygraph, sort: str, depth: int) -> tuple:
    key = (id(P), sort, depth)
    hit = _VALUE_CACHE.get(key)
    if hit is not None and hit[0] is P:
        return hit[1]
    out: list = []
    if depth > 0:
        for c in P.constructors_of(sort):
            pools = [_values(P, s, depth - 1) for s in c.src]
            for args in itertools.product(*pools):
                out.append(TApp(c.name, tuple(args)))
    res = tuple(out)
    _VALUE_CACHE[key] = (P, res)
    return res


_VALUE_CACHE: dict = {}


def pattern_matches(pat, term) -> bool:
    if isinstance(pat, PVar):
        return True
    return (isinstance(term, TApp) and term.head == pat.name
            and all(pattern_matches(p, t) for p, t in zip(pat.children, term.args)))


def render_pattern(pat, names=None) -> str:
    if isinstance(pat, (PVar, _TVar)):
        return f"x{pat.index}" if names is None else names(pat)
    if not pat.children:
        return pat.name
    return f"{pat.name}({', '.join(render_pattern(c, names) for c in pat.children)})"


# ---------------------------------------------------------------------------
# completeness

@dataclass
class CompletenessReport:
    depth: int
    checked: int = 0
    counterexamples: list = field(default_factory=list)  # (function, args)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {"ok": self.ok, "depth": self.depth, "checked": self.checked,
                "counterexamples": [{"function": f, "args": [str(a) for a in args]}
                                    for f, args in self.counterexamples]}


def check_completeness(P: Polygraph, depth: int = 4, limit: int = 100) -> CompletenessReport:
    """Every application of a function to values up to ``depth`` must be reducible."""
    report = CompletenessReport(depth)
    by_head: dict = {}
    for r in P.computation_rules:
        cr = compile_rule(r)
        by_head.setdefault(cr.head, []).append(cr.children)
    for f in P.functions:
        pats = by_head.get(f.name, [])
        pools = [_values(P, s, depth) for s in f.src]
        for args in itertools.product(*pools):
            report.checked += 1
            if not any(all(pattern_matches(p, a) for p, a in zip(ps, args)) for ps in pats):
                if len(report.counterexamples) < limit:
                    report.counterexamples.append((f.name, tuple(args)))
                else:
                    return report
    return report


# ---------------------------------------------------------------------------
# orthogonality

@dataclass(frozen=True)
class Overlap:
    first: str
    second: str
    term: str
    weak: bool

    def to_json(self) -> dict:
        return {"rules": [self.first, self.second], "term": self.term, "weak": self.weak}


@dataclass
class OrthogonalityReport:
    overlaps: list = field(default_factory=list)
    nonlinear: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.nonlinear and all(o.weak for o in self.overlaps)

    def to_json(self) -> dict:
        return {"ok": self.ok, "overlaps": [o.to_json() for o in self.overlaps],
                "nonlinear": list(self.nonlinear)}


@dataclass(frozen=True)
class _TVar:
    side: int
    index: int


def _tag(pat, side):
    if isinstance(pat, PVar):
        return _TVar(side, pat.index)
    return PCons(pat.name, tuple(_tag(c, side) for c in pat.children))


def _unify(p, q):
    """Most general common instance of two variable-disjoint linear patterns."""
    if isinstance(p, _TVar):
        return q
    if isinstance(q, _TVar):
        return p
    if p.name != q.name:
        return None
    kids = []
    for a, b in zip(p.children, q.children):
        u = _unify(a, b)
        if u is None:
            return None
        kids.append(u)
    return PCons(p.name, tuple(kids))


def _bind(pat, inst, out: dict) -> None:
    """Map the variables of ``pat`` to the subterms of its instance ``inst``."""
    if isinstance(pat, PVar):
        out[pat.index] = inst
        return
    for a, b in zip(pat.children, inst.children):
        _bind(a, b, out)


def _open_diagram(P: Polygraph, t, sort: str) -> Diagram:
    if isinstance(t, _TVar):
        return Diagram.identity((sort,))
    c = P.cell(t.name)
    return compose1(tensor(*(_open_diagram(P, a, s) for a, s in zip(t.children, c.src))),
                    Diagram.cell(c))


def _instance(P: Polygraph, rule: ThreeCell, children, overlap) -> Diagram:
    binding: dict = {}
    for p, t in zip(children, overlap):
        _bind(p, t, binding)
    sorts = rule.lhs.source
    inst = tensor(*(_open_diagram(P, binding[i], sorts[i]) for i in range(len(sorts))))
    return compose1(inst, rule.rhs)


def check_orthogonal(P: Polygraph) -> OrthogonalityReport:
    """Left-linearity plus pairwise non-overlap of rules sharing a head.

    Overlapping pairs whose instantiated right-hand sides agree after
    normalizing with the structure rules only are flagged as weak.
    """
    report = OrthogonalityReport()
    for v in validate_polygraph(P).violations:
        if v.kind == "LinearityViolation":
            report.nonlinear.append(v.where)
    by_head: dict = {}
    for r in P.computation_rules:
        by_head.setdefault(r.head.name, []).append(compile_rule(r))
    structure = P.structure_rules
    for rules in by_head.values():
        for a, b in itertools.combinations(rules, 2):
            overlap = []
            for p, q in zip(a.children, b.children):
                u = _unify(_tag(p, 0), _tag(q, 1))
                if u is None:
                    overlap = None
                    break
                overlap.append(u)
            if overlap is None:
                continue
            da = normalize(_instance(P, a.rule, a.children, overlap), P, rules=structure)[0]
            db = normalize(_instance(P, b.rule, b.children, overlap), P, rules=structure)[0]
            names = lambda v: f"{'xy'[v.side]}{v.index}"
            text = f"{a.head}({', '.join(render_pattern(t, names) for t in overlap)})"
            report.overlaps.append(Overlap(a.rule.name, b.rule.name, text, da == db))
    return report
