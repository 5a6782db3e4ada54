"""Redex search, rule application and normalization.

Rule sources are constructor trees under a single head gate, so matching
starts at a candidate head slice and follows each input wire back to the
slice producing it.  To rewrite, the matched slices are gathered into a
contiguous block by exchanging independent neighbours, the block is replaced
by the rule's right-hand side at the same horizontal offset, and the result
is brought back to exchange normal form.

Internally diagrams are handled as a source word plus a list of
``(offset, cell)`` pairs; the public functions accept and return
``Diagram`` objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from ..signature import (
    COMPUTATION,
    STRUCTURE,
    Diagram,
    Polygraph,
    ThreeCell,
    normalize_ops,
    swap_ops,
)

LEFTMOST = "leftmost-topmost"
STRUCTURE_EAGER = "structure-eager"
STRATEGIES = (LEFTMOST, STRUCTURE_EAGER)
DEFAULT_FUEL = 10 ** 7


class StaleMatch(ValueError):
    """The diagram no longer contains the matched slices."""


class FuelExhausted(RuntimeError):
    """Normalization stopped after using up its rewrite budget."""

    def __init__(self, trace: "Trace", diagram: Diagram) -> None:
        super().__init__(f"fuel exhausted after {len(trace.events)} rewrites")
        self.trace = trace
        self.diagram = diagram


# ---------------------------------------------------------------------------
# compiled patterns

@dataclass(frozen=True)
class PVar:
    index: int


@dataclass(frozen=True)
class PCons:
    name: str
    children: tuple


@dataclass(frozen=True)
class CompiledRule:
    rule: ThreeCell
    head: str
    children: tuple  # one pattern per head input
    nvars: int
    rhs_ops: tuple
    lhs_size: int
    rhs_size: int


def compile_rule(rule: ThreeCell) -> CompiledRule:
    lhs = rule.lhs
    prod: list = [("v", i) for i in range(len(lhs.source))]
    ins = []
    for s in lhs.slices:
        off = len(s.left)
        k = s.cell.arity
        ins.append(prod[off:off + k])
        prod[off:off + k] = [("s", len(ins) - 1)] * s.cell.coarity

    def node(ref):
        if ref[0] == "v":
            return PVar(ref[1])
        j = ref[1]
        return PCons(lhs.slices[j].cell.name, tuple(node(r) for r in ins[j]))

    head = len(lhs.slices) - 1
    children = tuple(node(r) for r in ins[head])
    return CompiledRule(rule, lhs.slices[head].cell.name, children, len(lhs.source),
                        rule.rhs.ops, len(lhs.slices), len(rule.rhs.slices))


_INDEX_CACHE: dict = {}


def rule_index(P: Polygraph) -> dict[str, list[CompiledRule]]:
    """Compiled rules grouped by the name of their head gate."""
    hit = _INDEX_CACHE.get(id(P))
    if hit is not None and hit[0] is P:
        return hit[1]
    index: dict[str, list[CompiledRule]] = {}
    for r in P.three_cells:
        cr = compile_rule(r)
        index.setdefault(cr.head, []).append(cr)
    if len(_INDEX_CACHE) > 64:
        _INDEX_CACHE.clear()
    _INDEX_CACHE[id(P)] = (P, index)
    return index


# ---------------------------------------------------------------------------
# matching

@dataclass(frozen=True)
class Match:
    """An occurrence of a rule source in a diagram.

    ``bound_wires[i]`` is the producer of the wire feeding variable ``i``:
    ``None`` for a diagram input, else ``(slice index, output port)``.
    """

    rule: ThreeCell
    anchor: int
    offset: int
    covered: tuple
    bound_wires: tuple
    fingerprint: tuple = field(default=(), repr=False, compare=False)
    _compiled: CompiledRule | None = field(default=None, repr=False, compare=False)
    _ins: tuple = field(default=(), repr=False, compare=False)

    @property
    def kind(self) -> str:
        return self.rule.kind


def _match_children(pats, refs, ops, ins, covered, binds) -> bool:
    for p, r in zip(pats, refs):
        if isinstance(p, PVar):
            binds[p.index] = r
            continue
        if r is None or r[1] != 0:
            return False
        j = r[0]
        if ops[j][1].name != p.name:
            return False
        covered.append(j)
        if not _match_children(p.children, ins[j], ops, ins, covered, binds):
            return False
    return True


def _try(cr: CompiledRule, i: int, refs, ops, ins):
    covered: list = []
    binds: list = [None] * cr.nvars
    if _match_children(cr.children, refs, ops, ins, covered, binds):
        return covered, binds
    return None


def _scan(src, ops, index, strategy: str, start: int = 0, collect: bool = False):
    """Scan slices top to bottom; returns the chosen match (or all of them)."""
    prod: list = [None] * len(src)
    ins: list = []
    found = []
    first_comp = None
    for i, (off, cell) in enumerate(ops):
        k = len(cell.src)
        refs = prod[off:off + k]
        ins.append(refs)
        n_out = len(cell.tgt)
        prod[off:off + k] = [(i, p) for p in range(n_out)] if n_out != 1 else [(i, 0)]
        if i < start:
            continue
        cands = index.get(cell.name)
        if not cands:
            continue
        for cr in cands:
            hit = _try(cr, i, refs, ops, ins)
            if hit is None:
                continue
            m = (cr, i, off, hit[0], hit[1])
            if collect:
                found.append(m)
                continue
            if strategy == LEFTMOST or cr.rule.kind == STRUCTURE:
                return m, ins
            if first_comp is None:
                first_comp = m
    if collect:
        return found, ins
    return (first_comp, ins) if first_comp is not None else (None, ins)


def _fingerprint(ops, idxs) -> tuple:
    return tuple((j, ops[j][0], ops[j][1].name) for j in sorted(idxs))


def _to_match(m, ops, ins) -> Match:
    cr, i, off, covered, binds = m
    return Match(cr.rule, i, off, tuple(sorted(covered)), tuple(binds),
                 _fingerprint(ops, list(covered) + [i]), cr, tuple(map(tuple, ins[: i + 1])))


def find_redexes(d: Diagram, P: Polygraph) -> list[Match]:
    """All rule occurrences in ``d``, ordered by anchor slice and offset."""
    ops = list(d.ops)
    found, ins = _scan(d.source, ops, rule_index(P), LEFTMOST, collect=True)
    return [_to_match(m, ops, ins) for m in found]


# ---------------------------------------------------------------------------
# rewriting

def _rewrite(ops: list, cr: CompiledRule, anchor: int, covered: Sequence[int], ins,
             width: int) -> tuple[list, int]:
    """Replace the matched occurrence; returns new ops and the first touched index."""
    pat = set(covered)
    pat.add(anchor)
    p1 = min(pat)
    anc: set = set()
    for j in range(anchor, p1 - 1, -1):
        if j in pat or j in anc:
            for r in ins[j]:
                if r is not None and r[0] >= p1 and r[0] not in pat:
                    anc.add(r[0])
    seg = ops[p1:anchor + 1]
    keys = [0 if (p1 + t) in anc else 1 if (p1 + t) in pat else 2 for t in range(len(seg))]
    # stable insertion sort of the segment by key, via legal exchanges
    for t in range(1, len(seg)):
        u = t
        while u > 0 and keys[u - 1] > keys[u]:
            seg[u - 1], seg[u] = swap_ops(seg[u - 1], seg[u])
            keys[u - 1], keys[u] = keys[u], keys[u - 1]
            u -= 1
    n_anc = keys.count(0)
    n_pat = keys.count(1)
    head_off = seg[n_anc + n_pat - 1][0]
    block_start = p1 + n_anc
    rhs = [(o + head_off, c) for o, c in cr.rhs_ops]
    new = ops[:p1] + seg[:n_anc] + rhs + seg[n_anc + n_pat:] + ops[anchor + 1:]
    first = normalize_ops(new, p1, width)
    return new, min(first, block_start, p1)


def apply_match(d: Diagram, m: Match) -> Diagram:
    """Rewrite the occurrence ``m`` in ``d`` (which must be in normal form)."""
    ops = list(d.ops)
    idxs = list(m.covered) + [m.anchor]
    if any(j >= len(ops) for j in idxs) or _fingerprint(ops, idxs) != m.fingerprint:
        raise StaleMatch("the diagram changed since the match was found")
    cr = m._compiled or compile_rule(m.rule)
    ins = m._ins
    if not ins:
        _, ins = _scan(d.source, ops, {}, LEFTMOST)
    # re-check that the pattern is still present along the recorded producers
    if _try(cr, m.anchor, ins[m.anchor], ops, ins) is None:
        raise StaleMatch("the pattern is no longer present")
    new, _ = _rewrite(ops, cr, m.anchor, m.covered, ins, len(d.source))
    return Diagram.from_ops(d.source, new)


# ---------------------------------------------------------------------------
# traces

@dataclass(frozen=True)
class RewriteEvent:
    step: int
    rule: str
    kind: str
    anchor: tuple  # (slice index, offset)
    size_before: int
    size_after: int
    samples: dict | None = None

    def to_json(self) -> dict:
        out = {"step": self.step, "rule": self.rule, "kind": self.kind,
               "anchor": list(self.anchor), "size_before": self.size_before,
               "size_after": self.size_after}
        if self.samples:
            out.update(self.samples)
        return out


@dataclass
class Trace:
    initial: Diagram
    events: list = field(default_factory=list)
    initial_samples: dict | None = None

    @property
    def total(self) -> int:
        return len(self.events)

    @property
    def computation(self) -> int:
        return sum(1 for e in self.events if e.kind == COMPUTATION)

    @property
    def structure(self) -> int:
        return sum(1 for e in self.events if e.kind == STRUCTURE)

    def counts(self) -> dict:
        return {"total": self.total, "computation": self.computation, "structure": self.structure}

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.to_json(), sort_keys=True) + "\n" for e in self.events)


Sampler = Callable[[tuple, list], dict]


def normalize(d: Diagram, P: Polygraph, strategy: str = LEFTMOST, fuel: int = DEFAULT_FUEL,
              sampler: Sampler | None = None, rules: Iterable[ThreeCell] | None = None
              ) -> tuple[Diagram, Trace]:
    """Rewrite until no rule applies or ``fuel`` rewrites have been made.

    ``sampler(source, ops)`` is called on the initial diagram and after every
    event; its result is stored with the event.  ``rules`` restricts the
    rule set (for example to structure rules only).
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if rules is None:
        index = rule_index(P)
    else:
        index = {}
        for r in rules:
            cr = compile_rule(r)
            index.setdefault(cr.head, []).append(cr)
    src = d.source
    ops = list(d.ops)
    normalize_ops(ops, 1, len(src))
    start_diagram = Diagram.from_ops(src, ops)
    trace = Trace(start_diagram, [], sampler(src, ops) if sampler else None)
    hint = 0
    while True:
        m, ins = _scan(src, ops, index, strategy, hint if strategy == LEFTMOST else 0)
        if m is None:
            break
        if len(trace.events) >= fuel:
            raise FuelExhausted(trace, Diagram.from_ops(src, ops))
        cr, i, off, covered, _ = m
        before = len(ops)
        ops, hint = _rewrite(ops, cr, i, covered, ins, len(src))
        trace.events.append(RewriteEvent(len(trace.events) + 1, cr.rule.name, cr.rule.kind,
                                         (i, off), before, len(ops),
                                         sampler(src, ops) if sampler else None))
    return Diagram.from_ops(src, ops), trace
