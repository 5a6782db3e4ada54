"""Turn checked programs into polygraphs.

Left-hand sides become constructor trees under the function gate.  Right-hand
sides are linearized: each variable is copied (balanced tree of duplicators)
or erased right where it is bound, wires are brought into the order of their
uses by adjacent crossings (an insertion-sort network), and the term is then
built bottom-up, left to right.
"""

from __future__ import annotations

import itertools
from typing import Callable, Sequence

from ..signature import (
    COMPUTATION,
    CONSTRUCTOR,
    FUNCTION,
    Diagram,
    Polygraph,
    ThreeCell,
    TwoCell,
    compose1,
    tensor,
)
from ..structure import delta_cell, eps_cell, structure_cells, tau_cell, with_structure
from .ast import ProgramAST, RuleDecl, SortError, TApp, TLet, TTuple, TVar
from .parser import parse_program

CellLookup = Callable[[str], TwoCell]


def signature_cells(ast: ProgramAST) -> list[TwoCell]:
    cells = [TwoCell(c.name, c.src, c.tgt, CONSTRUCTOR) for c in ast.constructors]
    cells += [TwoCell(c.name, c.src, c.tgt, FUNCTION) for c in ast.functions]
    return cells


def pattern_diagram(t, sort: str, cell: CellLookup) -> Diagram:
    """Diagram of a constructor pattern; variables become open input wires."""
    if isinstance(t, TVar):
        return Diagram.identity((sort,))
    c = cell(t.head)
    args = [pattern_diagram(a, s, cell) for a, s in zip(t.args, c.src)]
    return compose1(tensor(*args), Diagram.cell(c))


def lhs_diagram(lhs: TApp, cell: CellLookup) -> Diagram:
    f = cell(lhs.head)
    args = [pattern_diagram(a, s, cell) for a, s in zip(lhs.args, f.src)]
    return compose1(tensor(*args), Diagram.cell(f))


def pattern_sorts(t, sort: str, cell: CellLookup) -> list[tuple[str, str]]:
    """``(variable, sort)`` pairs of a pattern, left to right."""
    if isinstance(t, TVar):
        return [(t.name, sort)]
    c = cell(t.head)
    out = []
    for a, s in zip(t.args, c.src):
        out += pattern_sorts(a, s, cell)
    return out


def count_uses(t, counts: dict[str, int] | None = None) -> dict[str, int]:
    counts = {} if counts is None else counts
    if isinstance(t, TVar):
        counts[t.name] = counts.get(t.name, 0) + 1
    elif isinstance(t, TApp):
        for a in t.args:
            count_uses(a, counts)
    elif isinstance(t, TTuple):
        for a in t.items:
            count_uses(a, counts)
    elif isinstance(t, TLet):
        count_uses(t.bound, counts)
        count_uses(t.body, counts)
    return counts


def _leaves(t) -> list[str]:
    if isinstance(t, TVar):
        return [t.name]
    if isinstance(t, TApp):
        out = []
        for a in t.args:
            out += _leaves(a)
        return out
    if isinstance(t, TTuple):
        out = []
        for a in t.items:
            out += _leaves(a)
        return out
    raise TypeError(t)


class _Builder:
    """Tracks labelled wires while emitting slices for a right-hand side."""

    def __init__(self, inputs: Sequence[tuple[str, str]], cell: CellLookup) -> None:
        self.source = tuple(s for _, s in inputs)
        self.labels: list = [name for name, _ in inputs]
        self.sorts: list[str] = list(self.source)
        self.ops: list = []
        self.cell = cell
        self.fresh = itertools.count()
        self.copies: dict[str, list] = {}

    def emit(self, off: int, cell: TwoCell, new_labels: Sequence) -> None:
        k = len(cell.src)
        if tuple(self.sorts[off:off + k]) != cell.src:
            raise SortError(f"{cell.name} applied to wires {self.sorts[off:off + k]}")
        self.ops.append((off, cell))
        self.labels[off:off + k] = list(new_labels)
        self.sorts[off:off + k] = list(cell.tgt)

    def fan(self, name: str, uses: int) -> None:
        """Copy or erase the wire labelled ``name`` where it currently sits."""
        pos = self.labels.index(name)
        sort = self.sorts[pos]
        if uses == 0:
            self.emit(pos, eps_cell(sort), [])
            self.copies[name] = []
            return
        self._tree(pos, sort, uses)
        labels = [(name, i) for i in range(uses)]
        self.labels[pos:pos + uses] = labels
        self.copies[name] = list(labels)

    def _tree(self, pos: int, sort: str, n: int) -> None:
        if n == 1:
            return
        self.emit(pos, delta_cell(sort), [next(self.fresh), next(self.fresh)])
        left = (n + 1) // 2
        self._tree(pos, sort, left)
        self._tree(pos + left, sort, n - left)

    def take(self, names: Sequence[str]) -> list:
        return [self.copies[n].pop(0) for n in names]

    def arrange(self, chosen: list, whole: bool = False) -> int:
        """Make ``chosen`` wires adjacent and in order; returns their start."""
        if whole:
            if set(chosen) != set(self.labels) or len(chosen) != len(self.labels):
                raise SortError("right-hand side does not use every bound wire exactly as counted")
            target = list(chosen)
            start = 0
        elif not chosen:
            return len(self.labels)
        else:
            cs = set(chosen)
            first = min(self.labels.index(c) for c in chosen)
            before = [w for w in self.labels[:first] if w not in cs]
            after = [w for w in self.labels[first:] if w not in cs]
            target = before + list(chosen) + after
            start = len(before)
        rank = {w: i for i, w in enumerate(target)}
        # insertion sort by adjacent transpositions
        for i in range(1, len(self.labels)):
            j = i
            while j > 0 and rank[self.labels[j - 1]] > rank[self.labels[j]]:
                a, b = self.sorts[j - 1], self.sorts[j]
                self.emit(j - 1, tau_cell(a, b), [self.labels[j], self.labels[j - 1]])
                j -= 1
        return start

    def build(self, t, pos: int) -> int:
        """Emit ``t`` whose variable wires sit in order from ``pos``; returns width."""
        if isinstance(t, TVar):
            return 1
        if isinstance(t, TTuple):
            p = pos
            for a in t.items:
                p += self.build(a, p)
            return p - pos
        c = self.cell(t.head)
        p = pos
        for a in t.args:
            p += self.build(a, p)
        self.emit(pos, c, [next(self.fresh) for _ in c.tgt])
        return len(c.tgt)


def rhs_diagram(inputs: Sequence[tuple[str, str]], rhs, cell: CellLookup) -> Diagram:
    """Linearize ``rhs`` over the given ``(variable, sort)`` input wires."""
    b = _Builder(inputs, cell)
    uses = count_uses(rhs)
    for name, _ in inputs:
        b.fan(name, uses.get(name, 0))
    t = rhs
    while isinstance(t, TLet):
        chosen = b.take(_leaves(t.bound))
        start = b.arrange(chosen)
        width = b.build(t.bound, start)
        if width != len(t.names):
            raise SortError(f"let binds {len(t.names)} names to {width} results")
        b.labels[start:start + width] = list(t.names)
        for name in t.names:
            b.fan(name, uses.get(name, 0))
        t = t.body
    chosen = b.take(_leaves(t))
    b.arrange(chosen, whole=True)
    b.build(t, 0)
    return Diagram.from_ops(b.source, b.ops)


def term_diagram(P: Polygraph, inputs: Sequence[tuple[str, str]], term) -> Diagram:
    """Diagram of an arbitrary term over a polygraph's gates."""
    return rhs_diagram(inputs, term, _lookup(P))


def _lookup(P: Polygraph) -> CellLookup:
    def cell(name: str) -> TwoCell:
        try:
            return P.two_cells[name]
        except KeyError:
            from .ast import UnknownSymbol
            raise UnknownSymbol(f"unknown symbol {name!r}") from None
    return cell


def rule_cell(r: RuleDecl, P: Polygraph) -> ThreeCell:
    cell = _lookup(P)
    f = cell(r.lhs.head)
    inputs = []
    for a, s in zip(r.lhs.args, f.src):
        inputs += pattern_sorts(a, s, cell)
    lhs = lhs_diagram(r.lhs, cell)
    rhs = rhs_diagram(inputs, r.rhs, cell)
    return ThreeCell(r.name, lhs, rhs, COMPUTATION)


def elaborate(ast: ProgramAST) -> Polygraph:
    """Signature, structure gates and computation rules (no structure rules)."""
    base = Polygraph(ast.sorts, signature_cells(ast))
    P = base.with_cells(structure_cells(base))
    rules = [rule_cell(r, P) for r in ast.rules]
    return P.with_cells(rules=rules)


def load_program(text: str) -> Polygraph:
    """Parse, elaborate and add the structure rules."""
    return with_structure(elaborate(parse_program(text)))
