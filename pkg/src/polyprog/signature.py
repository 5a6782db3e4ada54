"""Core data model: polygraph signatures and 2-path diagrams.

A diagram is stored as a chained sequence of *slices*; each slice applies a
single 2-cell to a window of the current wire word, with untouched wires on
its left and right.  Diagrams that differ only by sliding independent cells
past each other (the exchange law) share a canonical slice order, the
*exchange normal form*, which is what equality compares.

Wire words (1-paths) are plain tuples of 1-cell names; the empty tuple is
the unique 0-cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Sequence

Word = tuple  # tuple[str, ...]

CONSTRUCTOR = "constructor"
FUNCTION = "function"
STRUCTURE = "structure"
COMPUTATION = "computation"


class DiagramError(ValueError):
    """Base class for diagram construction errors."""


class BoundaryMismatch(DiagramError):
    """Sequential composition of diagrams whose boundaries do not agree."""


class MalformedDiagram(DiagramError):
    """A slice sequence whose consecutive boundaries do not chain."""


@dataclass(frozen=True)
class TwoCell:
    """A gate with typed input and output wires.

    ``tag`` is only set on structure cells: ``("tau", a, b)``,
    ``("delta", a)`` or ``("eps", a)``.
    """

    name: str
    src: Word
    tgt: Word
    kind: str = FUNCTION
    tag: tuple | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "src", tuple(self.src))
        object.__setattr__(self, "tgt", tuple(self.tgt))
        if self.kind not in (CONSTRUCTOR, FUNCTION, STRUCTURE):
            raise ValueError(f"unknown 2-cell kind {self.kind!r}")
        if self.kind == CONSTRUCTOR and len(self.tgt) != 1:
            raise ValueError(f"constructor {self.name} must have exactly one output")
        if self.kind == STRUCTURE:
            _check_structure_tag(self)

    @property
    def arity(self) -> int:
        return len(self.src)

    @property
    def coarity(self) -> int:
        return len(self.tgt)

    def __repr__(self) -> str:
        src = " ".join(self.src) or "*"
        tgt = " ".join(self.tgt) or "*"
        return f"<{self.name}: {src} => {tgt}>"


def _check_structure_tag(cell: TwoCell) -> None:
    tag = cell.tag
    if not tag:
        raise ValueError(f"structure cell {cell.name} needs a tag")
    if tag[0] == "tau" and len(tag) == 3:
        ok = cell.src == (tag[1], tag[2]) and cell.tgt == (tag[2], tag[1])
    elif tag[0] == "delta" and len(tag) == 2:
        ok = cell.src == (tag[1],) and cell.tgt == (tag[1], tag[1])
    elif tag[0] == "eps" and len(tag) == 2:
        ok = cell.src == (tag[1],) and cell.tgt == ()
    else:
        ok = False
    if not ok:
        raise ValueError(f"structure cell {cell.name} has inconsistent tag {tag}")


class Slice(NamedTuple):
    """One whiskered cell: ``left * cell * right``."""

    left: Word
    cell: TwoCell
    right: Word

    @property
    def offset(self) -> int:
        return len(self.left)

    @property
    def source(self) -> Word:
        return self.left + self.cell.src + self.right

    @property
    def target(self) -> Word:
        return self.left + self.cell.tgt + self.right


def _build_slices(source: Word, ops: Sequence[tuple[int, TwoCell]]) -> tuple[tuple[Slice, ...], Word]:
    """Turn ``(offset, cell)`` pairs into slices; returns slices and final word."""
    cur = tuple(source)
    out = []
    for off, cell in ops:
        k = len(cell.src)
        left = cur[:off]
        right = cur[off + k:]
        if cur[off:off + k] != cell.src or off + k > len(cur):
            raise MalformedDiagram(
                f"cell {cell.name} does not fit at offset {off} of word {cur}")
        out.append(Slice(left, cell, right))
        cur = left + cell.tgt + right
    return tuple(out), cur


class Diagram:
    """An immutable 2-path between two wire words.

    Equality and hashing are taken modulo the exchange law (by comparing
    exchange normal forms); ``same_layout`` compares slice sequences as
    stored.
    """

    __slots__ = ("source", "target", "slices", "_nf")

    def __init__(self, source: Iterable[str], target: Iterable[str] | None = None,
                 slices: Iterable[Slice] = ()) -> None:
        source = tuple(source)
        slices = tuple(slices)
        cur = source
        for i, s in enumerate(slices):
            if s.source != cur:
                raise MalformedDiagram(
                    f"slice {i} ({s.cell.name}) expects {s.source}, got {cur}")
            cur = s.target
        if target is not None and tuple(target) != cur:
            raise MalformedDiagram(f"declared target {tuple(target)} but slices end in {cur}")
        self.source = source
        self.target = cur
        self.slices = slices
        self._nf = None

    # -- construction -------------------------------------------------
    @classmethod
    def _trusted(cls, source: Word, target: Word, slices: tuple[Slice, ...]) -> "Diagram":
        d = cls.__new__(cls)
        d.source = source
        d.target = target
        d.slices = slices
        d._nf = None
        return d

    @classmethod
    def from_ops(cls, source: Iterable[str], ops: Sequence[tuple[int, TwoCell]]) -> "Diagram":
        """Build from ``(offset, cell)`` pairs applied to ``source`` in order."""
        source = tuple(source)
        slices, tgt = _build_slices(source, ops)
        return cls._trusted(source, tgt, slices)

    @classmethod
    def identity(cls, word: Iterable[str] = ()) -> "Diagram":
        word = tuple(word)
        return cls._trusted(word, word, ())

    @classmethod
    def cell(cls, cell: TwoCell) -> "Diagram":
        return cls._trusted(cell.src, cell.tgt, (Slice((), cell, ()),))

    # -- views --------------------------------------------------------
    @property
    def ops(self) -> tuple[tuple[int, TwoCell], ...]:
        return tuple((len(s.left), s.cell) for s in self.slices)

    def __len__(self) -> int:
        return len(self.slices)

    def same_layout(self, other: "Diagram") -> bool:
        return self.source == other.source and self.slices == other.slices

    def normal_form(self) -> "Diagram":
        if self._nf is None:
            ops = list(self.ops)
            normalize_ops(ops, width=len(self.source))
            nf = Diagram.from_ops(self.source, ops)
            nf._nf = nf
            self._nf = nf
        return self._nf

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        return self.normal_form().slices == other.normal_form().slices

    def __hash__(self) -> int:
        return hash((self.source, self.normal_form().slices))

    def __repr__(self) -> str:
        body = ", ".join(f"{s.cell.name}@{len(s.left)}" for s in self.slices)
        return f"Diagram({' '.join(self.source) or '*'} => {' '.join(self.target) or '*'}; [{body}])"

    # -- composition --------------------------------------------------
    def __matmul__(self, other: "Diagram") -> "Diagram":
        return compose0(self, other)

    def __rshift__(self, other: "Diagram") -> "Diagram":
        return compose1(self, other)


def compose0(d1: Diagram, d2: Diagram) -> Diagram:
    """Parallel composition: ``d1`` on the left wires, ``d2`` on the right.

    ``d1``'s slices run first, whiskered on the right by ``src(d2)``; then
    ``d2``'s slices, whiskered on the left by ``tgt(d1)``.
    """
    s1 = tuple(Slice(s.left, s.cell, s.right + d2.source) for s in d1.slices)
    s2 = tuple(Slice(d1.target + s.left, s.cell, s.right) for s in d2.slices)
    return Diagram._trusted(d1.source + d2.source, d1.target + d2.target, s1 + s2)


def compose1(d1: Diagram, d2: Diagram) -> Diagram:
    """Sequential composition: ``d1`` then ``d2``."""
    if d1.target != d2.source:
        raise BoundaryMismatch(f"cannot compose {d1.target} with {d2.source}")
    return Diagram._trusted(d1.source, d2.target, d1.slices + d2.slices)


def tensor(*ds: Diagram) -> Diagram:
    out = Diagram.identity()
    for d in ds:
        out = compose0(out, d)
    return out


def size(d: Diagram, cells=None) -> int:
    """Number of slices whose cell belongs to ``cells``.

    ``cells`` may be ``None`` (count everything), a collection of cells or
    cell names, or a predicate on cells.
    """
    if cells is None:
        return len(d.slices)
    if callable(cells):
        return sum(1 for s in d.slices if cells(s.cell))
    names = {c.name if isinstance(c, TwoCell) else c for c in cells}
    return sum(1 for s in d.slices if s.cell.name in names)


# ---------------------------------------------------------------------------
# exchange normal form

class _Block:
    """A closed sub-diagram (no wire to either boundary) contracted to one
    zero-width pseudo-cell while the surrounding slices are ordered."""

    __slots__ = ("ops", "key", "name")
    src = ()
    tgt = ()

    def __init__(self, ops: list) -> None:
        self.ops = ops
        self.key = tuple((o, c.name) for o, c in ops)
        self.name = "block"


class NormalizationCycle(DiagramError):
    """Internal safeguard: the exchange normalizer failed to terminate."""


def _should_swap(a, b) -> bool:
    """Whether slice ``b`` (right after ``a``) moves above ``a``.

    ``b`` moves up when it acts entirely left of ``a``'s outputs.  When
    ``a`` has no outputs and ``b`` no inputs at the same gap, ``b`` may sit
    on either side of ``a``: it moves up unless both are contracted closed
    blocks, which are ordered by their content.
    """
    ob, cb = b
    oa, ca = a
    kb = len(cb.src)
    if ob + kb > oa:
        return False
    if ob == oa and isinstance(ca, _Block) and isinstance(cb, _Block):
        return cb.key < ca.key
    return True


def _gnome(ops: list, start: int = 1) -> int:
    i = max(start, 1)
    n = len(ops)
    swaps = 0
    low = n
    limit = 64 + 4 * n * n
    while i < n:
        a = ops[i - 1]
        b = ops[i]
        if _should_swap(a, b):
            kb = len(b[1].src)
            ops[i - 1] = b
            ops[i] = (a[0] + len(b[1].tgt) - kb, a[1])
            swaps += 1
            if swaps > limit:
                raise NormalizationCycle("exchange normalization did not terminate")
            if i - 1 < low:
                low = i - 1
            if i > 1:
                i -= 1
        else:
            i += 1
    return low


def closed_components(ops: Sequence[tuple[int, TwoCell]], width: int) -> list[list[int]]:
    """Slice indices of each connected component touching neither boundary."""
    n = len(ops)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    anchored = [False] * n
    wires: list = [-1] * width  # producing slice of each wire, -1 for an input wire
    for i, (off, cell) in enumerate(ops):
        k = len(cell.src)
        for p in wires[off:off + k]:
            if p < 0:
                anchored[i] = True
            else:
                ra, rb = find(p), find(i)
                if ra != rb:
                    parent[ra] = rb
        wires[off:off + k] = [i] * len(cell.tgt)
    for p in wires:
        if p >= 0:
            anchored[p] = True
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    root_anchored = {find(i) for i in range(n) if anchored[i]}
    return [g for r, g in groups.items() if r not in root_anchored]


def normalize_ops(ops: list, start: int = 1, width: int | None = None) -> int:
    """Bring an ``(offset, cell)`` list to exchange normal form in place.

    Adjacent slices are swapped whenever the later one acts entirely to the
    left of the earlier one's outputs.  Closed sub-diagrams (connected to
    neither boundary) can drift around each other, which makes plain
    swapping cycle; they are first contracted to single blocks, normalized
    on their own, ordered among themselves by content, and expanded again.
    ``width`` is the length of the source word (inferred when omitted).
    Returns the lowest slice index that changed (``len(ops)`` if none).
    """
    if width is None:
        width = _source_width(ops)
    closed = closed_components(ops, width) if any(not c.src or not c.tgt for _, c in ops) else []
    if not closed:
        return _gnome(ops, start)
    comp_of = {}
    for ci, g in enumerate(closed):
        for i in g:
            comp_of[i] = ci
    blocks: list = [[] for _ in closed]
    outer: list = []
    tags: list = [None] * width  # None for outer wires, else component id
    for i, (off, cell) in enumerate(ops):
        k = len(cell.src)
        ci = comp_of.get(i)
        if ci is None:
            outer_off = sum(1 for t in tags[:off] if t is None)
            outer.append((outer_off, cell))
        else:
            if not blocks[ci]:
                gap = sum(1 for t in tags[:off] if t is None)
                outer.append((gap, ci))
            blocks[ci].append((sum(1 for t in tags[:off] if t == ci), cell))
        tags[off:off + k] = [ci] * len(cell.tgt)
    made = []
    for b in blocks:
        _gnome(b)
        made.append(_Block(b))
    outer = [(o, made[c]) if isinstance(c, int) else (o, c) for o, c in outer]
    _gnome(outer)
    out = []
    for o, c in outer:
        if isinstance(c, _Block):
            out.extend((o + bo, bc) for bo, bc in c.ops)
        else:
            out.append((o, c))
    ops[:] = out
    return 0


def _source_width(ops: Sequence[tuple[int, TwoCell]]) -> int:
    """Smallest source width making the slice list well-typed."""
    need = 0
    w = 0  # wires relative to the source
    for off, cell in ops:
        k = len(cell.src)
        if off + k > w:
            need += off + k - w
            w = off + k
        w += len(cell.tgt) - k
    return need


def exchange_normal_form(d: Diagram) -> Diagram:
    """Canonical representative of ``d`` modulo the exchange law."""
    cur = d.source
    for i, s in enumerate(d.slices):
        if s.source != cur:
            raise MalformedDiagram(f"slice {i} does not chain")
        cur = s.target
    if cur != d.target:
        raise MalformedDiagram("slices do not end in the declared target")
    return d.normal_form()


def independent_position(a: tuple[int, TwoCell], b: tuple[int, TwoCell]) -> str | None:
    """How slice ``b`` (right after ``a``) sits relative to ``a``'s outputs.

    Returns ``"left"`` or ``"right"`` when ``b`` consumes none of ``a``'s
    outputs, and ``None`` when ``b`` depends on ``a``.
    """
    (oa, ca), (ob, cb) = a, b
    if ob + len(cb.src) <= oa:
        return "left"
    if ob >= oa + len(ca.tgt):
        return "right"
    return None


def swap_ops(a: tuple[int, TwoCell], b: tuple[int, TwoCell]):
    """Exchange two adjacent independent slices; returns the new pair."""
    pos = independent_position(a, b)
    if pos == "left":
        return b, (a[0] + len(b[1].tgt) - len(b[1].src), a[1])
    if pos == "right":
        return (b[0] - len(a[1].tgt) + len(a[1].src), b[1]), a
    raise DiagramError("slices are not independent")


def legal_swaps(d: Diagram) -> list[int]:
    """Indices ``i`` such that slices ``i`` and ``i+1`` may be exchanged."""
    ops = d.ops
    return [i for i in range(len(ops) - 1) if independent_position(ops[i], ops[i + 1])]


def swap(d: Diagram, i: int) -> Diagram:
    """Exchange slices ``i`` and ``i+1`` of ``d`` (they must be independent)."""
    ops = list(d.ops)
    ops[i], ops[i + 1] = swap_ops(ops[i], ops[i + 1])
    return Diagram.from_ops(d.source, ops)


# ---------------------------------------------------------------------------
# 3-cells and polygraphs

@dataclass(frozen=True)
class ThreeCell:
    """A rewrite rule between two parallel diagrams."""

    name: str
    lhs: Diagram = field(compare=False)
    rhs: Diagram = field(compare=False)
    kind: str = COMPUTATION

    def __post_init__(self) -> None:
        if self.kind not in (COMPUTATION, STRUCTURE):
            raise ValueError(f"unknown 3-cell kind {self.kind!r}")

    @property
    def head(self) -> TwoCell:
        return self.lhs.slices[-1].cell

    def __repr__(self) -> str:
        return f"<rule {self.name} ({self.kind})>"


@dataclass(frozen=True)
class Polygraph:
    """A signature of wire types, gates and rewrite rules."""

    one_cells: tuple
    two_cells: Mapping[str, TwoCell]
    three_cells: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "one_cells", tuple(self.one_cells))
        cells = self.two_cells
        if not isinstance(cells, Mapping):
            cells = {c.name: c for c in cells}
        object.__setattr__(self, "two_cells", MappingProxyType(dict(cells)))
        object.__setattr__(self, "three_cells", tuple(self.three_cells))

    def cell(self, name: str) -> TwoCell:
        return self.two_cells[name]

    def cells_of(self, kind: str) -> list[TwoCell]:
        return [c for c in self.two_cells.values() if c.kind == kind]

    @property
    def constructors(self) -> list[TwoCell]:
        return self.cells_of(CONSTRUCTOR)

    @property
    def functions(self) -> list[TwoCell]:
        return self.cells_of(FUNCTION)

    @property
    def structure_cells(self) -> list[TwoCell]:
        return self.cells_of(STRUCTURE)

    @property
    def computation_rules(self) -> list[ThreeCell]:
        return [r for r in self.three_cells if r.kind == COMPUTATION]

    @property
    def structure_rules(self) -> list[ThreeCell]:
        return [r for r in self.three_cells if r.kind == STRUCTURE]

    def rule(self, name: str) -> ThreeCell:
        for r in self.three_cells:
            if r.name == name:
                return r
        raise KeyError(name)

    def constructors_of(self, sort: str) -> list[TwoCell]:
        return [c for c in self.constructors if c.tgt == (sort,)]

    def with_cells(self, cells: Iterable[TwoCell] = (), rules: Iterable[ThreeCell] = ()) -> "Polygraph":
        two = dict(self.two_cells)
        for c in cells:
            two[c.name] = c
        return Polygraph(self.one_cells, two, self.three_cells + tuple(rules))

    def without_rules(self, names: Iterable[str]) -> "Polygraph":
        drop = set(names)
        return Polygraph(self.one_cells, self.two_cells,
                         tuple(r for r in self.three_cells if r.name not in drop))


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Violation:
    kind: str  # GlobularViolation | PatternShapeViolation | LinearityViolation | UndeclaredOneCell
    where: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(f"{v.kind} in {v.where}: {v.message}" for v in self.violations)


def pattern_problems(lhs: Diagram, head_kind: str) -> list[str]:
    """Reasons why ``lhs`` is not a constructor tree topped by one head cell."""
    problems = []
    if not lhs.slices:
        return ["empty left-hand side"]
    head = lhs.slices[-1].cell
    if head.kind != head_kind:
        problems.append(f"head {head.name} is a {head.kind} cell, expected {head_kind}")
    for s in lhs.slices[:-1]:
        if s.cell.kind != CONSTRUCTOR:
            problems.append(f"non-constructor cell {s.cell.name} below the head")
    if lhs.target != head.tgt:
        problems.append("wires bypass the head cell")
    # Every constructor output must be consumed exactly once, by a later slice.
    prod: list = [None] * len(lhs.source)
    consumed = set()
    for i, s in enumerate(lhs.slices):
        off = len(s.left)
        k = len(s.cell.src)
        for p in prod[off:off + k]:
            if p is not None:
                consumed.add(p)
        prod[off:off + k] = [i] * len(s.cell.tgt)
    dangling = [i for i in range(len(lhs.slices) - 1) if i not in consumed]
    if dangling:
        problems.append(f"constructor outputs not consumed by the pattern: slices {dangling}")
    if any(p is not None and p != len(lhs.slices) - 1 for p in prod):
        problems.append("constructor output reaches the boundary")
    return problems


def validate_polygraph(P: Polygraph) -> ValidationReport:
    """Check boundary typing, rule parallelism and rule-source shape."""
    out = []
    declared = set(P.one_cells)
    for c in P.two_cells.values():
        bad = [w for w in c.src + c.tgt if w not in declared]
        if bad:
            out.append(Violation("UndeclaredOneCell", c.name, f"undeclared 1-cells {bad}"))
    for r in P.three_cells:
        if r.lhs.source != r.rhs.source or r.lhs.target != r.rhs.target:
            out.append(Violation("GlobularViolation", r.name,
                                 f"lhs {r.lhs.source}->{r.lhs.target} vs rhs {r.rhs.source}->{r.rhs.target}"))
        head_kind = FUNCTION if r.kind == COMPUTATION else STRUCTURE
        for msg in pattern_problems(r.lhs, head_kind):
            kind = "LinearityViolation" if "consumed" in msg or "boundary" in msg else "PatternShapeViolation"
            out.append(Violation(kind, r.name, msg))
        for d in (r.lhs, r.rhs):
            for s in d.slices:
                if P.two_cells.get(s.cell.name) != s.cell:
                    out.append(Violation("UndeclaredOneCell", r.name,
                                         f"cell {s.cell.name} is not declared in the polygraph"))
    return ValidationReport(tuple(out))
