"""Random generators shared by the test modules."""

from __future__ import annotations

import random

from polyprog.frontend import TApp, encode_value
from polyprog.signature import CONSTRUCTOR, Diagram, Polygraph, compose1, legal_swaps, swap, tensor


def random_value(P: Polygraph, sort: str, rng: random.Random, budget: int = 12) -> TApp:
    """A random closed value of ``sort`` with roughly ``budget`` constructors at most."""
    ctors = P.constructors_of(sort)
    leaves = [c for c in ctors if sort not in c.src]
    pick = rng.choice(leaves) if budget <= 0 and leaves else rng.choice(ctors)
    args = tuple(random_value(P, s, rng, budget - 1 if s == sort else 0) for s in pick.src)
    return TApp(pick.name, args)


def random_word(P: Polygraph, rng: random.Random, max_len: int = 3) -> tuple:
    return tuple(rng.choice(P.one_cells) for _ in range(rng.randint(0, max_len)))


def placements(P: Polygraph, word: tuple, kinds=None) -> list:
    """Every ``(offset, cell)`` whose inputs match a window of ``word``."""
    out = []
    for cell in P.two_cells.values():
        if kinds is not None and cell.kind not in kinds:
            continue
        k = cell.arity
        for off in range(len(word) - k + 1):
            if word[off:off + k] == cell.src:
                out.append((off, cell))
    return out


def random_diagram(P: Polygraph, rng: random.Random, n: int, source: tuple | None = None,
                   kinds=None, max_width: int = 6) -> Diagram:
    """A random well-typed diagram with ``n`` gates from ``source``."""
    word = tuple(source) if source is not None else random_word(P, rng)
    src = word
    ops = []
    while len(ops) < n:
        opts = placements(P, word, kinds)
        if len(word) >= max_width:
            opts = [o for o in opts if len(o[1].tgt) <= len(o[1].src)] or opts
        if not opts:
            break
        off, cell = rng.choice(opts)
        ops.append((off, cell))
        word = word[:off] + cell.tgt + word[off + cell.arity:]
    return Diagram.from_ops(src, ops)


def shuffle_by_exchanges(d: Diagram, rng: random.Random, count: int = 50) -> Diagram:
    """Apply ``count`` random legal exchanges (fewer if none is possible)."""
    for _ in range(count):
        options = legal_swaps(d)
        if not options:
            break
        d = swap(d, rng.choice(options))
    return d


def structure_over_values(P: Polygraph, rng: random.Random, n_values: int = 3, n_gates: int = 6) -> Diagram:
    """Random values followed by random crossings, duplicators and erasers."""
    values = [random_value(P, rng.choice(P.one_cells), rng, 5) for _ in range(n_values)]
    base = tensor(*(encode_value(v, P) for v in values))
    top = random_diagram(P, rng, n_gates, base.target, kinds={"structure"}, max_width=5)
    return compose1(base, top)


def is_value_diagram(d: Diagram) -> bool:
    return all(s.cell.kind == CONSTRUCTOR for s in d.slices)
