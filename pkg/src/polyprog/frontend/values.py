"""Values: closed constructor terms and their diagrams, plus literal sugar.

Literal sugar understood by ``parse_value`` and produced by ``format_value``:

* ``7`` for unary numerals (a sort whose constructors are one constant and
  one unary self-map, like ``zero``/``succ``), or for a constant named
  ``n7``/``d7`` of the requested sort;
* ``[2,1]`` for lists (a sort with one constant and one binary constructor
  ``elem * list -> list``);
* ``"ab_"`` for words (a sort with one constant and unary self-maps named by
  single letters, ``_`` standing for ``blank``).
"""

from __future__ import annotations

import re

from ..signature import CONSTRUCTOR, Diagram, Polygraph, compose1, tensor
from .ast import NotAValue, ProgramSyntaxError, TApp, TTuple, TVar


def encode_value(term, P: Polygraph) -> Diagram:
    """Diagram of a closed constructor term (or a tuple of them)."""
    if isinstance(term, TTuple):
        return tensor(*(encode_value(t, P) for t in term.items))
    if isinstance(term, TVar):
        term = TApp(term.name, ())
    if not isinstance(term, TApp):
        raise NotAValue(f"not a value: {term}")
    c = P.two_cells.get(term.head)
    if c is None or c.kind != CONSTRUCTOR:
        raise NotAValue(f"{term.head} is not a constructor")
    if len(term.args) != c.arity:
        raise NotAValue(f"{c.name} expects {c.arity} arguments")
    for a, s in zip(term.args, c.src):
        if value_sort(a, P) != s:
            raise NotAValue(f"argument of {c.name} has the wrong sort")
    return compose1(tensor(*(encode_value(a, P) for a in term.args)), Diagram.cell(c))


def value_sort(term, P: Polygraph) -> str:
    name = term.head if isinstance(term, TApp) else getattr(term, "name", None)
    c = P.two_cells.get(name)
    if c is None or c.kind != CONSTRUCTOR:
        raise NotAValue(f"{name} is not a constructor")
    return c.tgt[0]


def decode_value(d: Diagram):
    """Closed term(s) of a constructor-only diagram from the empty word."""
    if d.source:
        raise NotAValue("a value has no input wires")
    wires: list = []
    for s in d.slices:
        if s.cell.kind != CONSTRUCTOR:
            raise NotAValue(f"{s.cell.name} is not a constructor")
        off = len(s.left)
        k = s.cell.arity
        wires[off:off + k] = [TApp(s.cell.name, tuple(wires[off:off + k]))]
    if len(wires) == 1:
        return wires[0]
    return TTuple(tuple(wires))


def term_size(term) -> int:
    if isinstance(term, TTuple):
        return sum(term_size(t) for t in term.items)
    return 1 + sum(term_size(a) for a in term.args)


# ---------------------------------------------------------------------------
# literal sugar

def _ctors(P: Polygraph, sort: str):
    return P.constructors_of(sort)


def numeral_cells(P: Polygraph, sort: str):
    cs = _ctors(P, sort)
    if len(cs) != 2:
        return None
    z = [c for c in cs if c.arity == 0]
    s = [c for c in cs if c.src == (sort,)]
    if len(z) == 1 and len(s) == 1:
        return z[0], s[0]
    return None


def list_cells(P: Polygraph, sort: str):
    cs = _ctors(P, sort)
    if len(cs) != 2:
        return None
    nil = [c for c in cs if c.arity == 0]
    cons = [c for c in cs if c.arity == 2 and c.src[1] == sort]
    if len(nil) == 1 and len(cons) == 1:
        return nil[0], cons[0]
    return None


def word_cells(P: Polygraph, sort: str):
    cs = _ctors(P, sort)
    nil = [c for c in cs if c.arity == 0]
    letters = [c for c in cs if c.src == (sort,)]
    if len(nil) == 1 and len(letters) + 1 == len(cs) and letters and \
            all(len(c.name) == 1 or c.name == "blank" for c in letters):
        return nil[0], {("_" if c.name == "blank" else c.name): c for c in letters}
    return None


def numeral(n: int, zero: str = "zero", succ: str = "succ"):
    t = TApp(zero, ())
    for _ in range(n):
        t = TApp(succ, (t,))
    return t


def _parse_term(text: str):
    from .parser import _Parser, _tokenize
    p = _Parser(_tokenize(text, 1))
    t = p.term()
    if not p.at_end() and p.peek()[0] != "nl":
        raise ProgramSyntaxError(f"unexpected {p.peek()[1]!r} in value")
    return t


def _closed(t):
    if isinstance(t, TVar):
        return TApp(t.name, ())
    if isinstance(t, TApp):
        return TApp(t.head, tuple(_closed(a) for a in t.args))
    if isinstance(t, TTuple):
        return TTuple(tuple(_closed(a) for a in t.items))
    raise NotAValue(f"not a value: {t}")


def parse_value(text: str, sort: str, P: Polygraph):
    """Read a literal (with sugar) or a constructor term of the given sort."""
    t = text.strip()
    if re.fullmatch(r"\d+", t):
        n = int(t)
        num = numeral_cells(P, sort)
        if num:
            return numeral(n, num[0].name, num[1].name)
        for prefix in ("n", "d"):
            c = P.two_cells.get(f"{prefix}{n}")
            if c is not None and c.kind == CONSTRUCTOR and c.tgt == (sort,) and c.arity == 0:
                return TApp(c.name, ())
        raise NotAValue(f"no integer literal for sort {sort}")
    if t.startswith("[") and t.endswith("]"):
        lc = list_cells(P, sort)
        if not lc:
            raise NotAValue(f"sort {sort} has no list shape")
        nil, cons = lc
        items = [s for s in t[1:-1].replace(";", ",").split(",") if s.strip()]
        out = TApp(nil.name, ())
        for item in reversed(items):
            out = TApp(cons.name, (parse_value(item, cons.src[0], P), out))
        return out
    if len(t) >= 2 and t[0] == t[-1] and t[0] in "\"'":
        wc = word_cells(P, sort)
        if not wc:
            raise NotAValue(f"sort {sort} has no word shape")
        nil, letters = wc
        out = TApp(nil.name, ())
        for ch in reversed(t[1:-1]):
            if ch not in letters:
                raise NotAValue(f"unknown letter {ch!r}")
            out = TApp(letters[ch].name, (out,))
        return out
    term = _closed(_parse_term(t))
    encode_value(term, P)  # validates
    if value_sort(term, P) != sort:
        raise NotAValue(f"{t} is not a value of sort {sort}")
    return term


def format_value(term, P: Polygraph) -> str:
    """Render a value using literal sugar where the sort allows it."""
    if isinstance(term, TTuple):
        return "(" + ", ".join(format_value(t, P) for t in term.items) + ")"
    sort = value_sort(term, P)
    num = numeral_cells(P, sort)
    if num:
        n = 0
        t = term
        while t.head == num[1].name:
            n += 1
            t = t.args[0]
        return str(n)
    m = re.fullmatch(r"[nd](\d+)", term.head)
    if m and not term.args:
        return m.group(1)
    lc = list_cells(P, sort)
    if lc:
        items = []
        t = term
        while t.head == lc[1].name:
            items.append(format_value(t.args[0], P))
            t = t.args[1]
        return "[" + ",".join(items) + "]"
    wc = word_cells(P, sort)
    if wc:
        inv = {c.name: ch for ch, c in wc[1].items()}
        chars = []
        t = term
        while t.head in inv:
            chars.append(inv[t.head])
            t = t.args[0]
        return '"' + "".join(chars) + '"'
    return str(term)
