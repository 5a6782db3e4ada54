"""Permutation, duplication and erasure gates, and their rewrite rules.

For every wire type ``a`` there is a duplicator ``delta[a]`` and an eraser
``eps[a]``; for every ordered pair ``(a, b)`` a crossing ``tau[a,b]``.
Constructors slide through these gates: the generated rules push a
constructor across a crossing (from either side), copy it through a
duplicator, or dissolve it into an eraser.
"""

from __future__ import annotations

from typing import Iterable

from .signature import (
    STRUCTURE,
    Diagram,
    Polygraph,
    ThreeCell,
    TwoCell,
    compose0,
    compose1,
)


def tau_name(a: str, b: str) -> str:
    return f"tau[{a},{b}]"


def delta_name(a: str) -> str:
    return f"delta[{a}]"


def eps_name(a: str) -> str:
    return f"eps[{a}]"


def tau_cell(a: str, b: str) -> TwoCell:
    return TwoCell(tau_name(a, b), (a, b), (b, a), STRUCTURE, ("tau", a, b))


def delta_cell(a: str) -> TwoCell:
    return TwoCell(delta_name(a), (a,), (a, a), STRUCTURE, ("delta", a))


def eps_cell(a: str) -> TwoCell:
    return TwoCell(eps_name(a), (a,), (), STRUCTURE, ("eps", a))


def structure_cells(one_cells: Iterable[str] | Polygraph) -> list[TwoCell]:
    """All crossings, duplicators and erasers over the given wire types."""
    if isinstance(one_cells, Polygraph):
        one_cells = one_cells.one_cells
    sorts = list(one_cells)
    cells = [tau_cell(a, b) for a in sorts for b in sorts]
    cells += [delta_cell(a) for a in sorts]
    cells += [eps_cell(a) for a in sorts]
    return cells


def crossing(u: Iterable[str], a: str, side: str = "right") -> Diagram:
    """Move wire ``a`` across the word ``u``.

    ``side="right"`` gives ``u a => a u`` (the wire starts on the right of
    ``u``); ``side="left"`` gives ``a u => u a``.
    """
    u = tuple(u)
    if side == "right":
        # u a => a u: cross a leftwards over the last wire first.
        ops = [(i, tau_cell(u[i], a)) for i in range(len(u) - 1, -1, -1)]
        return Diagram.from_ops(u + (a,), ops)
    if side == "left":
        ops = [(i, tau_cell(a, u[i])) for i in range(len(u))]
        return Diagram.from_ops((a,) + u, ops)
    raise ValueError("side must be 'left' or 'right'")


def word_crossing(u: Iterable[str], v: Iterable[str]) -> Diagram:
    """``u v => v u`` built from single-wire crossings."""
    u, v = tuple(u), tuple(v)
    d = Diagram.identity(u + v)
    for j, b in enumerate(v):
        # current word: v[:j] u b v[j+1:]
        step = compose0(compose0(Diagram.identity(v[:j]), crossing(u, b, "right")),
                        Diagram.identity(v[j + 1:]))
        d = compose1(d, step)
    return d


def duplicator(u: Iterable[str]) -> Diagram:
    """``u => u u``: copy every wire, then unshuffle the copies."""
    u = tuple(u)
    d = Diagram.identity(())
    for i, a in enumerate(u):
        v = u[:i]
        # v a  =>  v v a a  =>  v a v a
        step = compose1(compose0(d, Diagram.cell(delta_cell(a))),
                        compose0(compose0(Diagram.identity(v), crossing(v, a, "right")),
                                 Diagram.identity((a,))))
        d = step
    return d


def eraser(u: Iterable[str]) -> Diagram:
    """``u => *``: erase every wire."""
    d = Diagram.identity(())
    for a in u:
        d = compose0(d, Diagram.cell(eps_cell(a)))
    return d


def structure_rules(P: Polygraph) -> list[ThreeCell]:
    """Rules sliding each constructor through every structure gate."""
    rules = []
    sorts = P.one_cells
    for c in P.constructors:
        x = c.src
        (xi,) = c.tgt
        cd = Diagram.cell(c)
        for z in sorts:
            idz = Diagram.identity((z,))
            lhs = compose1(compose0(cd, idz), Diagram.cell(tau_cell(xi, z)))
            rhs = compose1(crossing(x, z, "right"), compose0(idz, cd))
            rules.append(ThreeCell(f"{c.name}/tau-left[{z}]", lhs, rhs, STRUCTURE))
            lhs = compose1(compose0(idz, cd), Diagram.cell(tau_cell(z, xi)))
            rhs = compose1(crossing(x, z, "left"), compose0(cd, idz))
            rules.append(ThreeCell(f"{c.name}/tau-right[{z}]", lhs, rhs, STRUCTURE))
        lhs = compose1(cd, Diagram.cell(delta_cell(xi)))
        rhs = compose1(duplicator(x), compose0(cd, cd))
        rules.append(ThreeCell(f"{c.name}/delta", lhs, rhs, STRUCTURE))
        lhs = compose1(cd, Diagram.cell(eps_cell(xi)))
        rules.append(ThreeCell(f"{c.name}/eps", lhs, eraser(x), STRUCTURE))
    return rules


def with_structure_cells(P: Polygraph) -> Polygraph:
    missing = [c for c in structure_cells(P) if c.name not in P.two_cells]
    return P.with_cells(missing)


def with_structure(P: Polygraph) -> Polygraph:
    """``P`` completed with structure gates and all their rules."""
    P = with_structure_cells(P)
    have = {r.name for r in P.structure_rules}
    return P.with_cells(rules=[r for r in structure_rules(P) if r.name not in have])
