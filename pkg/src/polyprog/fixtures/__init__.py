"""Bundled example programs and interpretations.

* ``division``: truncated subtraction and floor division on unary numerals;
* ``sort``: fusion (merge) sort of lists over the digits ``n0 .. nN``;
* ``arith``: addition and multiplication on unary numerals;
* ``oracle.tm``: a small Turing machine used to test compilation.

The sort program depends on the digit bound ``N``; ``sort_source(N)`` and
``sort_interp_source(N)`` generate it (the shipped files are ``N = 2``).
"""

from __future__ import annotations

from importlib import resources

from ..frontend import load_program
from ..interp import Interpretation, load_interp
from ..signature import Polygraph

NAMES = ("division.poly", "division.interp", "division-strict.interp", "sort.poly", "sort.interp",
         "sort-strict.interp", "arith.poly", "arith.interp", "oracle.tm")


def text(name: str) -> str:
    """Contents of a bundled fixture file."""
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def path(name: str):
    return resources.files(__package__).joinpath(name)


def sort_source(N: int = 2) -> str:
    """Fusion sort over the digits ``n0 .. nN``."""
    digits = [f"n{k}" for k in range(N + 1)]
    lines = [
        f"# Fusion sort of lists over the digits n0 .. n{N}.",
        "sorts: n, l",
        "constructors:",
        *[f"  {d} : -> n" for d in digits],
        "  nil : -> l",
        "  cons : n * l -> l",
        "functions:",
        "  sort : l -> l",
        "  split : l -> l * l",
        "  merge : l * l -> l",
        "rules:",
        "  sort(nil) => nil",
        "  sort(cons(x, nil)) => cons(x, nil)",
        "  sort(cons(x, cons(y, l))) =>",
        "    let (l1, l2) = split(l) in merge(sort(cons(x, l1)), sort(cons(y, l2)))",
        "  split(nil) => (nil, nil)",
        "  split(cons(x, nil)) => (cons(x, nil), nil)",
        "  split(cons(x, cons(y, l))) =>",
        "    let (l1, l2) = split(l) in (cons(x, l1), cons(y, l2))",
        "  merge(nil, l) => l",
        "  merge(l, nil) => l",
    ]
    for p in range(N + 1):
        for q in range(N + 1):
            lhs = f"merge(cons(n{p}, l), cons(n{q}, m))"
            if p <= q:
                rhs = f"cons(n{p}, merge(l, cons(n{q}, m)))"
            else:
                rhs = f"cons(n{q}, merge(cons(n{p}, l), m))"
            lines.append(f"  {lhs} => {rhs}")
    return "\n".join(lines) + "\n"


def sort_interp_source(N: int = 2, strict: bool = False) -> str:
    """Currents and heats for the fusion sort; ``strict`` raises the sort heat."""
    sort_heat = "3*x^2 + 1" if strict else "2*x^2 + 1"
    lines = [
        "# Lists of length k carry current 2k+1; digits carry 1.",
        "domain n = {1}",
        "domain l = 2N+1",
        *[f"current n{k} = 1" for k in range(N + 1)],
        "current nil = 1",
        "current cons(x, y) = x + y + 1",
        "current sort(x) = x",
        "current split(2x+1) = (2*ceil(x/2) + 1, 2*floor(x/2) + 1)",
        "current merge(x, y) = x + y - 1",
        f"heat sort(2x+1) = {sort_heat}",
        "heat split(2x+1) = floor(x/2) + 1",
        "heat merge(2x+1, 2y+1) = if x*y == 0 then 1 else x + y",
    ]
    return "\n".join(lines) + "\n"


def program(name: str, N: int = 2) -> Polygraph:
    """Load ``division``, ``sort`` or ``arith`` (``sort`` for any digit bound ``N``)."""
    if name == "sort":
        return load_program(sort_source(N))
    return load_program(text(f"{name}.poly"))


def interpretation(name: str, P: Polygraph | None = None, strict: bool = False, N: int = 2) -> Interpretation:
    """The shipped interpretation of a bundled program (``strict`` for the repaired one)."""
    P = P if P is not None else program(name, N)
    if name == "sort":
        return load_interp(sort_interp_source(N, strict), P)
    suffix = "-strict" if strict else ""
    return load_interp(text(f"{name}{suffix}.interp"), P)
