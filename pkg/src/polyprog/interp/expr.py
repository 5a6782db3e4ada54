"""Monotone map expressions over natural numbers.

Expressions are small immutable trees over input variables ``x0 .. x(m-1)``.
They are compiled once to Python lambdas, in a scalar flavour (plain ints)
and a vectorized flavour (numpy integer arrays) used by the bounded
checkers.  Subtraction is truncated at zero (monus) and division is by
positive constants only.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np


class Expr:
    """Base class for expression nodes."""

    __slots__ = ()

    # operator sugar for building expressions in Python code
    def __add__(self, other):
        return add(self, lift(other))

    def __radd__(self, other):
        return add(lift(other), self)

    def __mul__(self, other):
        return mul(self, lift(other))

    def __rmul__(self, other):
        return mul(lift(other), self)

    def __sub__(self, other):
        return monus(self, lift(other))

    def __pow__(self, k: int):
        return power(self, k)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: int


@dataclass(frozen=True, eq=True)
class Var(Expr):
    index: int


@dataclass(frozen=True, eq=True)
class Add(Expr):
    terms: tuple


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    factors: tuple


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exp: int


@dataclass(frozen=True, eq=True)
class Monus(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Max(Expr):
    args: tuple


@dataclass(frozen=True, eq=True)
class Min(Expr):
    args: tuple


@dataclass(frozen=True, eq=True)
class FloorDiv(Expr):
    arg: Expr
    divisor: int


@dataclass(frozen=True, eq=True)
class CeilDiv(Expr):
    arg: Expr
    divisor: int


@dataclass(frozen=True, eq=True)
class Cmp(Expr):
    op: str  # one of == != < <= > >=
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class BoolOp(Expr):
    op: str  # "and" | "or"
    args: tuple


@dataclass(frozen=True, eq=True)
class If(Expr):
    cond: Expr
    then: Expr
    orelse: Expr


@dataclass(frozen=True, eq=True)
class Tup(Expr):
    items: tuple


def lift(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, np.integer)) and v >= 0:
        return Const(int(v))
    raise TypeError(f"cannot use {v!r} in an expression")


# ---------------------------------------------------------------------------
# smart constructors (light constant folding and flattening)

def add(*args: Expr) -> Expr:
    terms = []
    c = 0
    for a in args:
        a = lift(a)
        parts = a.terms if isinstance(a, Add) else (a,)
        for p in parts:
            if isinstance(p, Const):
                c += p.value
            else:
                terms.append(p)
    if c or not terms:
        terms.append(Const(c))
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


def mul(*args: Expr) -> Expr:
    factors = []
    c = 1
    for a in args:
        a = lift(a)
        parts = a.factors if isinstance(a, Mul) else (a,)
        for p in parts:
            if isinstance(p, Const):
                c *= p.value
            else:
                factors.append(p)
    if c == 0:
        return Const(0)
    if c != 1 or not factors:
        factors.insert(0, Const(c))
    return factors[0] if len(factors) == 1 else Mul(tuple(factors))


def power(base: Expr, k: int) -> Expr:
    if k < 0:
        raise ValueError("negative exponent")
    if k == 0:
        return Const(1)
    if k == 1:
        return base
    if isinstance(base, Const):
        return Const(base.value ** k)
    return Pow(base, k)


def monus(a: Expr, b: Expr) -> Expr:
    if isinstance(b, Const) and b.value == 0:
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(max(a.value - b.value, 0))
    return Monus(a, b)


def maximum(*args: Expr) -> Expr:
    flat = []
    for a in args:
        flat.extend(a.args if isinstance(a, Max) else (a,))
    uniq = []
    for a in flat:
        if a not in uniq:
            uniq.append(a)
    consts = [a.value for a in uniq if isinstance(a, Const)]
    rest = [a for a in uniq if not isinstance(a, Const)]
    if consts:
        m = max(consts)
        if m or not rest:
            rest.append(Const(m))
    if not rest:
        return Const(0)
    return rest[0] if len(rest) == 1 else Max(tuple(rest))


def minimum(*args: Expr) -> Expr:
    if len(args) == 1:
        return args[0]
    return Min(tuple(args))


def floordiv(a: Expr, k: int) -> Expr:
    if k <= 0:
        raise ValueError("division by a non-positive constant")
    if k == 1:
        return a
    if isinstance(a, Const):
        return Const(a.value // k)
    return FloorDiv(a, k)


def ceildiv(a: Expr, k: int) -> Expr:
    if k <= 0:
        raise ValueError("division by a non-positive constant")
    if k == 1:
        return a
    if isinstance(a, Const):
        return Const(-((-a.value) // k))
    return CeilDiv(a, k)


def tup(*items: Expr) -> Tup:
    return Tup(tuple(lift(i) for i in items))


# ---------------------------------------------------------------------------
# traversal helpers

def children(e: Expr) -> tuple:
    if isinstance(e, (Const, Var)):
        return ()
    if isinstance(e, Add):
        return e.terms
    if isinstance(e, Mul):
        return e.factors
    if isinstance(e, (Max, Min, BoolOp)):
        return e.args
    if isinstance(e, Tup):
        return e.items
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, (FloorDiv, CeilDiv)):
        return (e.arg,)
    if isinstance(e, (Monus, Cmp)):
        return (e.left, e.right)
    if isinstance(e, If):
        return (e.cond, e.then, e.orelse)
    raise TypeError(e)


def variables(e: Expr) -> set[int]:
    if isinstance(e, Var):
        return {e.index}
    out: set[int] = set()
    for c in children(e):
        out |= variables(c)
    return out


def has_guards(e: Expr) -> bool:
    if isinstance(e, If):
        return True
    return any(has_guards(c) for c in children(e))


def substitute(e: Expr, args: Sequence[Expr]) -> Expr:
    """Replace ``Var(i)`` by ``args[i]``."""
    cache: dict = {}

    def go(e: Expr) -> Expr:
        key = id(e)
        if key in cache:
            return cache[key][1]
        if isinstance(e, Const):
            r = e
        elif isinstance(e, Var):
            r = args[e.index]
        elif isinstance(e, Add):
            r = add(*map(go, e.terms))
        elif isinstance(e, Mul):
            r = mul(*map(go, e.factors))
        elif isinstance(e, Pow):
            r = power(go(e.base), e.exp)
        elif isinstance(e, Monus):
            r = monus(go(e.left), go(e.right))
        elif isinstance(e, Max):
            r = maximum(*map(go, e.args))
        elif isinstance(e, Min):
            r = minimum(*map(go, e.args))
        elif isinstance(e, FloorDiv):
            r = floordiv(go(e.arg), e.divisor)
        elif isinstance(e, CeilDiv):
            r = ceildiv(go(e.arg), e.divisor)
        elif isinstance(e, Cmp):
            r = Cmp(e.op, go(e.left), go(e.right))
        elif isinstance(e, BoolOp):
            r = BoolOp(e.op, tuple(map(go, e.args)))
        elif isinstance(e, If):
            r = If(go(e.cond), go(e.then), go(e.orelse))
        elif isinstance(e, Tup):
            r = Tup(tuple(map(go, e.items)))
        else:
            raise TypeError(e)
        cache[key] = (e, r)
        return r

    return go(e)


def degree(e: Expr) -> int:
    """An upper bound on the polynomial growth degree of ``e``."""
    if isinstance(e, Const):
        return 0
    if isinstance(e, Var):
        return 1
    if isinstance(e, Add):
        return max(map(degree, e.terms))
    if isinstance(e, Mul):
        return sum(map(degree, e.factors))
    if isinstance(e, Pow):
        return degree(e.base) * e.exp
    if isinstance(e, Monus):
        return degree(e.left)
    if isinstance(e, (Max, Tup)):
        return max(map(degree, children(e)), default=0)
    if isinstance(e, Min):
        return min(map(degree, e.args))
    if isinstance(e, (FloorDiv, CeilDiv)):
        return degree(e.arg)
    if isinstance(e, If):
        return max(degree(e.then), degree(e.orelse))
    raise TypeError(e)


# ---------------------------------------------------------------------------
# rendering in the surface syntax

_PREC = {"if": 0, "or": 1, "and": 2, "cmp": 3, "add": 4, "mul": 5, "pow": 6, "atom": 7}


def render(e: Expr, names: Sequence[str] | None = None) -> str:
    def nm(i: int) -> str:
        return names[i] if names is not None else f"x{i}"

    def go(e: Expr, ctx: int) -> str:
        if isinstance(e, Const):
            return str(e.value)
        if isinstance(e, Var):
            return nm(e.index)
        if isinstance(e, Add):
            s, p = " + ".join(go(t, _PREC["add"]) for t in e.terms), _PREC["add"]
        elif isinstance(e, Monus):
            s, p = f"{go(e.left, _PREC['add'])} - {go(e.right, _PREC['add'] + 1)}", _PREC["add"]
        elif isinstance(e, Mul):
            s, p = "*".join(go(f, _PREC["mul"] + 1) for f in e.factors), _PREC["mul"]
        elif isinstance(e, Pow):
            s, p = f"{go(e.base, _PREC['pow'] + 1)}^{e.exp}", _PREC["pow"]
        elif isinstance(e, Max):
            s, p = f"max({', '.join(go(a, 0) for a in e.args)})", _PREC["atom"]
        elif isinstance(e, Min):
            s, p = f"min({', '.join(go(a, 0) for a in e.args)})", _PREC["atom"]
        elif isinstance(e, FloorDiv):
            s, p = f"floor({go(e.arg, _PREC['mul'] + 1)}/{e.divisor})", _PREC["atom"]
        elif isinstance(e, CeilDiv):
            s, p = f"ceil({go(e.arg, _PREC['mul'] + 1)}/{e.divisor})", _PREC["atom"]
        elif isinstance(e, Cmp):
            s, p = f"{go(e.left, _PREC['add'])} {e.op} {go(e.right, _PREC['add'])}", _PREC["cmp"]
        elif isinstance(e, BoolOp):
            q = _PREC[e.op]
            s, p = f" {e.op} ".join(go(a, q + 1) for a in e.args), q
        elif isinstance(e, If):
            s = f"if {go(e.cond, 0)} then {go(e.then, 0)} else {go(e.orelse, 0)}"
            p = _PREC["if"]
        elif isinstance(e, Tup):
            return "(" + ", ".join(go(i, 0) for i in e.items) + ")"
        else:
            raise TypeError(e)
        return f"({s})" if p < ctx else s

    return go(e, 0)


# ---------------------------------------------------------------------------
# compilation to Python callables

def _vmax(*args):
    out = args[0]
    for a in args[1:]:
        out = np.maximum(out, a)
    return out


def _vmin(*args):
    out = args[0]
    for a in args[1:]:
        out = np.minimum(out, a)
    return out


def _smonus(a, b):
    d = a - b
    return d if d > 0 else 0


def _vmonus(a, b):
    return np.maximum(a - b, 0)


_SCALAR_ENV = {"_max": max, "_min": min, "_monus": _smonus}
_VECTOR_ENV = {"_max": _vmax, "_min": _vmin, "_monus": _vmonus, "_where": np.where}


def to_python(e: Expr, vector: bool) -> str:
    def go(e: Expr) -> str:
        if isinstance(e, Const):
            return str(e.value)
        if isinstance(e, Var):
            return f"x{e.index}"
        if isinstance(e, Add):
            return "(" + " + ".join(map(go, e.terms)) + ")"
        if isinstance(e, Mul):
            return "(" + " * ".join(map(go, e.factors)) + ")"
        if isinstance(e, Pow):
            return f"({go(e.base)} ** {e.exp})"
        if isinstance(e, Monus):
            return f"_monus({go(e.left)}, {go(e.right)})"
        if isinstance(e, Max):
            return f"_max({', '.join(map(go, e.args))})"
        if isinstance(e, Min):
            return f"_min({', '.join(map(go, e.args))})"
        if isinstance(e, FloorDiv):
            return f"(({go(e.arg)}) // {e.divisor})"
        if isinstance(e, CeilDiv):
            return f"(-((-({go(e.arg)})) // {e.divisor}))"
        if isinstance(e, Cmp):
            return f"({go(e.left)} {e.op} {go(e.right)})"
        if isinstance(e, BoolOp):
            if vector:
                op = " & " if e.op == "and" else " | "
            else:
                op = f" {e.op} "
            return "(" + op.join(map(go, e.args)) + ")"
        if isinstance(e, If):
            if vector:
                return f"_where({go(e.cond)}, {go(e.then)}, {go(e.orelse)})"
            return f"({go(e.then)} if {go(e.cond)} else {go(e.orelse)})"
        if isinstance(e, Tup):
            inner = ", ".join(map(go, e.items))
            return f"({inner},)" if len(e.items) == 1 else f"({inner})"
        raise TypeError(e)

    return go(e)


@lru_cache(maxsize=None)
def compile_expr(e: Expr, arity: int, vector: bool = False):
    """Compile ``e`` to ``f(x0, ..., x(arity-1))``."""
    params = ", ".join(f"x{i}" for i in range(arity))
    src = f"lambda {params}: {to_python(e, vector)}"
    env = dict(_VECTOR_ENV if vector else _SCALAR_ENV)
    return eval(src, env)  # noqa: S307 - source generated from a closed AST


def evaluate(e: Expr, args: Sequence[int]):
    return compile_expr(e, len(args))(*args)


# ---------------------------------------------------------------------------
# polynomials with natural-number variables

Poly = dict  # exponent tuple -> integer coefficient


def poly_const(c, n: int) -> Poly:
    return {(0,) * n: c} if c else {}


def poly_var(i: int, n: int) -> Poly:
    exp = [0] * n
    exp[i] = 1
    return {tuple(exp): 1}


def poly_add(p: Poly, q: Poly, sign: int = 1) -> Poly:
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + sign * v
        if out[k] == 0:
            del out[k]
    return out


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for k1, v1 in p.items():
        for k2, v2 in q.items():
            k = tuple(a + b for a, b in zip(k1, k2))
            out[k] = out.get(k, 0) + v1 * v2
            if out[k] == 0:
                del out[k]
    return out


def poly_nonneg(p: Poly) -> bool:
    return all(v >= 0 for v in p.values())


def to_poly(e: Expr, n: int, subst: Sequence[Poly] | None = None) -> Poly | None:
    """Normalize ``e`` to a polynomial, or ``None`` when it is not one.

    ``subst`` replaces each variable by a polynomial in fresh variables
    (used to express domains such as ``2t+1``).  ``max``, monus and exact
    divisions are resolved when the comparison is decided coefficient-wise.
    """
    if isinstance(e, Const):
        return poly_const(e.value, n)
    if isinstance(e, Var):
        return dict(subst[e.index]) if subst is not None else poly_var(e.index, n)
    if isinstance(e, Add):
        acc: Poly = {}
        for t in e.terms:
            p = to_poly(t, n, subst)
            if p is None:
                return None
            acc = poly_add(acc, p)
        return acc
    if isinstance(e, Mul):
        acc = poly_const(1, n)
        for f in e.factors:
            p = to_poly(f, n, subst)
            if p is None:
                return None
            acc = poly_mul(acc, p)
        return acc
    if isinstance(e, Pow):
        p = to_poly(e.base, n, subst)
        if p is None:
            return None
        acc = poly_const(1, n)
        for _ in range(e.exp):
            acc = poly_mul(acc, p)
        return acc
    if isinstance(e, Monus):
        p, q = to_poly(e.left, n, subst), to_poly(e.right, n, subst)
        if p is None or q is None:
            return None
        d = poly_add(p, q, -1)
        if poly_nonneg(d):
            return d
        if poly_nonneg(poly_add(q, p, -1)):
            return {}
        return None
    if isinstance(e, Max):
        ps = [to_poly(a, n, subst) for a in e.args]
        if any(p is None for p in ps):
            return None
        for p in ps:
            if all(poly_nonneg(poly_add(p, q, -1)) for q in ps):
                return p
        return None
    if isinstance(e, (FloorDiv, CeilDiv)):
        p = to_poly(e.arg, n, subst)
        if p is None or any(v % e.divisor for v in p.values()):
            return None
        return {k: v // e.divisor for k, v in p.items()}
    return None


def linear_form(e: Expr, n: int) -> tuple[list[int], int] | None:
    """Coefficients and constant when ``e`` is affine in its variables."""
    p = to_poly(e, n)
    if p is None:
        return None
    coeffs = [0] * n
    const = 0
    for k, v in p.items():
        s = sum(k)
        if s == 0:
            const = v
        elif s == 1:
            coeffs[k.index(1)] = v
        else:
            return None
    return coeffs, const


def poly_to_expr(p: Poly) -> Expr:
    """Render a polynomial with nonnegative coefficients as an expression."""
    if any(v < 0 for v in p.values()):
        raise ValueError("polynomial has negative coefficients")
    terms = []
    for k in sorted(p, key=lambda k: (-sum(k), tuple(-x for x in k))):
        factors = [power(Var(i), a) for i, a in enumerate(k) if a]
        terms.append(mul(Const(p[k]), *factors))
    return add(*terms) if terms else Const(0)


def poly_eval(p: Poly, xs: Sequence[int]) -> int:
    total = 0
    for k, v in p.items():
        t = v
        for x, a in zip(xs, k):
            t *= x ** a
        total += t
    return total

