"""Reader for ``.interp`` files.

One declaration per line; ``#`` starts a comment::

    monoid sum                       # optional, sum is the default
    domain l = 2N+1                  # N-{0}, N+1, 2N+1, {1}, {1,2,3}
    current cons(x, y) = x + y + 1
    current split(2x+1) = (2*ceil(x/2) + 1, 2*floor(x/2) + 1)
    heat merge(2x+1, 2y+1) = if x*y == 0 then 1 else x + y

Parameters may be written ``a*x+b`` (or ``ax+b``): the body is then read
with ``x = (u - b)/a`` where ``u`` is the raw current, and stored in raw
form.  ``-`` is truncated subtraction, ``/`` is floor division by a
positive constant, ``floor(e/k)`` and ``ceil(e/k)`` round explicitly, and
``max``/``min`` take any number of arguments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..signature import Polygraph
from .domains import Domain, parse_domain
from .expr import (
    BoolOp,
    Cmp,
    Const,
    Expr,
    If,
    Tup,
    Var,
    add,
    ceildiv,
    floordiv,
    maximum,
    minimum,
    monus,
    mul,
    power,
)
from .interpretation import DifferentialInterp, FunctorialInterp, Interpretation


class InterpSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
        self.line = line
        self.column = column


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(==|!=|<=|>=|[-+*/^(),<>]))")
_KEYWORDS = {"if", "then", "else", "and", "or"}


def _tokenize(text: str, line: int) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InterpSyntaxError(f"unexpected character {text[pos]!r}", line, pos + 1)
        col = m.start(m.lastindex) + 1
        if m.group(1):
            out.append(("num", m.group(1), col))
        elif m.group(2):
            word = m.group(2)
            out.append(("kw" if word in _KEYWORDS else "id", word, col))
        else:
            out.append(("op", m.group(3), col))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


class _ExprParser:
    def __init__(self, tokens, env: dict[str, Expr], line: int) -> None:
        self.toks = tokens
        self.i = 0
        self.env = env
        self.line = line
        self.stop_at_slash = False  # inside floor(e/k) / ceil(e/k)

    def peek(self):
        return self.toks[self.i]

    def take(self, value: str | None = None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise InterpSyntaxError(f"expected {value!r}, found {tok[1] or 'end of line'!r}",
                                    self.line, tok[2])
        self.i += 1
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            raise InterpSyntaxError(f"unexpected {tok[1]!r}", self.line, tok[2])
        return e

    def expr(self) -> Expr:
        if self.peek() == ("kw", "if", self.peek()[2]):
            self.take("if")
            cond = self.disj()
            self.take("then")
            a = self.expr()
            self.take("else")
            b = self.expr()
            return If(cond, a, b)
        return self.disj()

    def disj(self) -> Expr:
        args = [self.conj()]
        while self.peek()[1] == "or":
            self.take()
            args.append(self.conj())
        return args[0] if len(args) == 1 else BoolOp("or", tuple(args))

    def conj(self) -> Expr:
        args = [self.cmp()]
        while self.peek()[1] == "and":
            self.take()
            args.append(self.cmp())
        return args[0] if len(args) == 1 else BoolOp("and", tuple(args))

    def cmp(self) -> Expr:
        left = self.sum()
        if self.peek()[1] in ("==", "!=", "<", "<=", ">", ">="):
            op = self.take()[1]
            return Cmp(op, left, self.sum())
        return left

    def sum(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            r = self.term()
            e = add(e, r) if op == "+" else monus(e, r)
        return e

    def term(self) -> Expr:
        e = self.power()
        while self.peek()[1] in ("*", "/"):
            if self.peek()[1] == "/" and self.stop_at_slash:
                break
            _, op, col = self.take()
            r = self.power()
            if op == "*":
                e = mul(e, r)
            else:
                if not isinstance(r, Const) or r.value <= 0:
                    raise InterpSyntaxError("division only by positive constants", self.line, col)
                e = floordiv(e, r.value)
        return e

    def power(self) -> Expr:
        e = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, col = self.take()
            if kind != "num":
                raise InterpSyntaxError("exponent must be a natural constant", self.line, col)
            e = power(e, int(val))
        return e

    def atom(self) -> Expr:
        kind, val, col = self.take()
        if kind == "num":
            return Const(int(val))
        if kind == "op" and val == "(":
            saved, self.stop_at_slash = self.stop_at_slash, False
            items = [self.expr()]
            while self.peek()[1] == ",":
                self.take()
                items.append(self.expr())
            self.take(")")
            self.stop_at_slash = saved
            return items[0] if len(items) == 1 else Tup(tuple(items))
        if kind == "id":
            if self.peek()[1] == "(" and val in ("max", "min", "floor", "ceil"):
                self.take("(")
                saved = self.stop_at_slash
                if val in ("floor", "ceil"):
                    self.stop_at_slash = True
                    num = self.sum()
                    self.stop_at_slash = saved
                    self.take("/")
                    k = self.take()
                    if k[0] != "num" or int(k[1]) <= 0:
                        raise InterpSyntaxError("division only by positive constants", self.line, k[2])
                    self.take(")")
                    return floordiv(num, int(k[1])) if val == "floor" else ceildiv(num, int(k[1]))
                self.stop_at_slash = False
                args = [self.expr()]
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.take(")")
                self.stop_at_slash = saved
                return maximum(*args) if val == "max" else minimum(*args)
            if val in self.env:
                return self.env[val]
            raise InterpSyntaxError(f"unknown variable {val!r}", self.line, col)
        raise InterpSyntaxError(f"unexpected {val or 'end of line'!r}", self.line, col)


_PARAM = re.compile(r"^\s*(?:(\d+)\s*\*?\s*)?([A-Za-z_][A-Za-z_0-9]*)\s*(?:\+\s*(\d+))?\s*$")
_DECL = re.compile(r"^(current|heat)\s+([A-Za-z_][A-Za-z_0-9]*(?:\[[^\]]*\])?)\s*(?:\(([^)]*)\))?\s*=\s*(.*)$")


def _param_env(params: str, line: int) -> tuple[dict[str, Expr], int]:
    env: dict[str, Expr] = {}
    items = [p for p in params.split(",")] if params.strip() else []
    for i, p in enumerate(items):
        m = _PARAM.match(p)
        if not m:
            raise InterpSyntaxError(f"bad parameter {p.strip()!r}", line)
        step = int(m.group(1)) if m.group(1) else 1
        base = int(m.group(3)) if m.group(3) else 0
        if step == 0:
            raise InterpSyntaxError("parameter scale must be positive", line)
        name = m.group(2)
        if name in env:
            raise InterpSyntaxError(f"repeated parameter {name!r}", line)
        env[name] = floordiv(monus(Var(i), Const(base)), step)
    return env, len(items)


@dataclass
class InterpSource:
    """Parsed but unbound contents of an ``.interp`` file."""

    domains: dict = field(default_factory=dict)
    currents: dict = field(default_factory=dict)  # name -> (arity, Expr)
    heats: dict = field(default_factory=dict)
    monoid: str = "sum"


def parse_interp(text: str) -> InterpSource:
    out = InterpSource()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("monoid"):
            word = line[len("monoid"):].strip()
            if word not in ("sum", "max"):
                raise InterpSyntaxError(f"unknown monoid {word!r}", lineno)
            out.monoid = word
            continue
        if line.startswith("domain"):
            m = re.match(r"^domain\s+([A-Za-z_][A-Za-z_0-9]*)\s*=\s*(.+)$", line)
            if not m:
                raise InterpSyntaxError("expected 'domain <wire> = <domain>'", lineno)
            try:
                out.domains[m.group(1)] = parse_domain(m.group(2))
            except ValueError as exc:
                raise InterpSyntaxError(str(exc), lineno) from None
            continue
        m = _DECL.match(line)
        if not m:
            raise InterpSyntaxError("expected a domain, current, heat or monoid declaration", lineno)
        what, name, params, body = m.group(1), m.group(2), m.group(3) or "", m.group(4)
        env, arity = _param_env(params, lineno)
        expr = _ExprParser(_tokenize(body, lineno), env, lineno).parse()
        table = out.currents if what == "current" else out.heats
        if name in table:
            raise InterpSyntaxError(f"duplicate {what} entry for {name}", lineno)
        table[name] = (arity, expr)
    return out


def bind_interp(src: InterpSource, P: Polygraph) -> Interpretation:
    """Check a parsed interpretation against a signature and build it."""
    for sort in src.domains:
        if sort not in P.one_cells:
            raise InterpSyntaxError(f"domain for unknown wire type {sort!r}")
    currents = {}
    for name, (arity, e) in src.currents.items():
        cell = P.two_cells.get(name)
        if cell is None:
            raise InterpSyntaxError(f"current entry for unknown cell {name!r}")
        if arity != cell.arity:
            raise InterpSyntaxError(f"{name} takes {cell.arity} arguments, entry has {arity}")
        items = e.items if isinstance(e, Tup) else (e,)
        if len(items) != cell.coarity:
            raise InterpSyntaxError(f"{name} has {cell.coarity} outputs, entry gives {len(items)}")
        currents[name] = Tup(tuple(items))
    heats = {}
    for name, (arity, e) in src.heats.items():
        cell = P.two_cells.get(name)
        if cell is None:
            raise InterpSyntaxError(f"heat entry for unknown cell {name!r}")
        if arity != cell.arity:
            raise InterpSyntaxError(f"{name} takes {cell.arity} arguments, entry has {arity}")
        if isinstance(e, Tup):
            raise InterpSyntaxError(f"heat of {name} must be a single number")
        heats[name] = e
    for c in P.constructors + P.functions:
        if c.name not in currents:
            raise InterpSyntaxError(f"missing current entry for {c.name}")
    for c in P.functions:
        if c.name not in heats:
            raise InterpSyntaxError(f"missing heat entry for {c.name}")
    domains: dict[str, Domain] = dict(src.domains)
    phi = FunctorialInterp(P, domains, currents)
    return Interpretation(phi, DifferentialInterp(P, heats, src.monoid))


def load_interp(text: str, P: Polygraph) -> Interpretation:
    return bind_interp(parse_interp(text), P)
