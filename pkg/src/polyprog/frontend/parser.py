"""Reader for ``.poly`` program files.

::

    # comments start with '#'
    sorts: n
    constructors:
      zero : -> n
      succ : n -> n
    functions:
      minus : n * n -> n
    rules:
      minus(x, zero) => x
      minus(zero, succ(y)) => zero
      minus(succ(x), succ(y)) => minus(x, y)

Rules are separated by newlines or ``;``; a rule continues on the next line
while parentheses are open or after ``=>``, ``=``, ``in`` and ``,``.
Multi-output functions are declared ``split : l -> l * l`` and their results
are bound with ``let (a, b) = split(l) in ...``.  A bare identifier names a
declared nullary cell if there is one, and a variable otherwise.
"""

from __future__ import annotations

import re

from .ast import (
    ArityError,
    CellDecl,
    EmptyProgram,
    NonLinearPattern,
    ProgramAST,
    ProgramSyntaxError,
    RuleDecl,
    SortError,
    TApp,
    TLet,
    TTuple,
    TVar,
    UnknownSymbol,
    pattern_variables,
)

_SECTIONS = ("sorts", "constructors", "functions", "rules")
_IDENT = r"[A-Za-z_][A-Za-z_0-9']*"
_TOK = re.compile(rf"[ \t]*(?:({_IDENT})|(=>|->|[(),;=*:])|(\n)|(\S))")
_CONTINUE_AFTER = {"=>", "=", "in", ",", "->", "*"}


def _tokenize(text: str, line0: int) -> list[tuple[str, str, int, int]]:
    """Tokens as ``(kind, text, line, column)``; newlines at depth 0 are kept."""
    toks = []
    depth = 0
    line, col0 = line0, 0
    pos = 0
    while pos < len(text):
        m = _TOK.match(text, pos)
        if m is None:  # only trailing blanks remain
            break
        col = m.start(m.lastindex) - col0 + 1
        if m.group(1):
            word = m.group(1)
            toks.append(("kw" if word in ("let", "in") else "id", word, line, col))
        elif m.group(2):
            op = m.group(2)
            if op == "(":
                depth += 1
            elif op == ")":
                depth -= 1
            toks.append(("op", op, line, col))
        elif m.group(3):
            if depth == 0 and toks and toks[-1][1] not in _CONTINUE_AFTER and toks[-1][0] != "nl":
                toks.append(("nl", "\n", line, col))
            line += 1
            col0 = m.end()
        else:
            raise ProgramSyntaxError(f"unexpected character {m.group(4)!r}", line, col)
        pos = m.end()
    toks.append(("end", "", line, 1))
    return toks


def _strip_comments(text: str) -> str:
    return "\n".join(l.split("#", 1)[0] for l in text.splitlines())


def _split_sections(text: str) -> dict[str, tuple[int, str]]:
    sections: dict[str, tuple[int, list[str]]] = {}
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        m = re.match(r"^\s*(sorts|constructors|functions|rules)\s*:(.*)$", line)
        if m:
            current = m.group(1)
            if current in sections:
                raise ProgramSyntaxError(f"duplicate section {current!r}", lineno, 1)
            sections[current] = (lineno, [m.group(2)])
        elif line.strip():
            if current is None:
                raise ProgramSyntaxError("text before the first section header", lineno, 1)
            sections[current][1].append(line)
        elif current is not None:
            sections[current][1].append(line)
    return {k: (l, "\n".join(body)) for k, (l, body) in sections.items()}


class _Parser:
    def __init__(self, toks) -> None:
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, text: str | None = None, kind: str | None = None):
        tok = self.toks[self.i]
        if (text is not None and tok[1] != text) or (kind is not None and tok[0] != kind):
            want = repr(text) if text else kind
            found = repr(tok[1]) if tok[0] != "end" else "end of input"
            found = "end of line" if tok[0] == "nl" else found
            raise ProgramSyntaxError(f"expected {want}, found {found}", tok[2], tok[3])
        self.i += 1
        return tok

    def skip_separators(self) -> None:
        while self.peek()[0] == "nl" or self.peek()[1] == ";":
            self.i += 1

    def at_end(self) -> bool:
        return self.peek()[0] == "end"

    # -- signatures -------------------------------------------------------
    def word(self) -> tuple[str, ...]:
        """``a * b * c`` or nothing."""
        if self.peek()[0] != "id":
            return ()
        out = [self.take(kind="id")[1]]
        while self.peek()[1] == "*":
            self.take("*")
            out.append(self.take(kind="id")[1])
        return tuple(out)

    def decl(self) -> CellDecl:
        name = self.take(kind="id")
        self.take(":")
        src = self.word()
        self.take("->")
        tgt = self.word()
        return CellDecl(name[1], src, tgt, name[2])

    # -- terms ------------------------------------------------------------
    def term(self):
        tok = self.peek()
        if tok[1] == "let":
            self.take("let")
            if self.peek()[1] == "(":
                self.take("(")
                names = [self.take(kind="id")[1]]
                while self.peek()[1] == ",":
                    self.take(",")
                    names.append(self.take(kind="id")[1])
                self.take(")")
            else:
                names = [self.take(kind="id")[1]]
            self.take("=")
            bound = self.term()
            self.take("in")
            body = self.term()
            return TLet(tuple(names), bound, body, (tok[2], tok[3]))
        if tok[1] == "(":
            self.take("(")
            items = [self.term()]
            while self.peek()[1] == ",":
                self.take(",")
                items.append(self.term())
            self.take(")")
            return items[0] if len(items) == 1 else TTuple(tuple(items), (tok[2], tok[3]))
        name = self.take(kind="id")
        if self.peek()[1] == "(":
            self.take("(")
            args = []
            if self.peek()[1] != ")":
                args.append(self.term())
                while self.peek()[1] == ",":
                    self.take(",")
                    args.append(self.term())
            self.take(")")
            return TApp(name[1], tuple(args), (name[2], name[3]))
        return TVar(name[1], (name[2], name[3]))

    def rule(self) -> RuleDecl:
        start = self.peek()
        lhs = self.term()
        self.take("=>")
        rhs = self.term()
        nxt = self.peek()
        if nxt[0] not in ("nl", "end") and nxt[1] != ";":
            raise ProgramSyntaxError(f"unexpected {nxt[1]!r} after rule", nxt[2], nxt[3])
        return RuleDecl(lhs, rhs, start[2])


def parse_program(text: str) -> ProgramAST:
    """Parse and check a program; raises on the first problem found."""
    clean = _strip_comments(text)
    if not clean.strip():
        raise EmptyProgram("empty program")
    sections = _split_sections(clean)
    sorts: list[str] = []
    if "sorts" in sections:
        line, body = sections["sorts"]
        for tok in _tokenize(body, line):
            if tok[0] == "id":
                sorts.append(tok[1])
            elif tok[0] not in ("nl", "end") and tok[1] != ",":
                raise ProgramSyntaxError(f"unexpected {tok[1]!r} in sorts", tok[2], tok[3])
    decls = {}
    for sec in ("constructors", "functions"):
        out = []
        if sec in sections:
            line, body = sections[sec]
            p = _Parser(_tokenize(body, line))
            p.skip_separators()
            while not p.at_end():
                out.append(p.decl())
                p.skip_separators()
        decls[sec] = tuple(out)
    rules = []
    if "rules" in sections:
        line, body = sections["rules"]
        p = _Parser(_tokenize(body, line))
        p.skip_separators()
        while not p.at_end():
            rules.append(p.rule())
            p.skip_separators()
    ast = ProgramAST(tuple(sorts), decls["constructors"], decls["functions"], tuple(rules))
    if not (ast.sorts or ast.constructors or ast.functions or ast.rules):
        raise EmptyProgram("empty program")
    return check_program(resolve_constants(ast))


# ---------------------------------------------------------------------------
# name resolution and checking

def resolve_constants(ast: ProgramAST) -> ProgramAST:
    """Turn bare identifiers naming nullary cells into applications."""
    nullary = {c.name for c in ast.constructors + ast.functions if not c.src}

    def fix(t):
        if isinstance(t, TVar):
            return TApp(t.name, (), t.pos) if t.name in nullary else t
        if isinstance(t, TApp):
            return TApp(t.head, tuple(fix(a) for a in t.args), t.pos)
        if isinstance(t, TTuple):
            return TTuple(tuple(fix(a) for a in t.items), t.pos)
        if isinstance(t, TLet):
            return TLet(t.names, fix(t.bound), fix(t.body), t.pos)
        raise TypeError(t)

    rules = tuple(RuleDecl(fix(r.lhs), fix(r.rhs), r.line, r.name) for r in ast.rules)
    return ProgramAST(ast.sorts, ast.constructors, ast.functions, rules)


def _pos(t) -> tuple[int, int]:
    return getattr(t, "pos", (0, 0))


def check_program(ast: ProgramAST) -> ProgramAST:
    """Name uniqueness, declared sorts, rule shapes and sort-correctness."""
    seen: set[str] = set()
    for s in ast.sorts:
        if s in seen:
            raise ProgramSyntaxError(f"duplicate sort {s!r}")
        seen.add(s)
    names: set[str] = set()
    for c in ast.constructors + ast.functions:
        if c.name in names or c.name in seen:
            raise ProgramSyntaxError(f"duplicate name {c.name!r}", c.line, 1)
        names.add(c.name)
        for w in c.src + c.tgt:
            if w not in seen:
                raise UnknownSymbol(f"undeclared sort {w!r} in {c.name}", c.line, 1)
    for c in ast.constructors:
        if len(c.tgt) != 1:
            raise ArityError(f"constructor {c.name} must have exactly one output sort", c.line, 1)
    named = []
    counts: dict[str, int] = {}
    for r in ast.rules:
        head = r.lhs.head if isinstance(r.lhs, TApp) else None
        counts[head] = counts.get(head, 0) + 1
        nm = r.name or f"{head}#{counts[head]}"
        rr = RuleDecl(r.lhs, r.rhs, r.line, nm)
        _check_rule(ast, rr)
        named.append(rr)
    return ProgramAST(ast.sorts, ast.constructors, ast.functions, tuple(named))


def _check_rule(ast: ProgramAST, r: RuleDecl) -> None:
    lhs = r.lhs
    if not isinstance(lhs, TApp):
        raise ProgramSyntaxError("rule must start with a function application", *_pos(lhs))
    f = ast.cell(lhs.head)
    if f is None:
        raise UnknownSymbol(f"unknown symbol {lhs.head!r}", *_pos(lhs))
    if ast.is_constructor(f.name):
        raise SortError(f"rule head {f.name} is a constructor, expected a function", *_pos(lhs))
    if len(lhs.args) != len(f.src):
        raise ArityError(f"{f.name} expects {len(f.src)} arguments, got {len(lhs.args)}", *_pos(lhs))
    env: dict[str, str] = {}
    for a, sort in zip(lhs.args, f.src):
        _check_pattern(ast, a, sort, env)
    vs = pattern_variables(lhs)
    if len(vs) != len(set(vs)):
        dup = next(v for v in vs if vs.count(v) > 1)
        raise NonLinearPattern(f"variable {dup!r} repeated in the left-hand side", *_pos(lhs))
    out = infer_sorts(ast, r.rhs, dict(env))
    if out != f.tgt:
        raise SortError(f"right-hand side has sorts {out}, expected {f.tgt}", *_pos(r.rhs))


def _check_pattern(ast: ProgramAST, t, sort: str, env: dict[str, str]) -> None:
    if isinstance(t, TVar):
        env[t.name] = sort
        return
    if isinstance(t, TTuple) or isinstance(t, TLet):
        raise ProgramSyntaxError("patterns may only contain constructors and variables", *_pos(t))
    c = ast.cell(t.head)
    if c is None:
        raise UnknownSymbol(f"unknown symbol {t.head!r}", *_pos(t))
    if not ast.is_constructor(c.name):
        raise SortError(f"{c.name} is not a constructor and cannot appear in a pattern", *_pos(t))
    if len(t.args) != len(c.src):
        raise ArityError(f"{c.name} expects {len(c.src)} arguments, got {len(t.args)}", *_pos(t))
    if c.tgt != (sort,):
        raise SortError(f"{c.name} builds {c.tgt[0]}, expected {sort}", *_pos(t))
    for a, s in zip(t.args, c.src):
        _check_pattern(ast, a, s, env)


def infer_sorts(ast: ProgramAST, t, env: dict[str, str]) -> tuple[str, ...]:
    """Output sorts of a right-hand-side term under variable sorts ``env``."""
    if isinstance(t, TVar):
        if t.name not in env:
            raise UnknownSymbol(f"unknown variable or symbol {t.name!r}", *_pos(t))
        return (env[t.name],)
    if isinstance(t, TApp):
        c = ast.cell(t.head)
        if c is None:
            raise UnknownSymbol(f"unknown symbol {t.head!r}", *_pos(t))
        if len(t.args) != len(c.src):
            raise ArityError(f"{c.name} expects {len(c.src)} arguments, got {len(t.args)}", *_pos(t))
        for a, s in zip(t.args, c.src):
            got = infer_sorts(ast, a, env)
            if got != (s,):
                raise SortError(f"argument of {c.name} has sorts {got}, expected {s}", *_pos(a))
        return c.tgt
    if isinstance(t, TTuple):
        out: tuple = ()
        for a in t.items:
            got = infer_sorts(ast, a, env)
            if len(got) != 1:
                raise ArityError("tuple components must be single values", *_pos(a))
            out += got
        return out
    if isinstance(t, TLet):
        got = infer_sorts(ast, t.bound, env)
        if len(got) != len(t.names):
            raise ArityError(f"let binds {len(t.names)} names to {len(got)} results", *_pos(t))
        if len(set(t.names)) != len(t.names):
            raise ProgramSyntaxError("let binds the same name twice", *_pos(t))
        inner = dict(env)
        for n, s in zip(t.names, got):
            if n in env:
                raise ProgramSyntaxError(f"let rebinds {n!r}", *_pos(t))
            inner[n] = s
        return infer_sorts(ast, t.body, inner)
    raise TypeError(t)
