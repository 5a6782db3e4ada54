"""Surface syntax trees for programs, rules and values."""

from __future__ import annotations

from dataclasses import dataclass, field


class ProgramError(ValueError):
    """Base class for errors in program text, with an optional position."""

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


class ProgramSyntaxError(ProgramError):
    pass


class EmptyProgram(ProgramSyntaxError):
    pass


class UnknownSymbol(ProgramError):
    pass


class ArityError(ProgramError):
    pass


class SortError(ProgramError):
    pass


class NonLinearPattern(ProgramError):
    pass


class NotAValue(ValueError):
    """A diagram or term that is not built from constructors only."""


@dataclass(frozen=True)
class TVar:
    name: str
    pos: tuple = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TApp:
    head: str
    args: tuple = ()
    pos: tuple = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        if not self.args:
            return self.head
        return f"{self.head}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class TTuple:
    items: tuple
    pos: tuple = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.items)) + ")"


@dataclass(frozen=True)
class TLet:
    names: tuple
    bound: object
    body: object
    pos: tuple = field(default=(0, 0), compare=False)

    def __str__(self) -> str:
        pat = self.names[0] if len(self.names) == 1 else "(" + ", ".join(self.names) + ")"
        return f"let {pat} = {self.bound} in {self.body}"


TermExpr = TVar | TApp | TTuple | TLet


@dataclass(frozen=True)
class CellDecl:
    name: str
    src: tuple
    tgt: tuple
    line: int = 0


@dataclass(frozen=True)
class RuleDecl:
    lhs: TApp
    rhs: object
    line: int = 0
    name: str = ""

    def __str__(self) -> str:
        return f"{self.lhs} => {self.rhs}"


@dataclass(frozen=True)
class ProgramAST:
    sorts: tuple
    constructors: tuple  # of CellDecl
    functions: tuple  # of CellDecl
    rules: tuple  # of RuleDecl

    def cell(self, name: str) -> CellDecl | None:
        for c in self.constructors + self.functions:
            if c.name == name:
                return c
        return None

    def is_constructor(self, name: str) -> bool:
        return any(c.name == name for c in self.constructors)


def pattern_variables(t) -> list[str]:
    """Variables of a pattern in left-to-right order (with repeats)."""
    if isinstance(t, TVar):
        return [t.name]
    if isinstance(t, TApp):
        out = []
        for a in t.args:
            out += pattern_variables(a)
        return out
    raise TypeError(t)
