"""Surface syntax for programs and values, and elaboration to polygraphs."""

from .ast import (
    ArityError,
    EmptyProgram,
    NonLinearPattern,
    NotAValue,
    ProgramAST,
    ProgramError,
    ProgramSyntaxError,
    RuleDecl,
    SortError,
    TApp,
    TLet,
    TTuple,
    TVar,
    UnknownSymbol,
)
from .elaborate import elaborate, load_program, term_diagram
from .parser import parse_program
from .values import decode_value, encode_value, format_value, numeral, parse_value, term_size

__all__ = [
    "ArityError", "EmptyProgram", "NonLinearPattern", "NotAValue", "ProgramAST", "ProgramError",
    "ProgramSyntaxError", "RuleDecl", "SortError", "TApp", "TLet", "TTuple", "TVar", "UnknownSymbol",
    "elaborate", "load_program", "term_diagram", "parse_program", "decode_value", "encode_value",
    "format_value", "numeral", "parse_value", "term_size",
]
