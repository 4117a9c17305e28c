from .errors import LineMap, PrologSyntaxError, SyntaxErrors, render_error, render_errors
from .lexer import Token, tokenize
from .parser import parse_program, parse_program_strict, parse_query, parse_term
from .terms import (NIL, Atom, Clause, Compound, Float, Int, Program, SourceSpan,
                    Term, Var, indicator, list_items, make_list, variant)
from .writer import format_clause, format_term

__all__ = [
    "Atom", "Clause", "Compound", "Float", "Int", "LineMap", "NIL", "Program",
    "PrologSyntaxError", "SourceSpan", "SyntaxErrors", "Term", "Token", "Var",
    "format_clause", "format_term", "indicator", "list_items", "make_list",
    "parse_program", "parse_program_strict", "parse_query", "parse_term",
    "render_error", "render_errors", "tokenize", "variant",
]
