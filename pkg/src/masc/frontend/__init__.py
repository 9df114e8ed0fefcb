"""Lexing, parsing, static checking and the bounded-loop rewrite."""

from __future__ import annotations

from . import ast
from .checker import CheckedProgram, check, check_program, require_ok
from .parser import parse, parse_expression, parse_statement
from .printer import to_source
from .rewrite import rewrite_bounded_loops


def load(source: str) -> CheckedProgram:
    """Parse, rewrite directed loops and check; raises on any error."""
    program = rewrite_bounded_loops(parse(source))
    return require_ok(check_program(program))


__all__ = ["ast", "CheckedProgram", "check", "check_program", "load", "parse", "parse_expression",
           "parse_statement", "rewrite_bounded_loops", "to_source"]
