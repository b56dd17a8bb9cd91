"""Delta surface syntax: AST, parser, pretty printer and validator."""
from .ast import *  # noqa: F401,F403
from .parser import parse_formula, parse_program
from .printer import dump_ast, pretty_print
from .validate import validate, validate_with_signature

__all__ = [
    "parse_program", "parse_formula", "pretty_print", "dump_ast", "validate", "validate_with_signature",
]
