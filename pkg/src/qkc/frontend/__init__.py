"""Front end for the ``.qk`` kernel language: tokenize, parse, analyze, lower."""

from .analysis import SymbolTable, analyze
from .ast import Program, format_program
from .lexer import Token, tokenize
from .lower import MAX_KERNEL_SIZE, lower
from .parser import parse, parse_source


def lower_source(source: str):
    """Run the whole front end on ``source`` and return the flat :class:`QModule`."""
    prog = parse(tokenize(source))
    return lower(prog, analyze(prog))


__all__ = [
    "MAX_KERNEL_SIZE", "Program", "SymbolTable", "Token", "analyze", "format_program",
    "lower", "lower_source", "parse", "parse_source", "tokenize",
]
