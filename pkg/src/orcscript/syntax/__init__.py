"""Front end: tokenizer, parser, desugaring and canonical printing."""

from .desugar import desugar, desugar_at, desugar_class
from .lexer import Token, tokenize
from .parser import Parser, parse
from .printer import program_source, to_source


def compile_source(source: str):
    """Tokenize, parse and desugar ``source`` in one step."""
    return desugar(parse(source))


__all__ = [
    "Parser", "Token", "compile_source", "desugar", "desugar_at", "desugar_class",
    "parse", "program_source", "to_source", "tokenize",
]
