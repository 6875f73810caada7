"""Exception hierarchy shared by the front end and the runtime."""

from __future__ import annotations


class OrcError(Exception):
    """Base class for every error raised by orcscript."""


class LexError(OrcError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}.{column}: {message}")
        self.line = line
        self.column = column


class ParseError(OrcError):
    """Syntax error with a position and the set of tokens that would have been accepted."""

    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()):
        text = f"{line}.{column}: {message}"
        if expected:
            text += " (expected " + ", ".join(sorted(expected)) + ")"
        super().__init__(text)
        self.line = line
        self.column = column
        self.expected = expected


class IncompleteInput(ParseError):
    """The chunk ended inside an open construct; the REPL should ask for more."""


class RuntimeOrcError(OrcError):
    """Error raised while evaluating a program; reported as a ``!!!`` line."""
