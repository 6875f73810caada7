"""Tokenizer for orcscript source text."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any

from ..errors import IncompleteInput, LexError

KEYWORDS = frozenset({
    "var", "function", "class", "at", "whenever", "onleave", "if", "else",
    "loop", "while", "for", "for&", "return", "true", "false", "void", "this",
})

# Longest first so that maximal munch works with a simple scan.
PUNCTUATION = (
    "=>", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=",
    "<", ">", "=", "+", "-", "*", "/", "%", "!", "?", "~", "&", ",", ";", ".",
    ":", "(", ")", "[", "]", "{", "}",
)

DURATION_UNITS = {"ms": 1, "s": 1000, "min": 60_000, "h": 3_600_000}

_NUMBER = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", '"': '"', "'": "'", "0": "\0"}


@dataclass(frozen=True)
class Token:
    kind: str  # identifier | number | duration | string | punctuation | keyword | eof
    lexeme: str
    line: int
    column: int
    start: int = field(default=0, compare=False)
    end: int = field(default=0, compare=False)
    value: Any = None

    @property
    def position(self) -> tuple[int, int]:
        return (self.line, self.column)

    def is_(self, kind: str, lexeme: str | None = None) -> bool:
        return self.kind == kind and (lexeme is None or self.lexeme == lexeme)

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.lexeme!r}, {self.line}:{self.column})"


def tokenize(source: str) -> list[Token]:
    """Split ``source`` into tokens, dropping whitespace and comments.

    The returned list does not contain the end-of-file marker; the parser
    adds one.  Every token records its ``start``/``end`` offsets so the
    skipped text between tokens can be recovered.
    """
    tokens: list[Token] = []
    i = 0
    line, line_start = 1, 0
    n = len(source)

    def col(pos: int) -> int:
        return pos - line_start + 1

    while i < n:
        c = source[i]
        if c == "\n":
            i += 1
            line, line_start = line + 1, i
            continue
        if c in " \t\r\f\v":
            i += 1
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j < 0 else j
            continue
        if source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise IncompleteInput("unterminated comment", line, col(i))
            for k in range(i, j):
                if source[k] == "\n":
                    line, line_start = line + 1, k + 1
            i = j + 2
            continue

        start, tline, tcol = i, line, col(i)
        if c.isdigit():
            m = _NUMBER.match(source, i)
            j = m.end()
            text = m.group()
            number = float(text)
            unit = _IDENT.match(source, j)
            if unit:
                suffix = unit.group()
                if suffix not in DURATION_UNITS:
                    raise LexError(f"malformed number {source[i:unit.end()]!r}", tline, tcol)
                j = unit.end()
                ms = number * DURATION_UNITS[suffix]
                tokens.append(Token("duration", source[i:j], tline, tcol, start, j, int(round(ms))))
            else:
                if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                    raise LexError(f"malformed number {source[i:j + 2]!r}", tline, tcol)
                tokens.append(Token("number", text, tline, tcol, start, j, number))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = _IDENT.match(source, i).end()
            word = source[i:j]
            if word == "for" and j < n and source[j] == "&":
                tokens.append(Token("keyword", "for&", tline, tcol, start, j + 1))
                i = j + 1
                continue
            kind = "keyword" if word in KEYWORDS else "identifier"
            tokens.append(Token(kind, word, tline, tcol, start, j))
            i = j
            continue
        if c == '"':
            j = i + 1
            chars = []
            while True:
                if j >= n:
                    raise IncompleteInput("unterminated string", tline, tcol)
                d = source[j]
                if d == '"':
                    j += 1
                    break
                if d == "\n":
                    raise LexError("unterminated string", tline, tcol)
                if d == "\\":
                    if j + 1 >= n:
                        raise IncompleteInput("unterminated string", tline, tcol)
                    e = source[j + 1]
                    if e not in _ESCAPES:
                        raise LexError(f"unknown escape \\{e}", line, col(j))
                    chars.append(_ESCAPES[e])
                    j += 2
                    continue
                chars.append(d)
                j += 1
            tokens.append(Token("string", source[i:j], tline, tcol, start, j, "".join(chars)))
            i = j
            continue
        for p in PUNCTUATION:
            if source.startswith(p, i):
                tokens.append(Token("punctuation", p, tline, tcol, start, i + len(p)))
                i += len(p)
                break
        else:
            raise LexError(f"unexpected character {c!r}", tline, tcol)
    return tokens
