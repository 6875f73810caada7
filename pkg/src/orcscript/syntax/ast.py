"""AST node and pattern definitions.

Nodes are immutable; child sequences are tuples.  Source positions are kept
for error messages but excluded from equality so that re-parsed trees
compare equal to the originals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

Pos = tuple[int, int]
_NOPOS: Pos = (0, 0)


def _pos() -> Any:
    return field(default=_NOPOS, compare=False, repr=False)


class Node:
    __slots__ = ()


# -- expressions --------------------------------------------------------------

@dataclass(frozen=True)
class Literal(Node):
    value: Any  # float | str | bool | VOID marker (None)
    pos: Pos = _pos()


@dataclass(frozen=True)
class ListLit(Node):
    items: tuple[Node, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class TupleLit(Node):
    items: tuple[Node, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class DictLit(Node):
    pairs: tuple[tuple[Node, Node], ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Ident(Node):
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class This(Node):
    pos: Pos = _pos()


@dataclass(frozen=True)
class SlotAccess(Node):
    target: Node
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Index(Node):
    target: Node
    index: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class Call(Node):
    callee: Node
    args: tuple[Node, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class UnaryOp(Node):
    op: str
    operand: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class Assign(Node):
    target: Node  # Ident | SlotAccess | Index
    value: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class CompoundAssign(Node):
    op: str  # one of + - * /
    target: Node
    value: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class IncDec(Node):
    op: str  # "++" | "--"
    target: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class VarDecl(Node):
    target: Node  # Ident | SlotAccess
    value: Optional[Node]
    pos: Pos = _pos()


@dataclass(frozen=True)
class FunctionDecl(Node):
    """Named (``target`` set) or anonymous function."""

    target: Optional[Node]
    params: tuple[str, ...]
    body: "Scope"
    pos: Pos = _pos()


@dataclass(frozen=True)
class ClassDecl(Node):
    name: str
    members: tuple[Node, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Emit(Node):
    target: Node
    args: tuple[Node, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class EventQuery(Node):
    """``e?`` / ``e?(patterns)``; only meaningful inside an at/whenever header."""

    event: Node
    patterns: Optional[tuple["Pattern", ...]]
    pos: Pos = _pos()


@dataclass(frozen=True)
class PatternVar(Node):
    """``var x`` written where a pattern is expected."""

    name: str
    pos: Pos = _pos()


# -- statements ---------------------------------------------------------------

@dataclass(frozen=True)
class Sequence(Node):
    """Statements with their connectors.

    ``seps[i]`` is the connector after ``items[i]``: ``";"``, ``","`` or ``""``
    for an unterminated last statement.  A ``","`` statement runs in the
    background.
    """

    items: tuple[Node, ...]
    seps: tuple[str, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Scope(Node):
    body: Sequence
    pos: Pos = _pos()


@dataclass(frozen=True)
class AndNode(Node):
    """``a & b & ...``: start every side, finish when all did."""

    items: tuple[Node, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class If(Node):
    cond: Node
    then: Node
    orelse: Optional[Node]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Loop(Node):
    body: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class While(Node):
    cond: Node
    body: Node
    pos: Pos = _pos()


@dataclass(frozen=True)
class For(Node):
    var: str
    iterable: Node
    body: Node
    concurrent: bool = False
    pos: Pos = _pos()


@dataclass(frozen=True)
class Return(Node):
    value: Optional[Node]
    pos: Pos = _pos()


@dataclass(frozen=True)
class AtEvent(Node):
    """Handler on an event.  ``patterns is None`` means any arity (``e?``)."""

    kind: str  # "at" | "whenever"
    event: Node
    patterns: Optional[tuple["Pattern", ...]]
    guard: Optional[Node]
    duration: Optional[Node]
    body: Node
    onleave: Optional[Node]
    pos: Pos = _pos()


@dataclass(frozen=True)
class AtCond(Node):
    """Handler on a boolean expression; removed by desugaring."""

    kind: str
    cond: Node
    duration: Optional[Node]
    body: Node
    onleave: Optional[Node]
    pos: Pos = _pos()


# -- patterns -----------------------------------------------------------------

class Pattern:
    __slots__ = ()


@dataclass(frozen=True)
class PBind(Pattern):
    name: str


@dataclass(frozen=True)
class PLit(Pattern):
    value: Any


@dataclass(frozen=True)
class POuter(Pattern):
    expr: Node


@dataclass(frozen=True)
class PList(Pattern):
    items: tuple[Pattern, ...]


@dataclass(frozen=True)
class PTuple(Pattern):
    items: tuple[Pattern, ...]


@dataclass(frozen=True)
class PDict(Pattern):
    keys: tuple[str, ...]
    items: tuple[Pattern, ...]


def pattern_binds(p: Pattern) -> list[str]:
    """Names bound by ``p``, left to right, duplicates included."""
    if isinstance(p, PBind):
        return [p.name]
    if isinstance(p, (PList, PTuple, PDict)):
        out: list[str] = []
        for c in p.items:
            out.extend(pattern_binds(c))
        return out
    return []


VOID_LITERAL = None
