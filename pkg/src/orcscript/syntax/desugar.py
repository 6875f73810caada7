"""Tree rewrites applied after parsing.

* ``at (expr) ...`` / ``whenever (expr) ...`` become handlers on
  ``makeEvent(expr)``.
* ``class Name { ... }`` becomes an object deriving from ``Object`` whose
  slots are the member declarations.
"""

from __future__ import annotations

import dataclasses

from . import ast as A


def _rebuild(node: A.Node, fn) -> A.Node:
    changes = {}
    for f in dataclasses.fields(node):
        if f.name == "pos":
            continue
        value = getattr(node, f.name)
        new = _map_value(value, fn)
        if new is not value:
            changes[f.name] = new
    return dataclasses.replace(node, **changes) if changes else node


def _map_value(value, fn):
    if isinstance(value, A.Node):
        return fn(value)
    if isinstance(value, A.POuter):
        expr = fn(value.expr)
        return value if expr is value.expr else A.POuter(expr)
    if isinstance(value, (A.PList, A.PTuple)):
        items = _map_value(value.items, fn)
        return value if items is value.items else type(value)(items)
    if isinstance(value, A.PDict):
        items = _map_value(value.items, fn)
        return value if items is value.items else A.PDict(value.keys, items)
    if isinstance(value, tuple):
        mapped = tuple(_map_value(v, fn) for v in value)
        if all(a is b for a, b in zip(mapped, value)):
            return value
        return mapped
    return value


def desugar_at(node: A.Node) -> A.Node:
    """Rewrite a condition handler into an event handler over ``makeEvent``."""
    if isinstance(node, A.AtCond):
        event = A.Call(A.Ident("makeEvent", node.pos), (node.cond,), node.pos)
        return A.AtEvent(node.kind, event, None, None, node.duration, node.body, node.onleave, node.pos)
    return node


def desugar_class(node: A.Node) -> A.Node:
    if not isinstance(node, A.ClassDecl):
        return node
    pos = node.pos
    name = A.Ident(node.name, pos)
    items: list[A.Node] = [
        A.VarDecl(name, A.SlotAccess(A.Ident("Object", pos), "new", pos), pos),
        A.VarDecl(A.SlotAccess(name, "type", pos), A.Literal(node.name, pos), pos),
    ]
    for member in node.members:
        if isinstance(member, A.FunctionDecl) and isinstance(member.target, A.Ident):
            member = dataclasses.replace(member, target=A.SlotAccess(name, member.target.name, member.pos))
        elif isinstance(member, A.VarDecl) and isinstance(member.target, A.Ident):
            member = dataclasses.replace(member, target=A.SlotAccess(name, member.target.name, member.pos))
        items.append(member)
    items.append(name)
    return A.Sequence(tuple(items), (";",) * (len(items) - 1) + ("",), pos)


def desugar(node: A.Node) -> A.Node:
    """Apply every rewrite, bottom-up, over the whole tree."""

    def visit(n: A.Node) -> A.Node:
        n = _rebuild(n, visit)
        return desugar_class(desugar_at(n))

    return visit(node)
