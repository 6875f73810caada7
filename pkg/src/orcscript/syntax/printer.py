"""Canonical source rendering of ASTs.

``parse(to_source(tree))`` yields a tree equal to ``tree``; binary
expressions are always parenthesized to make that hold without tracking
precedence.
"""

from __future__ import annotations

from . import ast as A

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r", "\0": "\\0"}


def quote(text: str) -> str:
    return '"' + "".join(_ESCAPES.get(c, c) for c in text) + '"'


def literal_source(value) -> str:
    if value is None:
        return "void"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        return quote(value)
    if value < 0:
        return "(-" + literal_source(-value) + ")"
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(float(value))


def _args(items) -> str:
    return ", ".join(to_source(i) for i in items)


def pattern_source(p: A.Pattern) -> str:
    if isinstance(p, A.PBind):
        return "var " + p.name
    if isinstance(p, A.PLit):
        return literal_source(p.value)
    if isinstance(p, A.POuter):
        return to_source(p.expr)
    if isinstance(p, A.PList):
        return "[" + ", ".join(pattern_source(i) for i in p.items) + "]"
    if isinstance(p, A.PTuple):
        inner = ", ".join(pattern_source(i) for i in p.items)
        return "(" + inner + ("," if len(p.items) == 1 else "") + ")"
    if isinstance(p, A.PDict):
        if not p.keys:
            return "[=>]"
        return "[" + ", ".join(f"{quote(k)} => {pattern_source(v)}" for k, v in zip(p.keys, p.items)) + "]"
    raise TypeError(p)


def _sequence(seq: A.Sequence) -> str:
    return " ".join(to_source(item) + sep for item, sep in zip(seq.items, seq.seps))


def _handler(kind: str, head: str, body: A.Node, onleave) -> str:
    text = f"{kind} ({head}) {to_source(body)}"
    if onleave is not None:
        text += " onleave " + to_source(onleave)
    return text


def to_source(node: A.Node) -> str:
    t = type(node)
    if t is A.Literal:
        return literal_source(node.value)
    if t is A.ListLit:
        return "[" + _args(node.items) + "]"
    if t is A.TupleLit:
        return "(" + _args(node.items) + ("," if len(node.items) == 1 else "") + ")"
    if t is A.DictLit:
        if not node.pairs:
            return "[=>]"
        return "[" + ", ".join(f"{to_source(k)} => {to_source(v)}" for k, v in node.pairs) + "]"
    if t is A.Ident:
        return node.name
    if t is A.This:
        return "this"
    if t is A.SlotAccess:
        return f"{_postfix_target(node.target)}.{node.name}"
    if t is A.Index:
        return f"{_postfix_target(node.target)}[{to_source(node.index)}]"
    if t is A.Call:
        return f"{_postfix_target(node.callee)}({_args(node.args)})"
    if t is A.BinOp:
        return f"({_operand(node.left)} {node.op} {_operand(node.right)})"
    if t is A.UnaryOp:
        return f"({node.op}{_operand(node.operand)})"
    if t is A.Assign:
        return f"{to_source(node.target)} = {_operand(node.value)}"
    if t is A.CompoundAssign:
        return f"{to_source(node.target)} {node.op}= {_operand(node.value)}"
    if t is A.IncDec:
        return f"{_postfix_target(node.target)}{node.op}"
    if t is A.VarDecl:
        text = "var " + to_source(node.target)
        return text if node.value is None else f"{text} = {to_source(node.value)}"
    if t is A.FunctionDecl:
        head = "function " + (to_source(node.target) if node.target is not None else "")
        return f"{head}({', '.join(node.params)}) {to_source(node.body)}"
    if t is A.ClassDecl:
        return f"class {node.name} {{ " + " ".join(to_source(m) + ";" for m in node.members) + " }"
    if t is A.Emit:
        return f"{_postfix_target(node.target)}!({_args(node.args)})"
    if t is A.PatternVar:
        return "var " + node.name
    if t is A.EventQuery:
        text = _postfix_target(node.event) + "?"
        if node.patterns is not None:
            text += "(" + ", ".join(pattern_source(p) for p in node.patterns) + ")"
        return text
    if t is A.Sequence:
        return "{ " + _sequence(node) + " }"
    if t is A.Scope:
        return "{ " + _sequence(node.body) + " }"
    if t is A.AndNode:
        return " & ".join(to_source(i) for i in node.items)
    if t is A.If:
        text = f"if ({to_source(node.cond)}) {to_source(node.then)}"
        return text if node.orelse is None else f"{text} else {to_source(node.orelse)}"
    if t is A.Loop:
        return "loop " + to_source(node.body)
    if t is A.While:
        return f"while ({to_source(node.cond)}) {to_source(node.body)}"
    if t is A.For:
        kw = "for&" if node.concurrent else "for"
        return f"{kw} (var {node.var} : {to_source(node.iterable)}) {to_source(node.body)}"
    if t is A.Return:
        return "return" if node.value is None else "return " + to_source(node.value)
    if t is A.AtEvent:
        head = _postfix_target(node.event) + "?"
        if node.patterns is not None:
            head += "(" + ", ".join(pattern_source(p) for p in node.patterns) + ")"
        if node.guard is not None:
            head += " if " + to_source(node.guard)
        if node.duration is not None:
            head += " ~ " + to_source(node.duration)
        return _handler(node.kind, head, node.body, node.onleave)
    if t is A.AtCond:
        head = to_source(node.cond)
        if node.duration is not None:
            head += " ~ " + to_source(node.duration)
        return _handler(node.kind, head, node.body, node.onleave)
    raise TypeError(f"cannot render {node!r}")


_POSTFIX_SAFE = (A.Ident, A.This, A.SlotAccess, A.Index, A.Call, A.ListLit, A.DictLit, A.TupleLit, A.Emit)


def _postfix_target(node: A.Node) -> str:
    text = to_source(node)
    if isinstance(node, _POSTFIX_SAFE) or (isinstance(node, A.Literal) and isinstance(node.value, str)):
        return text
    if isinstance(node, (A.BinOp, A.UnaryOp)):
        return text  # already parenthesized
    return f"({text})"


def _operand(node: A.Node) -> str:
    if isinstance(node, (A.Assign, A.CompoundAssign)):
        return f"({to_source(node)})"
    return to_source(node)


def program_source(program: A.Sequence) -> str:
    """Render a whole program (a top-level ``Sequence``) without braces."""
    return _sequence(program)
