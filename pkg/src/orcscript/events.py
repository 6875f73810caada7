"""Events, handlers and payload pattern matching."""

from __future__ import annotations

from typing import Any, Callable, Optional

from .objects import VOID
from .syntax import ast as A


class EventState:
    """Native state of an event object: its handlers in subscription order."""

    __slots__ = ("subscriptions",)

    def __init__(self):
        self.subscriptions: list[Handler] = []


class Handler:
    """An ``at``/``whenever`` subscription."""

    __slots__ = (
        "event", "kind", "patterns", "guard", "body", "onleave", "duration",
        "scope", "this", "frame", "subscribed", "active", "timer", "loop_job", "condition",
    )

    def __init__(self, event, kind: str, patterns: Optional[tuple[A.Pattern, ...]], guard, body, onleave,
                 duration: Optional[int], scope, this, frame):
        self.event = event
        self.kind = kind
        self.patterns = patterns
        self.guard = guard
        self.body = body
        self.onleave = onleave
        self.duration = duration
        self.scope = scope
        self.this = this
        self.frame = frame
        self.subscribed = False
        # Runtime state used by condition-backed events.
        self.active = False
        self.timer = None
        self.loop_job = None
        self.condition = None

    def __repr__(self) -> str:
        return f"<Handler {self.kind} on #{self.event.id}>"


def subscribe(state: EventState, handler: Handler) -> Handler:
    state.subscriptions.append(handler)
    handler.subscribed = True
    return handler


def unsubscribe(state: EventState, handler: Handler) -> None:
    handler.subscribed = False
    try:
        state.subscriptions.remove(handler)
    except ValueError:
        pass


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def struct_eq(a: Any, b: Any) -> bool:
    """Structural equality, the relation behind ``==`` and literal patterns.

    Numbers compare by value, strings by content, lists/tuples element-wise,
    dictionaries by key set and per-key value; anything else by identity.
    Booleans never equal numbers.
    """
    if a is b:
        return True
    ta = type(a)
    if ta is float and type(b) is float:
        return a == b
    if isinstance(a, bool) or isinstance(b, bool):
        return type(a) is type(b) and a == b
    if _is_number(a) and _is_number(b):
        return a == b
    if ta is not type(b):
        return False
    if ta is str:
        return a == b
    if ta is list or ta is tuple:
        return len(a) == len(b) and all(struct_eq(x, y) for x, y in zip(a, b))
    if ta is dict:
        return a.keys() == b.keys() and all(struct_eq(a[k], b[k]) for k in a)
    return False


def match_value(p: A.Pattern, v: Any, bindings: dict[str, Any], eval_outer: Callable[[A.Node], Any]) -> bool:
    """Match ``v`` against ``p``, extending ``bindings`` in place."""
    tp = type(p)
    if tp is A.PBind:
        bindings[p.name] = v
        return True
    if tp is A.PLit:
        return struct_eq(VOID if p.value is None else p.value, v)
    if tp is A.POuter:
        return struct_eq(eval_outer(p.expr), v)
    if tp is A.PList or tp is A.PTuple:
        want = list if tp is A.PList else tuple
        if type(v) is not want or len(v) != len(p.items):
            return False
        return all(match_value(q, x, bindings, eval_outer) for q, x in zip(p.items, v))
    if tp is A.PDict:
        if type(v) is not dict or set(v) != set(p.keys):
            return False
        return all(match_value(q, v[k], bindings, eval_outer) for k, q in zip(p.keys, p.items))
    raise TypeError(f"not a pattern: {p!r}")


def match_payload(patterns: Optional[tuple[A.Pattern, ...]], payload: tuple,
                  eval_outer: Callable[[A.Node], Any]) -> Optional[dict[str, Any]]:
    """Bindings when ``payload`` matches, else None.  ``None`` patterns accept any arity."""
    if patterns is None:
        return {}
    if len(patterns) != len(payload):
        return None
    bindings: dict[str, Any] = {}
    for p, v in zip(patterns, payload):
        if not match_value(p, v, bindings, eval_outer):
            return None
    return bindings


def duplicate_bindings(patterns: Optional[tuple[A.Pattern, ...]]) -> list[str]:
    if patterns is None:
        return []
    seen: set[str] = set()
    dups = []
    for p in patterns:
        for name in A.pattern_binds(p):
            if name in seen:
                dups.append(name)
            seen.add(name)
    return dups
