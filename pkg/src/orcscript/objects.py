"""Prototype-based object model.

Every value is either an :class:`Obj` (ordered prototypes plus ordered
slots) or a Python primitive that delegates to a built-in prototype:

==============  ==============
Python value    prototype
==============  ==============
float           Number
str             String
bool            Boolean
list            List
tuple           Tuple
dict            Dictionary
Closure         Function
Builtin         Function
VOID            Void
==============  ==============

Variables are slots of scope objects, so one lookup routine serves both
``x`` and ``obj.x``.
"""

from __future__ import annotations

from typing import Any, Callable, Optional

from .errors import RuntimeOrcError


class VoidType:
    _instance: Optional["VoidType"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "void"

    def __bool__(self) -> bool:
        return False


VOID = VoidType()


class Obj:
    """A prototype-based object.  Identity is ``id``; ``payload`` holds native state."""

    __slots__ = ("id", "protos", "slots", "payload", "is_scope", "__weakref__")

    def __init__(self, oid: int, protos: list["Obj"], payload: Any = None, is_scope: bool = False):
        self.id = oid
        self.protos = protos
        self.slots: dict[str, Any] = {}
        self.payload = payload
        self.is_scope = is_scope

    def __repr__(self) -> str:
        kind = "Scope" if self.is_scope else "Obj"
        return f"<{kind} #{self.id} {list(self.slots)}>"


class Closure:
    __slots__ = ("name", "params", "body", "env", "self_obj")

    def __init__(self, name: str, params: tuple[str, ...], body, env: Obj, self_obj: Any = None):
        self.name = name
        self.params = params
        self.body = body
        self.env = env
        self.self_obj = self_obj

    def __repr__(self) -> str:
        return f"function {self.name}({', '.join(self.params)})"


class Builtin:
    """A native function.

    ``fn(interp, this, args, ctx)`` returns a value or a generator that the
    interpreter drives.  ``property`` builtins are invoked on plain slot
    access (``list.size``); ``lazy`` builtins receive their argument ASTs
    unevaluated (``makeEvent``).
    """

    __slots__ = ("name", "fn", "property", "lazy")

    def __init__(self, name: str, fn: Callable, property: bool = False, lazy: bool = False):
        self.name = name
        self.fn = fn
        self.property = property
        self.lazy = lazy

    def __repr__(self) -> str:
        return f"<builtin {self.name}>"


def lookup_slot(obj: Obj, name: str) -> Optional[tuple[Obj, Any]]:
    """Depth-first search through ``obj`` and its prototypes.

    Returns ``(holder, value)`` for the first object owning ``name``, or
    ``None``.  Cyclic prototype graphs terminate thanks to the visited set.
    """
    slots = obj.slots
    if name in slots:
        return obj, slots[name]
    protos = obj.protos
    if not protos:
        return None
    visited = {id(obj)}
    stack = list(reversed(protos))
    while stack:
        o = stack.pop()
        key = id(o)
        if key in visited:
            continue
        visited.add(key)
        s = o.slots
        if name in s:
            return o, s[name]
        if o.protos:
            stack.extend(reversed(o.protos))
    return None


class ObjectSpace:
    """Allocates objects and routes slot writes to the write observers."""

    SCOPE_ID_BASE = 1 << 40

    def __init__(self):
        self._next_id = 0
        self._next_scope_id = self.SCOPE_ID_BASE
        self.on_write: Optional[Callable[[Obj, str], None]] = None

    @property
    def next_ids(self) -> tuple[int, int]:
        return self._next_id, self._next_scope_id

    def new_object(self, protos: list[Obj], payload: Any = None) -> Obj:
        oid = self._next_id
        self._next_id += 1
        return Obj(oid, list(protos), payload)

    def new_scope(self, protos: list[Obj]) -> Obj:
        # Scopes live in their own id range so that display ids of user
        # objects do not depend on how many blocks were entered.
        oid = self._next_scope_id
        self._next_scope_id += 1
        return Obj(oid, protos, None, is_scope=True)

    def write_slot(self, obj: Obj, name: str, value: Any, create: bool) -> Obj:
        """Store ``value``; returns the object that now holds the slot.

        ``create`` installs an own slot (``var``) and refuses to shadow an
        existing own slot; otherwise the holder found by lookup is updated.
        """
        if create:
            if name in obj.slots:
                raise RuntimeOrcError(f"slot redefinition: {name}")
            holder = obj
        else:
            found = lookup_slot(obj, name)
            if found is None:
                raise RuntimeOrcError(f"lookup failed: {name}")
            holder = found[0]
        holder.slots[name] = value
        if self.on_write is not None:
            self.on_write(holder, name)
        return holder

    def remove_slot(self, obj: Obj, name: str) -> None:
        obj.slots.pop(name, None)
        if self.on_write is not None:
            self.on_write(obj, name)
