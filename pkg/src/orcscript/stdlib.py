"""Built-in prototypes and global functions."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, Any

from .errors import RuntimeOrcError
from .events import EventState
from .objects import VOID, Builtin, Closure, Obj, lookup_slot
from .scheduler import YIELD, Sleep

if TYPE_CHECKING:
    from .interpreter import Interpreter


def _arity(name: str, args: list, *counts: int) -> None:
    if len(args) not in counts:
        want = " or ".join(str(c) for c in counts)
        raise RuntimeOrcError(f"{name}: expected {want} arguments, given {len(args)}")


def _number(interp: "Interpreter", name: str, v: Any) -> float:
    if type(v) is not float and type(v) is not int:
        raise RuntimeOrcError(f"{name}: expected a number, got {interp.display(v, quoted=True)}")
    return v


# -- global functions ---------------------------------------------------------

def _echo(interp, this, args, ctx):
    _arity("echo", args, 1)
    interp.emit_line("*** " + interp.display(args[0]))
    return VOID


def _sleep(interp, this, args, ctx):
    _arity("sleep", args, 1)
    seconds = _number(interp, "sleep", args[0])
    if seconds < 0:
        raise RuntimeOrcError("sleep: negative duration")
    ms = int(round(seconds * 1000))
    interp.wait(Sleep(ms) if ms > 0 else YIELD)
    return VOID


def _time(interp, this, args, ctx):
    _arity("time", args, 0)
    return interp.sched.clock.now / 1000.0


def _make_event(interp, this, args, ctx):
    if len(args) != 1:
        raise RuntimeOrcError(f"makeEvent: expected 1 argument, given {len(args)}")
    return interp.watch.make_event(args[0], ctx)


# -- Object -------------------------------------------------------------------

def _clone(interp, this, args, ctx):
    if type(this) is not Obj:
        raise RuntimeOrcError(f"cannot clone {interp.display(this, quoted=True)}")
    payload = EventState() if isinstance(this.payload, EventState) else None
    return interp.space.new_object([this], payload)


def _new(interp, this, args, ctx):
    obj = _clone(interp, this, [], ctx)
    found = lookup_slot(obj, "init")
    if found is not None and type(found[1]) in (Closure, Builtin):
        interp.call(found[1], obj, list(args), ctx)
    elif args:
        raise RuntimeOrcError(f"new: {interp.display(this)} has no init taking {len(args)} arguments")
    return obj


def _protos(interp, this, args, ctx):
    return list(interp.proto_of(this).protos) if type(this) is Obj else [interp.proto_of(this)]


def _local_slot_names(interp, this, args, ctx):
    return list(this.slots) if type(this) is Obj else []


def _as_string(interp, this, args, ctx):
    if type(this) is Obj:
        return interp.object_name(this)
    return interp.display(this)


def _has_slot(interp, this, args, ctx):
    _arity("hasSlot", args, 1)
    return lookup_slot(interp.proto_of(this), args[0]) is not None


def _remove_slot(interp, this, args, ctx):
    _arity("removeSlot", args, 1)
    if type(this) is not Obj or args[0] not in this.slots:
        raise RuntimeOrcError(f"removeSlot: no local slot {args[0]}")
    interp.space.remove_slot(this, args[0])
    return this


# -- Event --------------------------------------------------------------------

def _event_emit(interp, this, args, ctx):
    return interp.emit(this, tuple(args), sync=False)


def _event_sync_emit(interp, this, args, ctx):
    return interp.emit(this, tuple(args), sync=True)


# -- primitives -----------------------------------------------------------------

def _size(interp, this, args, ctx):
    if type(this) in (list, tuple, dict, str):
        return len(this)
    raise RuntimeOrcError(f"size: unsupported receiver {interp.display(this, quoted=True)}")


def _floor(interp, this, args, ctx):
    return float(math.floor(_number(interp, "floor", this)))


def _ceil(interp, this, args, ctx):
    return float(math.ceil(_number(interp, "ceil", this)))


def _abs(interp, this, args, ctx):
    return abs(_number(interp, "abs", this))


def _sqrt(interp, this, args, ctx):
    v = _number(interp, "sqrt", this)
    if v < 0:
        raise RuntimeOrcError("sqrt: negative argument")
    return math.sqrt(v)


def _keys(interp, this, args, ctx):
    if type(this) is not dict:
        raise RuntimeOrcError("keys: expected a dictionary")
    return list(this)


def _push_back(interp, this, args, ctx):
    _arity("push_back", args, 1)
    if type(this) is not list:
        raise RuntimeOrcError("push_back: expected a list")
    this.append(args[0])
    return this


def install(interp: "Interpreter") -> None:
    """Create the prototype hierarchy, the global object and the lobby."""
    space = interp.space
    b = interp.builtins

    def proto(name: str, parents: list[Obj]) -> Obj:
        obj = space.new_object(parents)
        obj.slots["type"] = name
        b[name] = obj
        return obj

    def define(obj: Obj, name: str, fn, prop: bool = False, lazy: bool = False) -> None:
        obj.slots[name] = Builtin(name, fn, property=prop, lazy=lazy)

    obj = proto("Object", [])
    for name, fn, prop in (
        ("new", _new, True), ("clone", _clone, True), ("protos", _protos, True),
        ("localSlotNames", _local_slot_names, True), ("asString", _as_string, False),
        ("hasSlot", _has_slot, False), ("removeSlot", _remove_slot, False),
    ):
        define(obj, name, fn, prop)

    event = proto("Event", [obj])
    event.payload = EventState()
    define(event, "emit", _event_emit)
    define(event, "syncEmit", _event_sync_emit)

    number = proto("Number", [obj])
    for name, fn in (("floor", _floor), ("ceil", _ceil), ("abs", _abs), ("sqrt", _sqrt)):
        define(number, name, fn, prop=True)
    string = proto("String", [obj])
    define(string, "size", _size, prop=True)
    lst = proto("List", [obj])
    define(lst, "size", _size, prop=True)
    define(lst, "push_back", _push_back)
    tup = proto("Tuple", [obj])
    define(tup, "size", _size, prop=True)
    dictionary = proto("Dictionary", [obj])
    define(dictionary, "size", _size, prop=True)
    define(dictionary, "keys", _keys, prop=True)
    proto("Boolean", [obj])
    proto("Function", [obj])
    proto("Void", [obj])

    glob = proto("Global", [obj])
    for name in ("Object", "Event", "Number", "String", "List", "Tuple", "Dictionary", "Boolean", "Function"):
        glob.slots[name] = b[name]
    define(glob, "echo", _echo)
    define(glob, "sleep", _sleep)
    define(glob, "time", _time)
    define(glob, "makeEvent", _make_event, lazy=True)

    interp.lobby = space.new_scope([glob])
