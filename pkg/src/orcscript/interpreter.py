"""Tree-walking evaluator.

Each job runs its evaluation in its own greenlet, so the evaluator is plain
recursive Python; the only places a job can be suspended are the calls to
:meth:`Interpreter.wait` (sleep, yields between loop iterations, spawning
and joining).
"""

from __future__ import annotations

import math
import re
from typing import Any, Callable, Optional

from . import events as E
from .errors import OrcError, RuntimeOrcError
from .events import EventState, Handler
from .objects import VOID, Builtin, Closure, Obj, ObjectSpace, lookup_slot
from .scheduler import YIELD, GreenletBody, Join, Job, Scheduler, Spawn, suspend
from .syntax import ast as A
from .syntax.printer import quote
from .watch import WatchedCondition, WatchRegistry


class Frame:
    """Activation of a user function: what a handler-side ``return`` tears down."""

    __slots__ = ("job", "handlers", "conditions", "jobs", "done")

    def __init__(self, job: Optional[Job]):
        self.job = job
        self.handlers: list[Handler] = []
        self.conditions: list[WatchedCondition] = []
        self.jobs: set[Job] = set()
        self.done = False


class Ctx:
    """Evaluation context: innermost scope, receiver, function frame, background jobs."""

    __slots__ = ("scope", "this", "frame", "bg")

    def __init__(self, scope: Obj, this: Any, frame: Optional[Frame]):
        self.scope = scope
        self.this = this
        self.frame = frame
        self.bg: list[Job] = []


class ReturnSignal(Exception):
    def __init__(self, frame: Frame, value: Any):
        super().__init__()
        self.frame = frame
        self.value = value


class HandlerExit(Exception):
    """Ends a handler job after it returned from its enclosing function."""


def is_number(v: Any) -> bool:
    return type(v) is float or type(v) is int


_FORMAT = re.compile(r"%([-+ 0#]*)(\d*)(?:\.(\d+))?([sdifgxe%])")


class Interpreter:
    def __init__(self, sched: Scheduler, output: Callable[[str], None], deterministic_ids: bool = True):
        self.sched = sched
        self.output = output
        self.deterministic_ids = deterministic_ids
        self.space = ObjectSpace()
        self.watch = WatchRegistry(self)
        self.space.on_write = self.watch.on_slot_write
        self.traces: list = []
        self.sync_depth = 0
        self.builtins: dict[str, Obj] = {}
        self.lobby: Optional[Obj] = None
        self._dispatch: dict[type, Callable[[Any, Ctx], Any]] = {
            A.Literal: self._literal,
            A.ListLit: self._list,
            A.TupleLit: self._tuple,
            A.DictLit: self._dict,
            A.Ident: self._ident,
            A.This: lambda n, ctx: ctx.this,
            A.SlotAccess: self._slot_access,
            A.Index: self._index,
            A.Call: self._call,
            A.BinOp: self._binop,
            A.UnaryOp: self._unary,
            A.Assign: self._assign,
            A.CompoundAssign: self._compound,
            A.IncDec: self._incdec,
            A.VarDecl: self._vardecl,
            A.FunctionDecl: self._function,
            A.Emit: self._emit_node,
            A.Sequence: self._sequence_node,
            A.Scope: self._scope,
            A.AndNode: self._and,
            A.If: self._if,
            A.Loop: self._loop,
            A.While: self._while,
            A.For: self._for,
            A.Return: self._return,
            A.AtEvent: self._at,
            A.ClassDecl: self._unexpected,
            A.AtCond: self._unexpected,
            A.EventQuery: self._unexpected,
            A.PatternVar: self._unexpected,
        }
        from .stdlib import install
        install(self)

    # -- output -------------------------------------------------------------

    def emit_line(self, text: str) -> None:
        self.output(f"[{self.sched.clock.now:08d}] {text}")

    def report(self, err: BaseException) -> None:
        self.emit_line(f"!!! {err}")

    # -- jobs ---------------------------------------------------------------

    def wait(self, request: Any) -> Any:
        """Suspend the current job on ``request``."""
        if self.sync_depth:
            raise RuntimeOrcError("cannot wait while evaluating a condition, guard or pattern")
        if self.sched.current is None:
            raise RuntimeOrcError("cannot wait outside of a job")
        return suspend(request)

    def new_job(self, fn: Callable[[], Any], name: str, frame: Optional[Frame], parent: Optional[Job] = None) -> Job:
        job = self.sched.new_job(GreenletBody(fn), name, parent, frame)
        if frame is not None and not frame.done:
            frame.jobs.add(job)
            job.on_finish.append(lambda j, f=frame: f.jobs.discard(j))
        return job

    def start_job(self, fn: Callable[[], Any], name: str, frame: Optional[Frame]) -> Job:
        """Create a job and queue it behind the ready jobs."""
        job = self.new_job(fn, name, frame)
        self.sched.start_later(job)
        return job

    def eval_sync(self, node: A.Node, ctx: Ctx) -> Any:
        """Evaluate ``node`` with suspension forbidden (conditions, guards, patterns)."""
        self.sync_depth += 1
        try:
            return self.eval(node, ctx)
        finally:
            self.sync_depth -= 1

    # -- handlers -----------------------------------------------------------

    def handler_ctx(self, h: Handler, bindings: dict[str, Any]) -> Ctx:
        scope = self.space.new_scope([h.scope])
        scope.slots.update(bindings)
        return Ctx(scope, h.this, h.frame)

    def run_handler_body(self, h: Handler, bindings: dict[str, Any], body: A.Node,
                         ctx: Optional[Ctx] = None) -> None:
        if ctx is None:
            ctx = self.handler_ctx(h, bindings)
        try:
            self.eval(body, ctx)
            self.join_bg(ctx)
        except HandlerExit:
            pass

    def start_handler_job(self, h: Handler, bindings: dict[str, Any], body: A.Node, eager: bool,
                          ctx: Optional[Ctx] = None) -> Job:
        job = self.new_job(lambda: self.run_handler_body(h, bindings, body, ctx), h.kind, h.frame)
        if not eager:
            self.sched.start_later(job)
        return job

    def emit(self, event: Any, payload: tuple, sync: bool) -> Any:
        state = self.event_state(event)
        jobs = []
        for h in list(state.subscriptions):
            if not h.subscribed:
                continue
            outer_ctx = Ctx(h.scope, h.this, h.frame)
            try:
                bindings = E.match_payload(h.patterns, payload, lambda e: self.eval_sync(e, outer_ctx))
                if bindings is None:
                    continue
                ctx = self.handler_ctx(h, bindings)
                if h.guard is not None and not self.truthy(self.eval_sync(h.guard, ctx)):
                    continue
            except OrcError as err:
                self.report(err)
                continue
            jobs.append(self.start_handler_job(h, bindings, h.body, eager=True, ctx=ctx))
        if jobs:
            self.wait(Spawn(tuple(jobs)))
            if sync:
                self.wait(Join(tuple(jobs)))
        return VOID

    def event_state(self, event: Any) -> EventState:
        if type(event) is Obj and isinstance(event.payload, EventState):
            return event.payload
        raise RuntimeOrcError(f"not an event: {self.display(event)}")

    def subscribe(self, h: Handler) -> None:
        state = self.event_state(h.event)
        if h.frame is not None:
            h.frame.handlers.append(h)
        if isinstance(state, WatchedCondition):
            self.watch.subscribe(state, h)
        else:
            E.subscribe(state, h)

    def unsubscribe(self, h: Handler) -> None:
        state = h.event.payload
        if isinstance(state, WatchedCondition):
            self.watch.unsubscribe(h)
        else:
            E.unsubscribe(state, h)

    def cancel_frame(self, frame: Frame) -> None:
        """Stop everything rooted at ``frame``: handlers, conditions, jobs."""
        frame.done = True
        for h in frame.handlers:
            self.unsubscribe(h)
        for c in frame.conditions:
            self.watch.drop(c)
        for job in sorted(frame.jobs, key=lambda j: j.id):
            self.sched.cancel(job)

    # -- evaluation ---------------------------------------------------------

    def eval(self, node: A.Node, ctx: Ctx) -> Any:
        return self._dispatch[type(node)](node, ctx)

    def _unexpected(self, node: A.Node, ctx: Ctx) -> Any:
        raise RuntimeOrcError(f"unexpected {type(node).__name__} (was the tree desugared?)")

    def _literal(self, node: A.Literal, ctx: Ctx) -> Any:
        v = node.value
        return VOID if v is None else v

    def _list(self, node: A.ListLit, ctx: Ctx) -> Any:
        return [self.eval(i, ctx) for i in node.items]

    def _tuple(self, node: A.TupleLit, ctx: Ctx) -> Any:
        return tuple(self.eval(i, ctx) for i in node.items)

    def _dict(self, node: A.DictLit, ctx: Ctx) -> Any:
        out = {}
        for k, v in node.pairs:
            key = self.eval(k, ctx)
            if type(key) is not str and not is_number(key):
                raise RuntimeOrcError(f"invalid dictionary key: {self.display(key)}")
            out[key] = self.eval(v, ctx)
        return out

    def record(self, holder: Obj, name: str, value: Any) -> None:
        if self.traces and type(value) is not Closure and type(value) is not Builtin:
            self.traces[-1].record(holder, name)

    def _ident(self, node: A.Ident, ctx: Ctx) -> Any:
        name = node.name
        scope = ctx.scope
        slots = scope.slots
        if name in slots:
            holder, value = scope, slots[name]
        else:
            found = lookup_slot(scope, name)
            if found is None:
                raise RuntimeOrcError(f"lookup failed: {name}")
            holder, value = found
        if self.traces:
            self.record(holder, name, value)
        return value

    def proto_of(self, value: Any) -> Obj:
        if type(value) is Obj:
            return value
        b = self.builtins
        t = type(value)
        if t is float or t is int:
            return b["Number"]
        if t is str:
            return b["String"]
        if t is bool:
            return b["Boolean"]
        if t is list:
            return b["List"]
        if t is tuple:
            return b["Tuple"]
        if t is dict:
            return b["Dictionary"]
        if t is Closure or t is Builtin:
            return b["Function"]
        return b["Void"]

    def get_slot(self, target: Any, name: str) -> Any:
        found = lookup_slot(self.proto_of(target), name)
        if found is None:
            raise RuntimeOrcError(f"lookup failed: {self.display(target)}.{name}")
        holder, value = found
        if self.traces:
            self.record(holder, name, value)
        return value

    def _slot_access(self, node: A.SlotAccess, ctx: Ctx) -> Any:
        target = self.eval(node.target, ctx)
        value = self.get_slot(target, node.name)
        if type(value) is Builtin and value.property:
            return value.fn(self, target, [], ctx)
        return value

    def _index(self, node: A.Index, ctx: Ctx) -> Any:
        dispatch = self._dispatch
        return self.index_get(dispatch[type(node.target)](node.target, ctx),
                              dispatch[type(node.index)](node.index, ctx))

    def _position(self, seq: Any, index: Any) -> int:
        if not is_number(index) or index != int(index):
            raise RuntimeOrcError(f"invalid index: {self.display(index)}")
        i = int(index)
        if not 0 <= i < len(seq):
            raise RuntimeOrcError(f"index out of range: {i}")
        return i

    def index_get(self, target: Any, index: Any) -> Any:
        t = type(target)
        if t is list or t is tuple or t is str:
            return target[self._position(target, index)]
        if t is dict:
            if index not in target or type(index) is bool:
                raise RuntimeOrcError(f"missing key: {self.display(index, quoted=True)}")
            return target[index]
        raise RuntimeOrcError(f"cannot index {self.display(target)}")

    # -- calls ----------------------------------------------------------------

    def _call(self, node: A.Call, ctx: Ctx) -> Any:
        callee = node.callee
        if type(callee) is A.SlotAccess:
            this = self.eval(callee.target, ctx)
            fn = self.get_slot(this, callee.name)
        else:
            fn = self.eval(callee, ctx)
            this = ctx.this
            if type(fn) is Closure and fn.self_obj is not None:
                this = fn.self_obj
        if type(fn) is Builtin and fn.lazy:
            return fn.fn(self, this, node.args, ctx)
        args = [self.eval(a, ctx) for a in node.args]
        return self.call(fn, this, args, ctx)

    def call(self, fn: Any, this: Any, args: list, ctx: Optional[Ctx] = None) -> Any:
        t = type(fn)
        if t is Closure:
            return self.call_closure(fn, this, args)
        if t is Builtin:
            if fn.lazy:
                raise RuntimeOrcError(f"{fn.name} must be called directly")
            return fn.fn(self, this, args, ctx)
        raise RuntimeOrcError(f"not callable: {self.display(fn)}")

    def call_closure(self, fn: Closure, this: Any, args: list) -> Any:
        if len(args) != len(fn.params):
            raise RuntimeOrcError(
                f"{fn.name or 'function'}: expected {len(fn.params)} arguments, given {len(args)}")
        env = fn.env
        protos = [this, env] if type(this) is Obj and this is not env else [env]
        scope = self.space.new_scope(protos)
        scope.slots.update(zip(fn.params, args))
        frame = Frame(self.sched.current)
        ctx = Ctx(scope, this, frame)
        try:
            value = self._sequence(fn.body.body, ctx)
            self.join_bg(ctx)
        except ReturnSignal as signal:
            if signal.frame is not frame:
                raise
            value = signal.value
        finally:
            frame.done = True
        return value

    # -- operators ------------------------------------------------------------

    def truthy(self, v: Any) -> bool:
        t = type(v)
        if t is bool:
            return v
        if t is float or t is int:
            return v != 0
        if v is VOID:
            return False
        if t is str or t is list or t is tuple or t is dict:
            return len(v) > 0
        return True

    def _binop(self, node: A.BinOp, ctx: Ctx) -> Any:
        op = node.op
        dispatch = self._dispatch
        left = dispatch[type(node.left)](node.left, ctx)
        if op == "&&":
            return self.eval(node.right, ctx) if self.truthy(left) else left
        if op == "||":
            return left if self.truthy(left) else self.eval(node.right, ctx)
        right = dispatch[type(node.right)](node.right, ctx)
        if type(left) is float and type(right) is float:
            if op == "==":
                return left == right
            if op == "<":
                return left < right
            if op == "+":
                return left + right
        return self.binary(op, left, right)

    def binary(self, op: str, a: Any, b: Any) -> Any:
        if op == "==":
            return E.struct_eq(a, b)
        if op == "!=":
            return not E.struct_eq(a, b)
        na, nb = is_number(a), is_number(b)
        if na and nb:
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "/":
                if b == 0:
                    raise RuntimeOrcError("division by zero")
                return a / b
            if op == "%":
                if b == 0:
                    raise RuntimeOrcError("division by zero")
                return math.fmod(a, b)
            if op == "<":
                return a < b
            if op == "<=":
                return a <= b
            if op == ">":
                return a > b
            if op == ">=":
                return a >= b
        ta = type(a)
        if ta is str:
            if op == "%":
                return self.format(a, b)
            if op == "+":
                return a + self.display(b)
            if type(b) is str and op in ("<", "<=", ">", ">="):
                return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]
        if op == "+" and ta is type(b) and (ta is list or ta is tuple):
            return a + b
        if op == "*" and (ta is list or ta is str) and nb and b == int(b):
            return a * int(b)
        raise RuntimeOrcError(f"invalid operands for {op}: {self.display(a, quoted=True)}, "
                              f"{self.display(b, quoted=True)}")

    def _unary(self, node: A.UnaryOp, ctx: Ctx) -> Any:
        v = self.eval(node.operand, ctx)
        if node.op == "!":
            return not self.truthy(v)
        if not is_number(v):
            raise RuntimeOrcError(f"invalid operand for unary {node.op}: {self.display(v, quoted=True)}")
        return -v if node.op == "-" else v

    def format(self, fmt: str, arg: Any) -> str:
        """``"fmt" % value`` / ``"fmt" % [values]``: printf-style substitution."""
        args = list(arg) if type(arg) in (list, tuple) else [arg]
        pos = 0
        out = []
        last = 0
        for m in _FORMAT.finditer(fmt):
            out.append(fmt[last:m.start()])
            last = m.end()
            flags, width, prec, conv = m.groups()
            if conv == "%":
                out.append("%")
                continue
            if pos >= len(args):
                raise RuntimeOrcError(f"format: not enough arguments for {fmt!r}")
            value = args[pos]
            pos += 1
            if conv == "s":
                out.append(("%" + flags + width + "s") % self.display(value))
                continue
            if not is_number(value):
                raise RuntimeOrcError(f"format: %{conv} expects a number, got {self.display(value, quoted=True)}")
            spec = "%" + flags + width + ("." + prec if prec is not None else "") + conv
            if conv in "dix":
                value = int(math.floor(value)) if value >= 0 else -int(math.floor(-value))
            out.append(spec % value)
        out.append(fmt[last:])
        if pos != len(args):
            raise RuntimeOrcError(f"format: too many arguments for {fmt!r}")
        return "".join(out)

    # -- assignment -------------------------------------------------------------

    def assign(self, target: A.Node, value: Any, ctx: Ctx) -> Any:
        t = type(target)
        if t is A.Ident:
            self.space.write_slot(ctx.scope, target.name, value, create=False)
        elif t is A.SlotAccess:
            obj = self.eval(target.target, ctx)
            if type(obj) is not Obj:
                raise RuntimeOrcError(f"cannot assign a slot of {self.display(obj, quoted=True)}")
            self.space.write_slot(obj, target.name, value, create=False)
        elif t is A.Index:
            container = self.eval(target.target, ctx)
            index = self.eval(target.index, ctx)
            if type(container) is list:
                container[self._position(container, index)] = value
            elif type(container) is dict:
                container[index] = value
            else:
                raise RuntimeOrcError(f"cannot assign into {self.display(container, quoted=True)}")
        else:
            raise RuntimeOrcError("invalid assignment target")
        return value

    def _assign(self, node: A.Assign, ctx: Ctx) -> Any:
        value = self._dispatch[type(node.value)](node.value, ctx)
        if type(node.target) is A.Ident:
            self.space.write_slot(ctx.scope, node.target.name, value, create=False)
            return value
        return self.assign(node.target, value, ctx)

    def _compound(self, node: A.CompoundAssign, ctx: Ctx) -> Any:
        current = self.eval(node.target, ctx)
        return self.assign(node.target, self.binary(node.op, current, self.eval(node.value, ctx)), ctx)

    def _incdec(self, node: A.IncDec, ctx: Ctx) -> Any:
        current = self.eval(node.target, ctx)
        if not is_number(current):
            raise RuntimeOrcError(f"cannot apply {node.op} to {self.display(current, quoted=True)}")
        self.assign(node.target, current + (1 if node.op == "++" else -1), ctx)
        return current

    def declaration_target(self, target: A.Node, ctx: Ctx) -> tuple[Obj, str]:
        if type(target) is A.Ident:
            return ctx.scope, target.name
        obj = self.eval(target.target, ctx)
        if type(obj) is not Obj:
            raise RuntimeOrcError(f"cannot add a slot to {self.display(obj, quoted=True)}")
        return obj, target.name

    def _vardecl(self, node: A.VarDecl, ctx: Ctx) -> Any:
        obj, name = self.declaration_target(node.target, ctx)
        value = VOID if node.value is None else self.eval(node.value, ctx)
        self.space.write_slot(obj, name, value, create=True)
        return value

    def _function(self, node: A.FunctionDecl, ctx: Ctx) -> Any:
        if node.target is None:
            return Closure("", node.params, node.body, ctx.scope)
        obj, name = self.declaration_target(node.target, ctx)
        closure = Closure(name, node.params, node.body, ctx.scope)
        # Function declarations may replace an existing definition.
        obj.slots.pop(name, None)
        self.space.write_slot(obj, name, closure, create=True)
        return closure

    # -- control flow -------------------------------------------------------

    def spawn_background(self, node: A.Node, ctx: Ctx) -> Job:
        def body():
            self.eval(node, ctx)

        job = self.new_job(body, "bg", ctx.frame, self.sched.current)
        ctx.bg.append(job)
        self.wait(Spawn((job,)))
        return job

    def join_bg(self, ctx: Ctx) -> None:
        pending = tuple(j for j in ctx.bg if not j.done)
        ctx.bg.clear()
        if pending:
            self.wait(Join(pending))

    def _sequence(self, seq: A.Sequence, ctx: Ctx) -> Any:
        value = VOID
        dispatch = self._dispatch
        for item, sep in zip(seq.items, seq.seps):
            if sep == ",":
                self.spawn_background(item, ctx)
                value = VOID
            else:
                value = dispatch[type(item)](item, ctx)
        return value

    def _sequence_node(self, node: A.Sequence, ctx: Ctx) -> Any:
        return self._sequence(node, ctx)

    def _scope(self, node: A.Scope, ctx: Ctx) -> Any:
        inner = Ctx(self.space.new_scope([ctx.scope]), ctx.this, ctx.frame)
        value = self._sequence(node.body, inner)
        self.join_bg(inner)
        return value

    def _and(self, node: A.AndNode, ctx: Ctx) -> Any:
        parent = self.sched.current
        jobs = []
        for item in node.items:
            jobs.append(self.new_job(lambda item=item: self.eval(item, ctx), "and", ctx.frame, parent))
        self.wait(Spawn(tuple(jobs)))
        self.wait(Join(tuple(jobs)))
        return VOID

    def _if(self, node: A.If, ctx: Ctx) -> Any:
        cond = self._dispatch[type(node.cond)](node.cond, ctx)
        if cond is True or (cond is not False and self.truthy(cond)):
            return self._dispatch[type(node.then)](node.then, ctx)
        if node.orelse is not None:
            return self.eval(node.orelse, ctx)
        return VOID

    def _loop(self, node: A.Loop, ctx: Ctx) -> Any:
        # Yielding before each iteration lets handlers triggered by the
        # previous iteration (a stop condition, typically) run first.
        while True:
            self.wait(YIELD)
            self.eval(node.body, ctx)

    def _while(self, node: A.While, ctx: Ctx) -> Any:
        first = True
        while self.truthy(self.eval(node.cond, ctx)):
            if not first:
                self.wait(YIELD)
            first = False
            self.eval(node.body, ctx)
        return VOID

    def iteration_items(self, value: Any) -> list:
        t = type(value)
        if t is list or t is tuple:
            return list(value)
        if t is dict:
            return list(value)
        if t is str:
            return list(value)
        raise RuntimeOrcError(f"cannot iterate over {self.display(value, quoted=True)}")

    def _for(self, node: A.For, ctx: Ctx) -> Any:
        items = self.iteration_items(self.eval(node.iterable, ctx))

        def iteration(item):
            scope = self.space.new_scope([ctx.scope])
            scope.slots[node.var] = item
            inner = Ctx(scope, ctx.this, ctx.frame)
            self.eval(node.body, inner)
            self.join_bg(inner)

        if node.concurrent:
            parent = self.sched.current
            jobs = tuple(self.new_job(lambda item=item: iteration(item), "for&", ctx.frame, parent)
                         for item in items)
            if jobs:
                self.wait(Spawn(jobs))
                self.wait(Join(jobs))
            return VOID
        for i, item in enumerate(items):
            if i:
                self.wait(YIELD)
            iteration(item)
        return VOID

    def _return(self, node: A.Return, ctx: Ctx) -> Any:
        frame = ctx.frame
        if frame is None:
            raise RuntimeOrcError("return outside of a function")
        value = VOID if node.value is None else self.eval(node.value, ctx)
        current = self.sched.current
        if current is frame.job or self.sync_depth:
            raise ReturnSignal(frame, value)
        # A handler (or background job) returns on behalf of the function
        # that declared it: finish that call and stop everything it started.
        if not frame.done:
            self.cancel_frame(frame)
            if frame.job is not None:
                self.sched.interrupt(frame.job, ReturnSignal(frame, value))
        raise HandlerExit()

    # -- events -------------------------------------------------------------

    def _emit_node(self, node: A.Emit, ctx: Ctx) -> Any:
        event = self.eval(node.target, ctx)
        payload = tuple(self.eval(a, ctx) for a in node.args)
        return self.emit(event, payload, sync=False)

    def _at(self, node: A.AtEvent, ctx: Ctx) -> Any:
        dups = E.duplicate_bindings(node.patterns)
        if dups:
            raise RuntimeOrcError(f"duplicate pattern variable: {dups[0]}")
        duration = None
        if node.duration is not None:
            d = self.eval(node.duration, ctx)
            if not is_number(d) or d < 0:
                raise RuntimeOrcError(f"invalid duration: {self.display(d, quoted=True)}")
            duration = int(round(d * 1000))
        event = self.eval(node.event, ctx)
        state = self.event_state(event)
        if duration and not isinstance(state, WatchedCondition):
            raise RuntimeOrcError("a duration requires a condition, not an event")
        h = Handler(event, node.kind, node.patterns, node.guard, node.body, node.onleave, duration,
                    ctx.scope, ctx.this, ctx.frame)
        self.subscribe(h)
        return VOID

    # -- display --------------------------------------------------------------

    def display(self, v: Any, quoted: bool = False) -> str:
        t = type(v)
        if t is str:
            return quote(v) if quoted else v
        if t is bool:
            return "true" if v else "false"
        if t is float or t is int:
            return format_number(v)
        if v is VOID:
            return "void"
        if t is list:
            return "[" + ", ".join(self.display(x, True) for x in v) + "]"
        if t is tuple:
            inner = ", ".join(self.display(x, True) for x in v)
            return "(" + inner + ("," if len(v) == 1 else "") + ")"
        if t is dict:
            if not v:
                return "[=>]"
            return "[" + ", ".join(f"{self.display(k, True)} => {self.display(x, True)}" for k, x in v.items()) + "]"
        if t is Closure:
            return f"function {v.name}({', '.join(v.params)})".replace("function (", "function(")
        if t is Builtin:
            return f"function {v.name}"
        if t is Obj:
            found = lookup_slot(v, "asString")
            if found is not None and type(found[1]) is Closure:
                text = self.call_closure(found[1], v, [])
                return text if type(text) is str else self.display(text, quoted)
            return self.object_name(v)
        return repr(v)

    def object_name(self, obj: Obj) -> str:
        own = obj.slots.get("type")
        if type(own) is str:
            return own
        found = lookup_slot(obj, "type")
        base = found[1] if found is not None and type(found[1]) is str else "Object"
        ident = obj.id if self.deterministic_ids else id(obj)
        return f"{base}_0x{ident:x}"

    def describe_slot(self, obj: Obj, name: str) -> str:
        """Readable name of a hooked slot, for dependency dumps."""
        if obj.is_scope:
            return name
        if self.lobby is not None:
            for var, value in self.lobby.slots.items():
                if value is obj:
                    return f"{var}.{name}"
        return f"{self.object_name(obj)}.{name}"


def format_number(v: float) -> str:
    if v != v:
        return "nan"
    if v in (math.inf, -math.inf):
        return "inf" if v > 0 else "-inf"
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return "%.6g" % v
