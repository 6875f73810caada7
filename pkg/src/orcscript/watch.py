"""Boolean expressions reified as events, maintained by push.

A condition is evaluated once when created.  Every slot read during that
evaluation is hooked; a later write to a hooked slot re-evaluates the
condition synchronously, rebuilding the hook set from scratch.  Edges of the
boolean value start ``at`` bodies, ``onleave`` bodies and ``whenever`` loops.
Nothing is ever polled, so an idle program costs no evaluations.
"""

from __future__ import annotations

import itertools
from typing import TYPE_CHECKING, Any, Optional

from .errors import OrcError, RuntimeOrcError
from .events import EventState, Handler
from .objects import Obj
from .scheduler import YIELD

if TYPE_CHECKING:
    from .interpreter import Ctx, Interpreter


class DependencyTrace:
    """Ordered set of ``(object, slot)`` reads made during one evaluation."""

    __slots__ = ("reads", "first_obj_id", "first_scope_id")

    def __init__(self, first_ids: tuple[int, int]):
        self.reads: dict[tuple[int, str], Obj] = {}
        self.first_obj_id, self.first_scope_id = first_ids

    def record(self, holder: Obj, name: str) -> None:
        # Objects born during the evaluation (call frames mostly) cannot have
        # been written by anyone else yet; hooking them is pointless.
        if holder.id >= (self.first_scope_id if holder.is_scope else self.first_obj_id):
            return
        key = (holder.id, name)
        if key not in self.reads:
            self.reads[key] = holder


class WatchedCondition(EventState):
    __slots__ = ("seq", "expr", "ctx", "deps", "last", "eval_count", "event", "evaluating", "alive")

    def __init__(self, seq: int, expr, ctx: "Ctx"):
        super().__init__()
        self.seq = seq
        self.expr = expr
        self.ctx = ctx
        self.deps: dict[tuple[int, str], Obj] = {}
        self.last = False
        self.eval_count = 0
        self.event: Optional[Obj] = None
        self.evaluating = False
        self.alive = True

    def __repr__(self) -> str:
        return f"<WatchedCondition {self.seq} last={self.last} evals={self.eval_count}>"


class WatchRegistry:
    def __init__(self, interp: "Interpreter"):
        self.interp = interp
        self.index: dict[tuple[int, str], dict[int, WatchedCondition]] = {}
        self.conditions: dict[int, WatchedCondition] = {}
        self.evaluations = 0
        self.trace_eval = False
        self._seq = itertools.count(1)

    # -- creation and evaluation -------------------------------------------

    def make_event(self, expr, ctx: "Ctx") -> Obj:
        interp = self.interp
        cond = WatchedCondition(next(self._seq), expr, ctx)
        cond.event = interp.space.new_object([interp.builtins["Event"]], cond)
        self.conditions[cond.seq] = cond
        if ctx.frame is not None:
            ctx.frame.conditions.append(cond)
        cond.last = self.evaluate(cond)
        return cond.event

    def evaluate(self, cond: WatchedCondition) -> bool:
        """Evaluate with read tracing and replace the hooks; returns the boolean.

        On error the condition keeps its previous value (the error is reported).
        """
        interp = self.interp
        cond.eval_count += 1
        self.evaluations += 1
        trace = DependencyTrace(interp.space.next_ids)
        interp.traces.append(trace)
        cond.evaluating = True
        error: Optional[OrcError] = None
        value: Any = None
        try:
            value = interp.eval_sync(cond.expr, cond.ctx)
        except OrcError as err:
            error = err
        finally:
            cond.evaluating = False
            interp.traces.pop()
        self._rehook(cond, trace.reads)
        if error is None and type(value) is not bool:
            error = RuntimeOrcError(f"condition must evaluate to a Boolean, got {interp.display(value, quoted=True)}")
        result = cond.last if error is not None else value
        if self.trace_eval:
            interp.emit_line(f"### cond {cond.seq} eval {cond.eval_count}: "
                             f"{'true' if result else 'false'}; deps: {self.describe_deps(cond)}")
        if error is not None:
            interp.report(error)
        return result

    def _rehook(self, cond: WatchedCondition, reads: dict[tuple[int, str], Obj]) -> None:
        if cond.alive and reads.keys() == cond.deps.keys():
            cond.deps = reads
            return
        for key in cond.deps:
            bucket = self.index.get(key)
            if bucket is not None:
                bucket.pop(cond.seq, None)
                if not bucket:
                    del self.index[key]
        cond.deps = reads
        if cond.alive:
            for key in reads:
                self.index.setdefault(key, {})[cond.seq] = cond

    def describe_deps(self, cond: WatchedCondition) -> str:
        return ", ".join(self.interp.describe_slot(obj, name) for (_, name), obj in cond.deps.items())

    # -- push notifications -------------------------------------------------

    def on_slot_write(self, holder: Obj, name: str) -> None:
        bucket = self.index.get((holder.id, name))
        if not bucket:
            return
        for seq in sorted(bucket):
            cond = bucket.get(seq)
            if cond is None or cond.evaluating or not cond.alive:
                continue
            new = self.evaluate(cond)
            if new != cond.last:
                cond.last = new
                self.dispatch_edge(cond, new)

    def dispatch_edge(self, cond: WatchedCondition, new: bool) -> None:
        for h in list(cond.subscriptions):
            if new:
                self._rise(h)
            else:
                self._fall(h)

    # -- handlers -------------------------------------------------------------

    def subscribe(self, cond: WatchedCondition, h: Handler) -> None:
        h.condition = cond
        cond.subscriptions.append(h)
        h.subscribed = True
        if cond.last:
            self._rise(h)

    def unsubscribe(self, h: Handler) -> None:
        cond = h.condition
        h.subscribed = False
        h.active = False
        if h.timer is not None:
            h.timer.cancel()
            h.timer = None
        if cond is not None:
            try:
                cond.subscriptions.remove(h)
            except ValueError:
                pass

    def drop(self, cond: WatchedCondition) -> None:
        """Stop watching ``cond`` altogether."""
        cond.alive = False
        self._rehook(cond, {})
        self.conditions.pop(cond.seq, None)
        for h in list(cond.subscriptions):
            self.unsubscribe(h)

    def _rise(self, h: Handler) -> None:
        if h.duration:
            sched = self.interp.sched
            cond = h.condition

            def elapsed():
                h.timer = None
                if h.subscribed and cond.last:
                    self._fire(h)

            if h.timer is None:
                h.timer = sched.call_at(sched.clock.now + h.duration, elapsed)
        else:
            self._fire(h)

    def _fall(self, h: Handler) -> None:
        if h.timer is not None:
            h.timer.cancel()
            h.timer = None
        if h.active:
            h.active = False
            if h.onleave is not None:
                self.interp.start_handler_job(h, {}, h.onleave, eager=False)

    def _fire(self, h: Handler) -> None:
        h.active = True
        if h.kind == "whenever":
            if h.loop_job is None or h.loop_job.done:
                h.loop_job = self.interp.start_job(lambda: self._whenever_loop(h), "whenever", h.frame)
        else:
            self.interp.start_handler_job(h, {}, h.body, eager=False)

    def _whenever_loop(self, h: Handler) -> None:
        interp = self.interp
        while h.active and h.subscribed:
            try:
                interp.run_handler_body(h, {}, h.body)
            except OrcError as err:
                interp.report(err)
            interp.wait(YIELD)
