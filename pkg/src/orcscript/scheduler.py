"""Deterministic cooperative scheduler.

A job body is anything with the generator protocol (``send``, ``throw``,
``close``): a plain generator, or a :class:`GreenletBody` wrapping an
ordinary function that suspends through :func:`suspend`.  A job runs until
it hands one of the request objects below to the scheduler, which then
decides when it resumes.  Nothing ever
polls: with no ready job the scheduler either jumps the virtual clock to the
next deadline or blocks the thread until it (real-time mode).
"""

from __future__ import annotations

import heapq
import itertools
import time
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Generator, Iterable, Optional

from greenlet import GreenletExit, getcurrent, greenlet

from .errors import OrcError


# -- requests a job can yield --------------------------------------------------

class _YieldRequest:
    __slots__ = ()

    def __repr__(self) -> str:
        return "YIELD"


YIELD = _YieldRequest()


@dataclass(frozen=True)
class Sleep:
    ms: int


@dataclass(frozen=True)
class Spawn:
    """Start ``jobs`` eagerly; the yielder resumes once each has suspended or finished."""

    jobs: tuple["Job", ...]


@dataclass(frozen=True)
class Join:
    """Resume once every job in ``jobs`` is finished or cancelled."""

    jobs: tuple["Job", ...]


class GreenletBody:
    """Generator protocol over a function running in its own greenlet.

    The function suspends its job by calling :func:`suspend` with a request;
    the value passed to ``send`` becomes the return value of that call.
    """

    __slots__ = ("g", "started")

    def __init__(self, fn: Callable[[], Any]):
        self.g = greenlet(fn)
        self.started = False

    def send(self, value: Any) -> Any:
        g = self.g
        g.parent = getcurrent()
        if self.started:
            req = g.switch(value)
        else:
            self.started = True
            req = g.switch()
        if g.dead:
            raise StopIteration
        return req

    def throw(self, exc: BaseException) -> Any:
        g = self.g
        g.parent = getcurrent()
        self.started = True
        req = g.throw(exc)
        if g.dead:
            raise StopIteration
        return req

    def close(self) -> None:
        g = self.g
        if self.started and not g.dead:
            g.parent = getcurrent()
            g.throw(GreenletExit)


def suspend(request: Any) -> Any:
    """Hand ``request`` to the scheduler from inside a :class:`GreenletBody`."""
    parent = getcurrent().parent
    if parent is None:
        raise RuntimeError("suspend() called outside of a job")
    return parent.switch(request)


class Clock:
    """Milliseconds since engine start, virtual or wall-clock."""

    def __init__(self, virtual: bool = True):
        self.virtual = virtual
        self._now = 0
        self._origin = time.monotonic()

    @property
    def now(self) -> int:
        if self.virtual:
            return self._now
        return max(self._now, int((time.monotonic() - self._origin) * 1000))

    def advance_to(self, deadline: int) -> None:
        if self.virtual:
            if deadline > self._now:
                self._now = deadline
            return
        delay = (self._origin + deadline / 1000.0) - time.monotonic()
        if delay > 0:
            time.sleep(delay)
        self._now = max(self._now, deadline)


class TimerHandle:
    __slots__ = ("deadline", "seq", "callback", "active")

    def __init__(self, deadline: int, seq: int, callback: Callable[[], None]):
        self.deadline = deadline
        self.seq = seq
        self.callback = callback
        self.active = True

    def cancel(self) -> None:
        self.active = False

    def __lt__(self, other: "TimerHandle") -> bool:
        return (self.deadline, self.seq) < (other.deadline, other.seq)


_job_ids = itertools.count(1)


class Job:
    """A suspendable unit of execution."""

    __slots__ = (
        "id", "name", "gen", "state", "parent", "children", "frame", "token",
        "first_suspended", "first_waiters", "joiners", "wait_count",
        "send_value", "pending_exc", "on_finish",
    )

    def __init__(self, gen: Generator, name: str = "", parent: Optional["Job"] = None, frame: Any = None):
        self.id = next(_job_ids)
        self.name = name
        self.gen = gen
        self.state = "new"
        self.parent = parent
        self.children: list[Job] = []
        self.frame = frame
        self.token = 0
        self.first_suspended = False
        self.first_waiters: list[tuple[Job, int]] = []
        self.joiners: list[tuple[Job, int]] = []
        self.wait_count = 0
        self.send_value: Any = None
        self.pending_exc: Optional[BaseException] = None
        self.on_finish: list[Callable[[Job], None]] = []
        if parent is not None:
            parent.children.append(self)

    @property
    def done(self) -> bool:
        return self.state in ("finished", "cancelled")

    def __repr__(self) -> str:
        return f"<Job {self.id} {self.name} {self.state}>"


class Scheduler:
    def __init__(self, clock: Clock, report_error: Callable[[Job, BaseException], None]):
        self.clock = clock
        self.report_error = report_error
        self.ready: deque[Job] = deque()
        self.timers: list[TimerHandle] = []
        self._timer_seq = itertools.count()
        self.current: Optional[Job] = None
        self.steps = 0
        self.live_jobs = 0
        self.max_live_jobs = 0

    # -- job creation -------------------------------------------------------

    def new_job(self, gen: Generator, name: str = "", parent: Optional[Job] = None, frame: Any = None) -> Job:
        job = Job(gen, name, parent, frame)
        self.live_jobs += 1
        if self.live_jobs > self.max_live_jobs:
            self.max_live_jobs = self.live_jobs
        return job

    def start_later(self, job: Job) -> None:
        """Queue ``job`` behind the jobs already ready (no eager start)."""
        job.state = "ready"
        self.ready.append(job)

    # -- timers -------------------------------------------------------------

    def call_at(self, deadline: int, callback: Callable[[], None]) -> TimerHandle:
        handle = TimerHandle(deadline, next(self._timer_seq), callback)
        heapq.heappush(self.timers, handle)
        return handle

    def next_deadline(self) -> Optional[int]:
        while self.timers and not self.timers[0].active:
            heapq.heappop(self.timers)
        return self.timers[0].deadline if self.timers else None

    def fire_due(self) -> int:
        now = self.clock.now
        fired = 0
        while self.timers and self.timers[0].deadline <= now:
            handle = heapq.heappop(self.timers)
            if handle.active:
                handle.active = False
                handle.callback()
                fired += 1
        return fired

    @property
    def quiescent(self) -> bool:
        return not self.ready and self.next_deadline() is None

    # -- main loop ----------------------------------------------------------

    def run_cycle(self) -> bool:
        """Resume one ready job, or advance time to the next deadline.

        Returns False when there is nothing left to do.
        """
        while self.ready:
            job = self.ready.popleft()
            if job.state != "ready":
                continue
            self._resume(job)
            return True
        deadline = self.next_deadline()
        if deadline is None:
            return False
        self.clock.advance_to(deadline)
        self.fire_due()
        return True

    def _resume(self, job: Job) -> None:
        self.current = job
        job.state = "running"
        self.steps += 1
        gen = job.gen
        value, job.send_value = job.send_value, None
        exc, job.pending_exc = job.pending_exc, None
        try:
            while True:
                try:
                    req = gen.throw(exc) if exc is not None else gen.send(value)
                except StopIteration:
                    self._finish(job, "finished")
                    return
                except OrcError as err:
                    self.report_error(job, err)
                    self._finish(job, "finished")
                    return
                exc = value = None
                if req is YIELD:
                    job.state = "ready"
                    self.ready.append(job)
                elif type(req) is Sleep:
                    job.state = "sleeping"
                    token = job.token
                    self.call_at(self.clock.now + req.ms, lambda: self._wake(job, token))
                elif type(req) is Spawn:
                    children = [c for c in req.jobs if not c.done and not c.first_suspended]
                    if not children:
                        continue
                    job.state = "waiting"
                    job.wait_count = len(children)
                    for c in children:
                        c.first_waiters.append((job, job.token))
                        c.state = "ready"
                    self.ready.extendleft(reversed(children))
                elif type(req) is Join:
                    pending = [c for c in req.jobs if not c.done]
                    if not pending:
                        continue
                    job.state = "waiting"
                    job.wait_count = len(pending)
                    for c in pending:
                        c.joiners.append((job, job.token))
                else:
                    raise TypeError(f"job yielded unknown request {req!r}")
                self._suspended(job)
                return
        finally:
            self.current = None

    def _wake(self, job: Job, token: int) -> None:
        if job.token == token and job.state == "sleeping":
            job.state = "ready"
            self.ready.append(job)

    def _suspended(self, job: Job) -> None:
        if job.first_suspended:
            return
        job.first_suspended = True
        waiters, job.first_waiters = job.first_waiters, []
        for parent, token in waiters:
            self._release(parent, token, front=True)

    def _release(self, parent: Job, token: int, front: bool) -> None:
        if parent.token != token or parent.state != "waiting":
            return
        parent.wait_count -= 1
        if parent.wait_count == 0:
            parent.state = "ready"
            if front:
                self.ready.appendleft(parent)
            else:
                self.ready.append(parent)

    def _finish(self, job: Job, state: str) -> None:
        job.state = state
        job.token += 1
        self.live_jobs -= 1
        self._suspended(job)
        joiners, job.joiners = job.joiners, []
        for parent, token in joiners:
            self._release(parent, token, front=False)
        if job.parent is not None:
            try:
                job.parent.children.remove(job)
            except ValueError:
                pass
            job.parent = None
        callbacks, job.on_finish = job.on_finish, []
        for cb in callbacks:
            cb(job)
        job.gen = None

    # -- cancellation -------------------------------------------------------

    def cancel(self, job: Job) -> None:
        """Cancel ``job`` and all its descendants; finished jobs are left alone."""
        if job.done:
            return
        for child in list(job.children):
            self.cancel(child)
        if job is self.current:
            # The running job ends on its own; it cannot be unwound from inside.
            return
        gen = job.gen
        job.token += 1
        try:
            gen.close()
        except Exception:
            pass
        self._finish(job, "cancelled")

    def interrupt(self, job: Job, exc: BaseException) -> None:
        """Abandon whatever ``job`` waits for and resume it next by raising ``exc``."""
        if job.done:
            return
        job.token += 1
        if job.state == "ready":
            try:
                self.ready.remove(job)
            except ValueError:
                pass
        job.pending_exc = exc
        job.send_value = None
        job.state = "ready"
        self.ready.appendleft(job)

    def cancel_all(self, jobs: Iterable[Job]) -> None:
        for j in list(jobs):
            self.cancel(j)
