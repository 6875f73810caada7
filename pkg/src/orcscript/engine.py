"""Embedding API: one engine runs one program (or REPL session) to completion."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import OrcError, ParseError
from .interpreter import Ctx, HandlerExit, Interpreter, ReturnSignal
from .objects import VOID
from .scheduler import YIELD, Clock, Job, Scheduler
from .syntax import ast as A
from .syntax import compile_source

# Evaluation recurses on the Python stack; give deep user recursion room.
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


class StepLimitExceeded(Exception):
    """The ``max_steps`` runaway guard tripped."""


@dataclass
class EngineConfig:
    virtual: bool = True
    deterministic_ids: bool = True
    trace_eval: bool = False
    max_steps: Optional[int] = None


@dataclass(frozen=True)
class Counters:
    steps: int
    evaluations: int
    now: int
    live_jobs: int
    max_live_jobs: int


class Engine:
    def __init__(self, config: Optional[EngineConfig] = None, output: Optional[Callable[[str], None]] = None):
        self.config = config or EngineConfig()
        self.lines: list[str] = []
        self._output = output if output is not None else self.lines.append
        self.clock = Clock(self.config.virtual)
        self.sched = Scheduler(self.clock, self._job_error)
        self.interp = Interpreter(self.sched, self._output, self.config.deterministic_ids)
        self.interp.watch.trace_eval = self.config.trace_eval
        self.ctx = Ctx(self.interp.lobby, self.interp.lobby, None)

    # -- errors -------------------------------------------------------------

    def _job_error(self, job: Job, err: BaseException) -> None:
        self.interp.report(err)

    # -- program submission -----------------------------------------------

    def submit(self, source: str) -> Optional[Job]:
        """Parse ``source`` and queue a foreground job running it.

        Parse errors are reported and re-raised.
        """
        try:
            program = compile_source(source)
        except ParseError as err:
            self.interp.report(err)
            raise
        return self.submit_program(program)

    def submit_program(self, program: A.Sequence) -> Job:
        interp = self.interp
        ctx = self.ctx

        def run():
            for item, sep in zip(program.items, program.seps):
                if sep == ",":
                    try:
                        interp.spawn_background(item, ctx)
                    except OrcError as err:
                        interp.report(err)
                    continue
                try:
                    value = interp.eval(item, ctx)
                    if value is not VOID and not isinstance(item, (A.FunctionDecl, A.AtEvent)):
                        interp.emit_line(interp.display(value, quoted=True))
                except (ReturnSignal, HandlerExit):
                    interp.report("return outside of a function")
                except OrcError as err:
                    interp.report(err)
                interp.wait(YIELD)

        job = interp.new_job(run, "top", None)
        self.sched.start_later(job)
        return job

    # -- driving ------------------------------------------------------------

    def _cycle(self) -> bool:
        limit = self.config.max_steps
        if limit is not None and self.sched.steps >= limit:
            raise StepLimitExceeded(limit)
        return self.sched.run_cycle()

    def run_until_done(self, job: Job) -> None:
        while not job.done:
            if not self._cycle():
                break

    def drain_ready(self) -> None:
        """Run every ready job without advancing time."""
        while self.sched.ready:
            self._cycle()

    def run_until_quiescent(self) -> None:
        while self._cycle():
            pass

    def run_for(self, ms: int) -> None:
        """Advance the clock by ``ms``, running everything due on the way."""
        deadline = self.clock.now + ms
        while True:
            self.drain_ready()
            nxt = self.sched.next_deadline()
            if nxt is None or nxt > deadline:
                break
            self._cycle()
        self.clock.advance_to(deadline)

    def execute(self, source: str) -> None:
        """Run ``source`` as a script: submit, then run to quiescence."""
        self.submit(source)
        self.run_until_quiescent()
        self.finish()

    def finish(self) -> None:
        if self.config.trace_eval:
            self.interp.emit_line(f"### evaluations: {self.interp.watch.evaluations}")

    # -- instrumentation ------------------------------------------------------

    @property
    def counters(self) -> Counters:
        s = self.sched
        return Counters(s.steps, self.interp.watch.evaluations, self.clock.now, s.live_jobs, s.max_live_jobs)

    @property
    def output(self) -> str:
        return "".join(line + "\n" for line in self.lines)


def run_source(source: str, **config) -> str:
    """Run ``source`` in a fresh engine and return its transcript."""
    engine = Engine(EngineConfig(**config))
    engine.execute(source)
    return engine.output
