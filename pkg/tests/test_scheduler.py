import time

import pytest

from conftest import run_stamped
from orcscript import Engine, EngineConfig
from orcscript.errors import RuntimeOrcError
from orcscript.scheduler import YIELD, Clock, Join, Scheduler, Sleep, Spawn


def make():
    errors = []
    sched = Scheduler(Clock(virtual=True), lambda job, err: errors.append(err))
    return sched, errors


def drain(sched):
    while sched.run_cycle():
        pass


def test_empty_scheduler_makes_no_progress():
    sched, _ = make()
    assert sched.run_cycle() is False
    assert sched.quiescent


def test_ready_jobs_run_fifo_and_yield_round_robin():
    sched, _ = make()
    log = []

    def body(tag):
        log.append(tag + "1")
        yield YIELD
        log.append(tag + "2")

    for tag in "ab":
        sched.start_later(sched.new_job(body(tag), tag))
    drain(sched)
    assert log == ["a1", "b1", "a2", "b2"]


def test_virtual_clock_jumps_to_earliest_deadline():
    sched, _ = make()
    log = []

    def sleeper(ms):
        yield Sleep(ms)
        log.append((ms, sched.clock.now))

    sched.start_later(sched.new_job(sleeper(2000)))
    sched.start_later(sched.new_job(sleeper(1000)))
    drain(sched)
    assert log == [(1000, 1000), (2000, 2000)]


def test_spawn_runs_child_eagerly_until_first_suspension():
    sched, _ = make()
    log = []

    def child():
        log.append("child starts")
        yield Sleep(10)
        log.append("child ends")

    def parent():
        kid = sched.new_job(child(), "kid")
        yield Spawn((kid,))
        log.append("parent resumes")
        yield Join((kid,))
        log.append("parent joined")

    sched.start_later(sched.new_job(parent(), "parent"))
    drain(sched)
    assert log == ["child starts", "parent resumes", "child ends", "parent joined"]
    assert sched.clock.now == 10


def test_cancelled_job_never_runs_again():
    sched, _ = make()
    log = []

    def body():
        log.append(1)
        yield Sleep(5)
        log.append(2)

    job = sched.new_job(body())
    sched.start_later(job)
    sched.run_cycle()
    sched.cancel(job)
    drain(sched)
    assert log == [1] and job.done
    assert sched.live_jobs == 0


def test_language_errors_go_to_reporter():
    sched, errors = make()

    def body():
        yield YIELD
        raise RuntimeOrcError("boom")

    job = sched.new_job(body())
    sched.start_later(job)
    drain(sched)
    assert [str(e) for e in errors] == ["boom"] and job.done


def test_host_errors_propagate():
    sched, errors = make()

    def body():
        yield YIELD
        raise ValueError("host bug")

    sched.start_later(sched.new_job(body()))
    with pytest.raises(ValueError):
        drain(sched)
    assert errors == []


def test_step_counter_counts_resumptions():
    sched, _ = make()

    def body():
        for _ in range(3):
            yield YIELD

    sched.start_later(sched.new_job(body()))
    drain(sched)
    assert sched.steps == 4


# -- language-level ordering ----------------------------------------------------

def test_comma_starts_next_statement_after_first_suspension():
    out = run_stamped("{ { sleep(1s); echo(1) }, echo(2); };")
    assert out == [(0, "*** 2"), (1000, "*** 1")]


def test_scope_joins_background_children():
    out = run_stamped("{ { sleep(1s); echo(1) }, echo(2) }; echo(3);")
    assert out == [(0, "*** 2"), (1000, "*** 1"), (1000, "*** 3")]


def test_and_runs_both_and_waits():
    out = run_stamped("{ sleep(1s); echo(1) } & { sleep(2s); echo(2) }; echo(3);")
    assert out == [(1000, "*** 1"), (2000, "*** 2"), (2000, "*** 3")]


def test_for_sequential_and_parallel_timing():
    seq = run_stamped("for (var i : [1, 2]) { sleep(1s); echo(i) };")
    par = run_stamped("for& (var i : [1, 2]) { sleep(1s); echo(i) };")
    assert seq == [(1000, "*** 1"), (2000, "*** 2")]
    assert par == [(1000, "*** 1"), (1000, "*** 2")]


def test_sleep_zero_yields_and_negative_is_error():
    assert run_stamped("sleep(0); echo(1);") == [(0, "*** 1")]
    assert run_stamped("sleep(-1);") == [(0, "!!! sleep: negative duration")]


def test_time_reports_virtual_seconds():
    assert run_stamped("sleep(1.5s); time();") == [(1500, "1.5")]


def test_while_loop_with_sleep():
    out = run_stamped("var i = 0; while (i < 3) { sleep(1s); i++ }; i;")
    assert out[-1] == (3000, "3")


# -- idle contract ---------------------------------------------------------------

def test_idle_virtual_sleep_costs_constant_steps():
    engine = Engine(EngineConfig())
    engine.execute("sleep(3600s); echo(1);")
    c = engine.counters
    assert c.now == 3600000
    assert c.steps < 10


def test_real_clock_blocks_instead_of_polling():
    engine = Engine(EngineConfig(virtual=False))
    start = time.monotonic()
    engine.execute("sleep(0.05); echo(1);")
    assert time.monotonic() - start >= 0.05
    assert engine.counters.steps < 10
    assert engine.lines[-1].endswith("*** 1")


def test_run_for_advances_clock_without_overshooting():
    engine = Engine(EngineConfig())
    engine.submit("{ sleep(1s); echo(1) }, { sleep(5s); echo(5) };")
    engine.run_for(2000)
    assert engine.counters.now == 2000
    assert [line[11:] for line in engine.lines] == ["*** 1"]
