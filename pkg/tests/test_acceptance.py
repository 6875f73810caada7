"""Acceptance criteria, one test each; every test prints a single verdict line.

Run alone with ``python3 -m pytest tests/test_acceptance.py -v -s`` or
``python3 tests/test_acceptance.py``.
"""

import itertools
import os
import subprocess
import sys
import time
from pathlib import Path

import pytest

from orcscript import Engine, EngineConfig, StepLimitExceeded
from orcscript.transcript import replay
from patterns import cases, expected_lines, match_script

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"
SUITE_BUDGET_S = 30.0


@pytest.fixture
def verdict(capsys):
    """Print one ``criterion N: PASS|FAIL detail`` line, visible even under capture."""
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
        return ok
    return emit


def quiet_engine(**config):
    engine = Engine(EngineConfig(**config), output=lambda line: None)
    return engine


# -- 1: golden transcripts ----------------------------------------------------------

def test_criterion_1_transcripts(verdict):
    scripts = sorted(GOLDEN.glob("*.orc"))
    failed = [p.stem for p in scripts
              if not replay(p, p.with_suffix(".expected"), mode="shape", tolerance=1).passed]
    ok = bool(scripts) and not failed
    verdict(1, ok, f"{len(scripts) - len(failed)}/{len(scripts)} golden transcripts replay in shape mode"
            + (f"; failing: {', '.join(failed)}" if failed else ""))
    assert ok, failed


# -- 2: push minimality ---------------------------------------------------------------

HOOK_STEPS = [
    ("""var global = false;
function test(var foo)
  { if (global) foo.a == 1 else foo.a == foo.b };
var foo = Object.new;
var foo.a = 1;
var foo.b = 2;
at ({echo("evaluate"); test(foo)})
  echo("True!")
onleave
  echo("False!");""", 1),
    ("foo.b = 3;", 2),
    ("global = true;", 3),
    ("foo.b = 2;", 3),
    ("foo.a = 2;", 4),
    ("global = false;", 5),
]


def test_criterion_2_push_minimality(verdict):
    engine = Engine(EngineConfig(trace_eval=True))
    counts = []
    for chunk, _ in HOOK_STEPS:
        engine.run_until_done(engine.submit(chunk))
        engine.run_until_quiescent()
        counts.append(engine.counters.evaluations)
    want = [n for _, n in HOOK_STEPS]
    deps = [line.split("deps: ")[1] for line in engine.lines if "### cond" in line]
    want_deps = ["foo, global, foo.a, foo.b", "foo, global, foo.a, foo.b", "foo, global, foo.a",
                 "foo, global, foo.a", "foo, global, foo.a, foo.b"]
    ok = counts == want and deps == want_deps and counts[4] == 4
    verdict(2, ok, f"evaluation counts per step {counts} (want {want}); "
            f"write to unhooked foo.b left the count at {counts[3]}")
    assert counts == want
    assert deps == want_deps


# -- 3: idle contract -----------------------------------------------------------------

def test_criterion_3_idle(verdict):
    n = 100
    engine = quiet_engine()
    decls = "".join(f"var off{i} = false;" for i in range(n))
    decls += "".join(f"at (off{i} && {i} >= 0) echo({i});" for i in range(n))
    engine.run_until_done(engine.submit(decls))
    engine.run_until_quiescent()
    before = engine.counters
    engine.run_until_done(engine.submit("sleep(10s);"))
    engine.run_until_quiescent()
    after = engine.counters
    idle_steps = after.steps - before.steps
    ok = after.evaluations == n and after.now - before.now == 10000 and idle_steps <= 4
    verdict(3, ok, f"{after.evaluations} evaluations for {n} watchers; "
            f"{idle_steps} job resumptions across 10 idle virtual seconds")
    assert after.evaluations == n
    assert idle_steps <= 4


# -- 4: find against a linear scan ---------------------------------------------------------

FIND = (GOLDEN / "find.orc").read_text().split("find([0")[0]


class FindHarness:
    def __init__(self):
        self.engine = quiet_engine()
        self.engine.execute(FIND)
        self.interp = self.engine.interp
        self.find = self.interp.lobby.slots["find"]

    def __call__(self, values, probe, sorted_):
        interp, box = self.interp, []
        args = [[float(x) for x in values], float(probe), sorted_]
        job = interp.new_job(lambda: box.append(interp.call_closure(self.find, interp.lobby, args)),
                             "probe", None)
        self.engine.sched.start_later(job)
        self.engine.run_until_quiescent()
        sched, watch = self.engine.sched, interp.watch
        quiet = sched.quiescent and sched.live_jobs == 0 and not watch.conditions
        return box[0] if box else None, quiet


def oracle_contains(values, probe):
    for x in values:
        if x == probe:
            return True
    return False


def sorted_lists():
    for n in range(9):
        yield from itertools.combinations_with_replacement(range(10), n)


def test_criterion_4_find(verdict):
    find = FindHarness()
    calls = mismatches = noisy = 0
    first_bad = None
    start = time.perf_counter()
    for values in sorted_lists():
        for probe in range(10):
            present = oracle_contains(values, probe)
            for sorted_ in (True, False):
                got, quiet = find(values, probe, sorted_)
                calls += 1
                if present:
                    good = type(got) is float and got == int(got) and 0 <= got < len(values) \
                        and values[int(got)] == probe
                else:
                    good = got == -1
                if not good:
                    mismatches += 1
                    first_bad = first_bad or (values, probe, sorted_, got)
                if not quiet:
                    noisy += 1
    elapsed = time.perf_counter() - start
    within = elapsed < SUITE_BUDGET_S
    ok = mismatches == 0 and noisy == 0 and within
    verdict(4, ok, f"{calls} calls, {mismatches} verdict mismatches, {noisy} calls left work behind, "
            f"{elapsed:.1f}s wall clock (budget {SUITE_BUDGET_S:.0f}s for the whole suite)")
    assert mismatches == 0, first_bad
    assert noisy == 0
    assert within, f"exhaustive sweep took {elapsed:.1f}s"


# -- 5: pattern matcher against brute force -------------------------------------------------

def arity_fires(spec_arity, payload_len):
    query = "e?" if spec_arity is None else "e?(" + ", ".join(f"var p{i}" for i in range(spec_arity)) + ")"
    payload = ", ".join(str(i) for i in range(payload_len))
    engine = Engine(EngineConfig())
    engine.execute(f'var e = Event.new; at ({query}) echo("hit"); e!({payload});')
    return any(line.endswith("*** hit") for line in engine.lines)


def test_criterion_5_patterns(verdict):
    disagreements = 0
    for pattern, value in cases(seed=20261016, count=1000, depth=3):
        script, _ = match_script(pattern, value)
        engine = Engine(EngineConfig())
        engine.execute(script)
        got = [line[11:] for line in engine.lines]
        if got != expected_lines(pattern, value):
            disagreements += 1
    arity_bad = [(spec, n) for spec in (None, 0, 1, 2, 3, 4) for n in range(5)
                 if arity_fires(spec, n) != (spec is None or spec == n)]
    ok = disagreements == 0 and not arity_bad
    verdict(5, ok, f"{1000 - disagreements}/1000 generated pairs agree with the oracle; "
            f"arity law violations: {len(arity_bad)}/30")
    assert disagreements == 0
    assert arity_bad == []


# -- 6: endless emission stays bounded -----------------------------------------------------

def test_criterion_6_endless(verdict):
    source = "var e = Event.new;\nat (e?(var p)) { echo(p); e!(-p) };\ne!(-1);\n"
    executions = []
    engine = Engine(EngineConfig(max_steps=6000), output=executions.append)
    engine.submit(source)
    live = []
    try:
        while engine._cycle():
            live.append(engine.sched.live_jobs)
    except StepLimitExceeded:
        pass
    handler_runs = sum(1 for line in executions if "*** " in line)
    alternating = all(a.endswith("*** -1") != b.endswith("*** -1")
                      for a, b in zip(executions[1:], executions[2:]))
    late = live[len(live) // 2:]
    ok = handler_runs >= 1000 and alternating and max(live) <= 8 and max(late) == max(live[:len(live) // 2])
    verdict(6, ok, f"{handler_runs} alternating handler runs; live jobs peak {max(live)}, "
            f"second-half peak {max(late)}")
    assert handler_runs >= 1000
    assert alternating
    assert max(live) <= 8


# -- 7: determinism -------------------------------------------------------------------------

def run_all_goldens_in_subprocess(hash_seed):
    env = dict(os.environ, PYTHONHASHSEED=str(hash_seed))
    out = []
    for script in sorted(GOLDEN.glob("*.orc")):
        proc = subprocess.run([sys.executable, "-m", "orcscript.cli", "run", str(script)],
                              capture_output=True, env=env, check=False)
        out.append(proc.stdout + b"exit=%d\n" % proc.returncode)
    return b"".join(out)


def test_criterion_7_determinism(verdict):
    first = run_all_goldens_in_subprocess(1)
    second = run_all_goldens_in_subprocess(2)
    ok = first == second and len(first) > 0
    verdict(7, ok, f"two runs under different hash seeds, {len(first)} bytes, "
            f"{'byte-identical' if first == second else 'DIFFERENT'}")
    assert first == second


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
