import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import run_lines, run_stamped
from orcscript.events import match_payload, struct_eq
from orcscript.objects import VOID
from orcscript.syntax import parse
from patterns import canon, expected_lines, gen_case, match_script, oracle_match, pattern_source


def to_runtime(v):
    if isinstance(v, bool) or isinstance(v, str):
        return v
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, list):
        return [to_runtime(x) for x in v]
    if isinstance(v, tuple):
        return tuple(to_runtime(x) for x in v)
    return {k: to_runtime(x) for k, x in v.items()}


def parsed_patterns(source):
    (node,) = parse(f"at (e?({source})) 0;").items
    return node.patterns


def no_outer(expr):
    raise AssertionError("no outer variables in generated patterns")


@settings(max_examples=400, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_matcher_agrees_with_oracle(seed):
    pattern, value = gen_case(random.Random(seed))
    got = match_payload(parsed_patterns(pattern_source(pattern)), (to_runtime(value),), no_outer)
    want = oracle_match(pattern, value)
    if want is None:
        assert got is None
    else:
        assert got is not None
        assert {k: canon(v) for k, v in got.items()} == want


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_matcher_end_to_end(seed):
    pattern, value = gen_case(random.Random(seed))
    script, _ = match_script(pattern, value)
    assert run_lines(script) == expected_lines(pattern, value)


@pytest.mark.parametrize("a, b, equal", [
    (1.0, 1, True), (True, 1.0, False), ("a", "a", True), ([1.0, (2.0,)], [1.0, (2.0,)], True),
    ([1.0], (1.0,), False), ({"a": 1.0}, {"a": 1.0}, True), ({"a": 1.0}, {"b": 1.0}, False),
    (VOID, VOID, True), (VOID, False, False),
])
def test_struct_eq_table(a, b, equal):
    assert struct_eq(a, b) is equal
    assert struct_eq(b, a) is equal


# -- arity law --------------------------------------------------------------------

def arity_script(spec_arity, payload_len):
    if spec_arity is None:
        query = "e?"
    else:
        query = "e?(" + ", ".join(f"var p{i}" for i in range(spec_arity)) + ")"
    payload = ", ".join(str(i) for i in range(payload_len))
    return f'var e = Event.new; at ({query}) echo("hit"); e!({payload});'


@pytest.mark.parametrize("spec_arity", [None, 0, 1, 2, 3, 4])
@pytest.mark.parametrize("payload_len", [0, 1, 2, 3, 4])
def test_arity_law(spec_arity, payload_len):
    fired = "*** hit" in run_lines(arity_script(spec_arity, payload_len))
    assert fired == (spec_arity is None or spec_arity == payload_len)


# -- emission semantics --------------------------------------------------------------

def test_handlers_run_in_subscription_order():
    out = run_lines('var e = Event.new; at (e?) echo(1); at (e?) echo(2); at (e?) echo(3); e!;')
    assert out[1:] == ["*** 1", "*** 2", "*** 3"]


def test_async_emit_starts_handler_eagerly():
    source = """
    var e = Event.new;
    at (e?(var x)) { echo(x); sleep(1s); echo("after " + x) };
    e!("handler"); echo("top");
    """
    assert run_stamped(source)[1:] == [(0, "*** handler"), (0, "*** top"), (1000, "*** after handler")]


def test_sync_emit_waits_for_handlers():
    source = """
    var e = Event.new;
    at (e?) { sleep(1s); echo("handler") };
    e.syncEmit(); echo("top");
    """
    assert run_stamped(source)[1:] == [(1000, "*** handler"), (1000, "*** top")]


def test_guard_filters_and_sees_bindings():
    source = 'var e = Event.new; at (e?(var a, var b) if a < b) echo("%s<%s" % [a, b]); e!(1, 2); e!(2, 1);'
    assert run_lines(source)[1:] == ["*** 1<2"]


def test_outer_variable_pattern_compares_value():
    source = 'var e = Event.new; var x = 5; at (e?(x)) echo("five"); e!(4); e!(5);'
    assert run_lines(source)[2:] == ["*** five"]


def test_guard_error_is_reported_and_handler_skipped():
    source = 'var e = Event.new; at (e?(var a) if nosuch) echo(a); at (e?) echo("other"); e!(1);'
    assert run_lines(source)[1:] == ["!!! lookup failed: nosuch", "*** other"]


def test_guard_cannot_suspend():
    source = 'var e = Event.new; at (e? if { sleep(1s); true }) echo(1); e!;'
    out = run_lines(source)
    assert len(out) == 2 and out[1].startswith("!!!")


def test_duplicate_binding_is_rejected():
    out = run_lines("var e = Event.new; at (e?(var a, var a)) echo(a);")
    assert out[-1].startswith("!!!") and "a" in out[-1]


def test_event_identity_separates_handlers():
    source = "var e = Event.new; var f = Event.new; at (e?) echo(1); f!; e!;"
    assert run_lines(source)[2:] == ["*** 1"]


def test_emit_on_non_event_is_error():
    assert run_lines("var o = Object.new; o!;")[-1].startswith("!!!")


def test_return_from_handler_unsubscribes():
    source = """
    var e = Event.new;
    function wait_one() { at (e?(var v)) return v; loop sleep(1s) };
    { sleep(2s); e!(7); sleep(1s); e!(8) },
    wait_one();
    """
    out = run_stamped(source)
    assert out[-1] == (2000, "7")
    assert all(text != "8" for _, text in out)
