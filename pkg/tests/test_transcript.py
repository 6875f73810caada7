import pytest

from orcscript.transcript import TranscriptLine, compare, parse_transcript, script_flags


def test_parse_skips_comments_and_blank_lines():
    text = "# header\n\n[00000012] hello\nplain\n"
    assert parse_transcript(text) == [TranscriptLine(12, "hello"), TranscriptLine(None, "plain")]


def test_line_renders_with_padded_stamp():
    assert str(TranscriptLine(7, "x")) == "[00000007] x"


@pytest.mark.parametrize("got, mode, tolerance, ok", [
    (1000, "shape", 1, True),
    (1001, "shape", 1, True),
    (1002, "shape", 1, False),
    (1001, "strict", 1, False),
    (1000, "strict", 0, True),
])
def test_timestamp_tolerance(got, mode, tolerance, ok):
    expected = [TranscriptLine(1000, "*** a")]
    actual = [TranscriptLine(got, "*** a")]
    assert (compare(expected, actual, mode, tolerance) == []) is ok


def test_text_must_match_in_shape_mode():
    problems = compare([TranscriptLine(0, "a")], [TranscriptLine(0, "b")], "shape")
    assert problems == ["line 1: expected '[00000000] a', got '[00000000] b'"]


def test_length_mismatch_is_reported():
    problems = compare([TranscriptLine(0, "a")], [], "shape")
    assert problems == ["expected 1 lines, got 0"]


@pytest.mark.parametrize("source, flags", [
    ("// orc-flags: --trace-eval\nx;", ["--trace-eval"]),
    ("\n// orc-flags: --max-steps 5\n", ["--max-steps", "5"]),
    ("// ordinary comment\n// orc-flags: --trace-eval\n", []),
    ("x;", []),
])
def test_pragma_must_be_first_line(source, flags):
    assert script_flags(source) == flags
