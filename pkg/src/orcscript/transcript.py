"""Golden transcript replay.

A transcript is the expected output of a script, one ``[timestamp] text``
line per output line.  Lines starting with ``#`` and blank lines are
ignored.  ``strict`` mode compares bytes; ``shape`` mode accepts timestamps
within a tolerance and requires the text to be identical.

A script may start with a pragma line carrying engine flags, e.g.
``// orc-flags: --trace-eval --max-steps 500``.
"""

from __future__ import annotations

import difflib
import re
import shlex
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .engine import Engine, EngineConfig, StepLimitExceeded
from .errors import ParseError

_LINE = re.compile(r"^\[(\d+)\] ?(.*)$")
_PRAGMA = re.compile(r"^\s*//\s*orc-flags:(.*)$")


@dataclass(frozen=True)
class TranscriptLine:
    timestamp: Optional[int]
    text: str

    def __str__(self) -> str:
        return self.text if self.timestamp is None else f"[{self.timestamp:08d}] {self.text}"


def parse_transcript(text: str) -> list[TranscriptLine]:
    lines = []
    for raw in text.splitlines():
        if not raw.strip() or raw.startswith("#"):
            continue
        m = _LINE.match(raw)
        lines.append(TranscriptLine(int(m.group(1)), m.group(2)) if m else TranscriptLine(None, raw))
    return lines


def script_flags(source: str) -> list[str]:
    """Engine flags from the script's ``// orc-flags:`` pragma, if any."""
    for line in source.splitlines():
        if not line.strip():
            continue
        m = _PRAGMA.match(line)
        return shlex.split(m.group(1)) if m else []
    return []


def compare(expected: list[TranscriptLine], actual: list[TranscriptLine], mode: str = "shape",
            tolerance: int = 1) -> list[str]:
    """Human-readable mismatches; empty when the transcripts agree."""
    if mode not in ("strict", "shape"):
        raise ValueError(f"unknown comparison mode {mode!r}")
    problems = []
    for i, (e, a) in enumerate(zip(expected, actual), 1):
        if mode == "strict":
            ok = str(e) == str(a)
        else:
            ok = e.text == a.text and (
                e.timestamp is None or a.timestamp is None or abs(e.timestamp - a.timestamp) <= tolerance)
        if not ok:
            problems.append(f"line {i}: expected {str(e)!r}, got {str(a)!r}")
    if len(expected) != len(actual):
        problems.append(f"expected {len(expected)} lines, got {len(actual)}")
    return problems


@dataclass
class ReplayReport:
    passed: bool
    problems: list[str]
    actual: str
    exit_code: int
    diff: str = field(default="")


def run_script_text(source: str, config: EngineConfig) -> tuple[str, int]:
    """Run ``source``; returns (transcript, exit code)."""
    engine = Engine(config)
    code = 0
    try:
        engine.execute(source)
    except ParseError:
        code = 2
    except StepLimitExceeded:
        code = 3
    return engine.output, code


def config_from_flags(flags: list[str], base: Optional[EngineConfig] = None) -> EngineConfig:
    cfg = base or EngineConfig()
    it = iter(flags)
    for flag in it:
        if flag == "--trace-eval":
            cfg.trace_eval = True
        elif flag == "--max-steps":
            cfg.max_steps = int(next(it))
        elif flag == "--det-ids":
            cfg.deterministic_ids = True
        elif flag == "--virtual-time":
            cfg.virtual = True
        else:
            raise ValueError(f"unsupported pragma flag {flag!r}")
    return cfg


def replay(script: str | Path, expected: str | Path, mode: str = "shape", tolerance: int = 1,
           config: Optional[EngineConfig] = None) -> ReplayReport:
    """Run ``script`` in virtual, deterministic mode and compare with ``expected``."""
    source = Path(script).read_text(encoding="utf-8")
    want_text = Path(expected).read_text(encoding="utf-8")
    cfg = config_from_flags(script_flags(source), config or EngineConfig())
    cfg.virtual = True
    cfg.deterministic_ids = True
    actual, code = run_script_text(source, cfg)
    problems = compare(parse_transcript(want_text), parse_transcript(actual), mode, tolerance)
    diff = ""
    if problems:
        want_lines = [str(line) for line in parse_transcript(want_text)]
        diff = "\n".join(difflib.unified_diff(want_lines, actual.splitlines(), "expected", "actual", lineterm=""))
    return ReplayReport(not problems, problems, actual, code, diff)
