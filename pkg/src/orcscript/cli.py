"""``orc`` command line: run scripts, interactive REPL, golden replay."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, TextIO

from .engine import Engine, EngineConfig, StepLimitExceeded
from .errors import IncompleteInput, LexError, ParseError
from .syntax import compile_source, tokenize
from .transcript import config_from_flags, replay, script_flags

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_STEPS = 3


def _engine_flags(p: argparse.ArgumentParser, real_default: bool) -> None:
    clock = p.add_mutually_exclusive_group()
    clock.add_argument("--virtual-time", dest="virtual", action="store_true", default=not real_default,
                       help="deterministic simulated clock")
    clock.add_argument("--real-time", dest="virtual", action="store_false", help="wall clock")
    p.add_argument("--det-ids", action="store_true", help="display object ids deterministically")
    p.add_argument("--trace-eval", action="store_true", help="dump condition evaluations and hooked slots")
    p.add_argument("--max-steps", type=int, default=None, metavar="N", help="stop after N job resumptions")
    p.add_argument("--stats", action="store_true", help="print instrumentation counters to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orc", description="Reactive orchestration script interpreter.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a script to quiescence")
    run.add_argument("script")
    _engine_flags(run, real_default=False)
    repl = sub.add_parser("repl", help="interactive session")
    _engine_flags(repl, real_default=True)
    rp = sub.add_parser("replay", help="compare a script's output with a golden transcript")
    rp.add_argument("script")
    rp.add_argument("expected")
    mode = rp.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="mode", action="store_const", const="strict", help="byte-exact comparison")
    mode.add_argument("--shape", dest="mode", action="store_const", const="shape",
                      help="timestamps within tolerance, text exact (default)")
    rp.add_argument("--tolerance", type=int, default=1, metavar="MS")
    rp.add_argument("--trace-eval", action="store_true")
    rp.add_argument("--max-steps", type=int, default=None, metavar="N")
    return parser


def _config(args: argparse.Namespace) -> EngineConfig:
    return EngineConfig(virtual=args.virtual, deterministic_ids=args.det_ids or args.virtual,
                        trace_eval=args.trace_eval, max_steps=args.max_steps)


def _stats(engine: Engine, stream: TextIO) -> None:
    c = engine.counters
    print(f"steps={c.steps} evaluations={c.evaluations} now={c.now} max_live_jobs={c.max_live_jobs}",
          file=stream)


def _printer(stream: TextIO):
    def out(line: str) -> None:
        stream.write(line + "\n")
        stream.flush()
    return out


def run_file(args: argparse.Namespace, stdout: TextIO, stderr: TextIO) -> int:
    with open(args.script, encoding="utf-8") as fh:
        source = fh.read()
    config = config_from_flags(script_flags(source), _config(args))
    engine = Engine(config, output=_printer(stdout))
    code = EXIT_OK
    try:
        engine.execute(source)
    except ParseError:
        code = EXIT_PARSE
    except StepLimitExceeded:
        code = EXIT_STEPS
    if args.stats:
        _stats(engine, stderr)
    return code


def _chunk_ready(buffer: str) -> Optional[bool]:
    """True: submit; False: read more; None: nothing but whitespace/comments."""
    try:
        tokens = tokenize(buffer)
    except IncompleteInput:
        return False
    except LexError:
        return True  # let the parser report it
    if not tokens:
        return None
    last = tokens[-1]
    return last.kind == "punctuation" and last.lexeme in (";", ",")


def repl(args: argparse.Namespace, stdin: TextIO, stdout: TextIO, stderr: TextIO) -> int:
    engine = Engine(_config(args), output=_printer(stdout))
    interactive = stdin.isatty()
    buffer = ""
    code = EXIT_OK
    try:
        while True:
            if not engine.config.virtual:
                engine.sched.fire_due()
                engine.drain_ready()
            if interactive:
                stdout.write("... " if buffer else "orc> ")
                stdout.flush()
            line = stdin.readline()
            if not line:
                break
            buffer += line
            ready = _chunk_ready(buffer)
            if ready is None:
                buffer = ""
                continue
            if not ready:
                continue
            try:
                program = compile_source(buffer)
            except IncompleteInput:
                continue
            except ParseError as err:
                engine.interp.report(err)
                buffer = ""
                continue
            buffer = ""
            job = engine.submit_program(program)
            engine.run_until_done(job)
            engine.drain_ready()
        if buffer.strip():
            try:
                engine.submit(buffer)
            except ParseError:
                pass
        engine.run_until_quiescent()
        engine.finish()
    except StepLimitExceeded:
        code = EXIT_STEPS
    if args.stats:
        _stats(engine, stderr)
    return code


def replay_cmd(args: argparse.Namespace, stdout: TextIO) -> int:
    config = EngineConfig(trace_eval=args.trace_eval, max_steps=args.max_steps)
    report = replay(args.script, args.expected, args.mode or "shape", args.tolerance, config)
    if report.passed:
        stdout.write(f"PASS {args.script}\n")
        return 0
    stdout.write(f"FAIL {args.script}\n")
    for problem in report.problems:
        stdout.write(f"  {problem}\n")
    if report.diff:
        stdout.write(report.diff + "\n")
    return 1


def main(argv: Optional[list[str]] = None, stdin: TextIO = None, stdout: TextIO = None,
         stderr: TextIO = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return run_file(args, stdout, stderr)
    if args.command == "repl":
        return repl(args, stdin, stdout, stderr)
    return replay_cmd(args, stdout)


if __name__ == "__main__":
    sys.exit(main())
