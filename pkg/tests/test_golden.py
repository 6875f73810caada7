from pathlib import Path

import pytest

from orcscript.transcript import replay

GOLDEN = Path(__file__).parent / "golden"
SCRIPTS = sorted(GOLDEN.glob("*.orc"))


@pytest.mark.parametrize("script", SCRIPTS, ids=[p.stem for p in SCRIPTS])
@pytest.mark.parametrize("mode", ["strict", "shape"])
def test_golden_transcript(script, mode):
    report = replay(script, script.with_suffix(".expected"), mode=mode)
    assert report.passed, report.diff or report.problems


def test_endless_script_stops_at_step_limit():
    report = replay(GOLDEN / "endless.orc", GOLDEN / "endless.expected")
    assert report.exit_code == 3
