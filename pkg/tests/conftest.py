import re

from orcscript import run_source

_STAMP = re.compile(r"^\[\d{8}\] ")


def run_lines(source, **config):
    """Output lines of ``source`` with timestamps stripped."""
    return [_STAMP.sub("", line) for line in run_source(source, **config).splitlines()]


def run_stamped(source, **config):
    """Output lines as ``(ms, text)`` pairs."""
    out = []
    for line in run_source(source, **config).splitlines():
        out.append((int(line[1:9]), line[11:]))
    return out
