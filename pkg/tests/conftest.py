import sys
from pathlib import Path

import pytest

from boycottgames import triangle_example

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def triangle():
    return triangle_example()


_criteria_key = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, ok, detail)``.

    Lines are printed as they happen (visible with ``-s``) and repeated in the
    terminal summary.
    """
    lines = request.config.stash.setdefault(_criteria_key, [])

    def record(number, ok, detail=""):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_criteria_key, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
