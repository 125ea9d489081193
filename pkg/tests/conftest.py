import json
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def vectors():
    return json.loads((DATA / "reference_vectors.json").read_text())


_RESULTS = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one acceptance verdict; the terminal summary prints them all."""
    results = request.config.stash.setdefault(_RESULTS, {})

    def record(number, title, checks):
        failed = [name for name, ok in checks.items() if not ok]
        line = f"criterion {number} {'PASS' if not failed else 'FAIL'}: {title}"
        if failed:
            line += f" (failed: {', '.join(failed)})"
        results[number] = line
        print(line)
        assert not failed, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, {})
    if results:
        terminalreporter.write_sep("=", "acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
