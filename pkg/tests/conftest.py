import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tms import catalog  # noqa: E402


@pytest.fixture(scope="session")
def schemes():
    return {name: catalog.get(name).scheme for name in catalog.names()}


def pytest_terminal_summary(terminalreporter):
    results = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
