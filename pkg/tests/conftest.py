import sys

import pytest

from dunkl import MuParams

MU_SETS = [(0.3, 0.5), (1.2, 0.1), (0.0, 0.0)]


@pytest.fixture(params=MU_SETS, ids=lambda m: f"mu={m[0]},{m[1]}")
def mu(request):
    return MuParams(*request.param)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        terminalreporter.write_line(results[key])
