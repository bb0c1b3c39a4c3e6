import pytest

_MEASURED: dict[str, str] = {}
_OUTCOMES: dict[str, str] = {}


@pytest.fixture
def measure(request):
    """Record the measured quantity shown on the acceptance summary line."""

    def record(text: str) -> None:
        _MEASURED[request.node.nodeid] = text
        print(text)

    return record


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _OUTCOMES[report.nodeid] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _OUTCOMES.items():
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{outcome} {name}  {_MEASURED.get(nodeid, '')}".rstrip())
