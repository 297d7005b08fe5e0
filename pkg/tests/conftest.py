import pytest

_ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance criterion for the end-of-run report."""
    key = request.node.name
    _ACCEPTANCE[key] = "FAIL"

    def passed(label):
        _ACCEPTANCE[key] = f"PASS {label}"

    yield passed
    if _ACCEPTANCE[key] == "FAIL":
        _ACCEPTANCE[key] = f"FAIL {request.node.function.__doc__.strip().splitlines()[0]}"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k.split("_")[1])):
        status, _, label = _ACCEPTANCE[key].partition(" ")
        terminalreporter.write_line(f"[{status}] {key}: {label}")
