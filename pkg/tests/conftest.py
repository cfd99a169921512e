import pytest

ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion; echoed in the terminal summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def record(number: int, passed: bool, detail: str):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
        lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
