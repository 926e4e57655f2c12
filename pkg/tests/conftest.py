import pytest

from alweier.wronskian import basis_path, default_basis_dir, load_basis

FIXTURE_LEVELS = (22, 28, 30, 33, 35, 37)

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def bases():
    return {N: load_basis(basis_path(default_basis_dir(), N)) for N in FIXTURE_LEVELS}


@pytest.fixture
def report():
    def _report(line):
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
