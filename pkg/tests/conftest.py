import pytest

from polyhom.energies import counterexample_cell_energy

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def ce4():
    return counterexample_cell_energy(4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
