from __future__ import annotations

import pytest

from quintic_acm.cohomology import Oracle, OracleConfig
from quintic_acm.fermat import line_index

# Disjoint pair: x0 + x1 = x2 + x3 = 0 and x0 + x2 = x1 + z x3 = 0.
D1 = line_index(0, 0, 0)
D2 = line_index(1, 0, 1)


@pytest.fixture(scope="session")
def oracle() -> Oracle:
    return Oracle(OracleConfig())


@pytest.fixture(scope="session")
def exact_oracle() -> Oracle:
    return Oracle(OracleConfig(mode="exact"))


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
