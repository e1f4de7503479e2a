import random

import pytest

from lmtopo.oracles import random_complex

# Lines recorded by the acceptance tests, echoed in the terminal summary so
# they show up even when stdout is captured.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def small_complexes():
    r = random.Random(2024)
    return [random_complex(r, 8) for _ in range(60)]
