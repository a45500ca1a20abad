import random

import pytest
from hypothesis import settings

from muhasse.dieudonne import PelParams

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

SMALL_GRID = [
    PelParams(2, 1, 2),
    PelParams(3, 1, 2),
    PelParams(2, 1, 2, k=2),
    PelParams(3, 2, 3),
]


@pytest.fixture
def rng():
    return random.Random(20240611)


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
