import random

import pytest

from carnot_forge.fixtures import corpus
from carnot_forge.privileged import privilege

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def frame_corpus():
    """150 valid random frames, 50 of each type (2,3), (2,3,4), (1,2,3)."""
    return corpus(per_type=50, seed=0)


@pytest.fixture(scope="session")
def privileged_corpus(frame_corpus):
    return [(t, f, privilege(f)) for t, f in frame_corpus]


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
