import itertools

import numpy as np
import pytest

from lrc.model import BitSequence, ReliabilityPermutation


def all_words(n):
    return [BitSequence(n, w) for w in range(2**n)]


def all_perms(n):
    return [ReliabilityPermutation(p) for p in itertools.permutations(range(1, n + 1))]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
