import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA: list[str] = []


def record_criterion(number, name, passed, detail=""):
    line = f"CRITERION {number} [{'PASS' if passed else 'FAIL'}] {name}"
    if detail:
        line += f" :: {detail}"
    CRITERIA.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def two_clusters(seed, n=50, spread=0.04, centres=((0.25, 0.3), (0.75, 0.7))):
    g = np.random.default_rng(seed)
    half = n // 2
    a = g.normal(centres[0], spread, (half, 2))
    b = g.normal(centres[1], spread, (n - half, 2))
    return np.concatenate([a, b])
