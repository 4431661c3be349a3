import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from addcomp.construction import GrowthConfig, construct  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def pairs():
    """Greedy-min, seed 0 pairs for K = 2..6."""
    return {K: construct(GrowthConfig(K)) for K in range(2, 7)}


@pytest.fixture(scope="session")
def sampled_pairs():
    """Rejection-sampling path (threshold 1) for a few seeds."""
    return {(K, s): construct(GrowthConfig(K, seed=s, sieve_threshold=1)) for K in (3, 4) for s in range(3)}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
