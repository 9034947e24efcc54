import numpy as np
import pytest

from equipart.cli import symmetric_cloud
from equipart.measures import MassDistribution


def cloud(n, count, seed, bandwidth=0.0, scale=1.0, shift=0.0):
    rng = np.random.default_rng(seed)
    return MassDistribution(shift + scale * rng.standard_normal((count, n)), bandwidth=bandwidth)


def phase_symmetric(n, base=6, rotations=60, seed=0, bandwidth=0.0):
    """Cloud invariant under multiplication by exp(2 pi i k / rotations)."""
    return MassDistribution(symmetric_cloud(n, base, rotations, np.random.default_rng(seed)),
                            bandwidth=bandwidth)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
