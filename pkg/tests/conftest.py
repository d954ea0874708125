import sys

import numpy as np
import pytest

from morreylab import centered_grid, make_grid, Box


@pytest.fixture
def line_grid():
    """[-4, 4] with 4096 cells, shifted so 0, 0.5 and 3 are cell centres."""
    return make_grid(Box((-4 - 1 / 1024,), (4 - 1 / 1024,)), 4096)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
