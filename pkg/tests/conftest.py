import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from touristwalk.image import GrayImage  # noqa: E402

# 4x4 grid on which a mu=2 MIN walk from (0, 2) has transient 5 and period 4
FIG1_GRID = [[7, 9, 0, 7], [2, 5, 9, 2], [7, 1, 3, 9], [4, 5, 2, 1]]


@pytest.fixture
def tiny():
    return GrayImage(np.array([[0, 10], [20, 30]]))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_image(rng, h, w, levels=256):
    return GrayImage(rng.integers(0, levels, (h, w)))


ACCEPTANCE_LINES = []


def record(number, passed, detail):
    """``passed`` is True, False or None (skipped)."""
    status = "SKIP" if passed is None else ("PASS" if passed else "FAIL")
    ACCEPTANCE_LINES.append((number, f"criterion {number:>2}: {status}  {detail}"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
