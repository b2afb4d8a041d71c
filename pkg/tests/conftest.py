import math
import sys

import numpy as np
import pytest

from hierleak import scenarios


def h2(p: float) -> float:
    """Binary entropy in bits, written out by hand."""
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def conv(a: float, b: float) -> float:
    return a * (1 - b) + b * (1 - a)


@pytest.fixture
def dsbs_sc():
    return scenarios.dsbs_scenario(0.1, 0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
