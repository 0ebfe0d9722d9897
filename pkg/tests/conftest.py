import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_int_series(rng, max_len, lo=-3, hi=3, min_len=1):
    return rng.integers(lo, hi + 1, size=int(rng.integers(min_len, max_len + 1))).astype(float)


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
