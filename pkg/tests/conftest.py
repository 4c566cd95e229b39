import numpy as np
import pytest

from laddertangle.experiments import baseline_params
from laddertangle.model import DopplerConfig


@pytest.fixture(scope="session")
def fast_doppler():
    # coarse but converged enough for structural checks
    return DopplerConfig(width=530.0, nodes=401, rule="trapezoid", span=3.0)


@pytest.fixture(scope="session")
def fast_params(fast_doppler):
    def make(**kwargs):
        kwargs.setdefault("doppler", fast_doppler)
        return baseline_params(**kwargs)
    return make


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def record_criterion_line(config, line):
    lines = getattr(config, "_criterion_lines", None)
    if lines is None:
        lines = []
        config._criterion_lines = lines
    lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_criterion_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
