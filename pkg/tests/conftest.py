import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cmorse.core import SystemParameters

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def golden():
    """hbar = 1, m = 1 + i, a = 1 + i, V_or = 2."""
    return SystemParameters.create(m_r=1, m_i=1, a_r=1, a_i=1, v_or=2)


@pytest.fixture
def h2():
    return SystemParameters.h2()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
