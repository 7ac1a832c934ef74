import os
import sys

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture
def blobs():
    """Two tight blobs ten standard deviations apart."""
    rng = np.random.default_rng(3)
    a = rng.normal(0.0, 1.0, (100, 2))
    b = rng.normal(0.0, 1.0, (100, 2)) + [10.0, 10.0]
    return np.vstack([a, b]), np.repeat([0, 1], 100)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
