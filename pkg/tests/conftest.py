import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")

ACCEPTANCE_RESULTS = []
ACCEPTANCE_ARTIFACTS = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_weights(rng, n, low=-1.0, high=1.0):
    return rng.uniform(low, high, (n, n))


def rel_err(a, b):
    return abs(a - b) / max(1.0, abs(b))


def pytest_terminal_summary(terminalreporter):
    for name, text in sorted(ACCEPTANCE_ARTIFACTS.items()):
        terminalreporter.section(name)
        terminalreporter.write(text)
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: r[0]):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {name} ({detail})")
