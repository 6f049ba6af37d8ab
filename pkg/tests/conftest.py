import numpy as np
import pytest

GRID = (-0.5, -0.3, 0.0, 0.5, 1.7)
GRID_PARAMS = [(a, b) for a in GRID for b in GRID]
SAMPLE_PARAMS = [(-0.5, -0.5), (0.0, 0.0), (0.5, 0.0), (-0.3, 1.7), (1.7, -0.5)]

# acceptance outcomes, printed after the run
ACCEPTANCE_LINES = {}


def record(criterion, passed, detail):
    line = f"criterion {criterion:>3}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[criterion] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")

    def key(c):
        num = "".join(ch for ch in c if ch.isdigit())
        return int(num), c

    for c in sorted(ACCEPTANCE_LINES, key=key):
        terminalreporter.write_line(ACCEPTANCE_LINES[c])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
