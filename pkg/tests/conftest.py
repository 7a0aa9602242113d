import numpy as np
import pytest

from littlewood.model import ExponentialSum, random_unit_gap_sum


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def unit_gap_sum(seed, N, **kw):
    return random_unit_gap_sum(np.random.default_rng(seed), N, **kw)


def harmonic_sum(lambdas, coeffs=None):
    lam = np.asarray(lambdas, dtype=float)
    return ExponentialSum(lam, np.ones(lam.size) if coeffs is None else coeffs)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def record_criterion(number, passed, detail):
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
