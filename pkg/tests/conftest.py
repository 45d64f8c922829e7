import random
from fractions import Fraction

import numpy as np
import pytest

from lie2ext.exactq import zeros

ALGEBRA_FIXTURES = ("A_ab(2,1)", "AFF1", "SL2_SKEL", "D_ID")


def random_rational_array(rng: random.Random, *shape, lo=-3, hi=3, denominators=(1,)):
    out = zeros(*shape)
    for idx in np.ndindex(*shape):
        out[idx] = Fraction(rng.randint(lo, hi), rng.choice(denominators))
    return out


def antisymmetrize(t):
    return t - np.swapaxes(t, 0, 1)


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.call_passed = rep.passed


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
