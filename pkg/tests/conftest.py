import random
from fractions import Fraction

import pytest

from jacobi_perron.exactnum import make_field, rational
from jacobi_perron.expansion import State, expand
from jacobi_perron.selftest import cube_root_field, random_rational_point


@pytest.fixture(scope="session")
def K():
    return cube_root_field()


@pytest.fixture(scope="session")
def theta(K):
    return K.gen


@pytest.fixture(scope="session")
def cubic_trace(theta):
    return expand(State(theta, theta * theta), horizon=200)


@pytest.fixture(scope="session")
def cubic_trace60(theta):
    return expand(State(theta, theta * theta), horizon=60)


@pytest.fixture(scope="session")
def rational_traces():
    rng = random.Random(1234)
    return [expand(random_rational_point(rng)) for _ in range(25)]


@pytest.fixture(scope="session")
def lam_field():
    return make_field([-1, 0, -1, 1], (1, 2))


def half_point():
    return State(rational(Fraction(1, 2)), rational(Fraction(3, 2)))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
