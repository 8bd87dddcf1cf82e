import functools

import pytest

from bfwaves.kato import reduce_operator
from bfwaves.stokes import coefficient_functions


@functools.lru_cache(maxsize=None)
def coeffs_cached(h, eps, M=32):
    return coefficient_functions(h, eps, M)


@functools.lru_cache(maxsize=None)
def reduction_cached(h, eps, mu, M=32):
    return reduce_operator(h, eps, mu, M, coeffs_cached(h, eps, M))


@pytest.fixture
def coeffs():
    return coeffs_cached


@pytest.fixture
def reduction():
    return reduction_cached


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import REPORT
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
