import pytest
from mpmath import mp

from primon.numeric import precision
from primon.primes import sieve_first

TEST_PRECISION = 128


@pytest.fixture(autouse=True)
def working_precision():
    with precision(TEST_PRECISION):
        yield


@pytest.fixture(scope="session")
def small_table():
    """First 1000 primes (p_1000 = 7919)."""
    with precision(TEST_PRECISION):
        return sieve_first(1000)


@pytest.fixture(scope="session")
def table():
    """First 10^4 primes, enough for the published grid and the criterion scans."""
    with precision(TEST_PRECISION):
        return sieve_first(10_000)


@pytest.fixture(scope="session")
def wide_table():
    """Every prime up to 10^6 (78498 primes) for the high-temperature diagnostics."""
    with precision(TEST_PRECISION):
        return sieve_first(78_499)


@pytest.fixture
def rel():
    def close(a, b, tol=mp.mpf("1e-15")):
        return abs(a - b) <= tol * max(abs(a), abs(b))

    return close
