import pytest

from src.arith import NUMERIC, SYMBOLIC
from src.fields import PAdicContext
from src.tools.cache import configure_cache


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: enumerations that take more than a few seconds")


@pytest.fixture(scope="session", autouse=True)
def oracle_cache(tmp_path_factory):
    return configure_cache(str(tmp_path_factory.mktemp("cache")))


@pytest.fixture
def ctx3():
    return PAdicContext(3, 6, SYMBOLIC)


@pytest.fixture
def num3():
    return PAdicContext(3, 6, NUMERIC)


@pytest.fixture
def ctx2():
    return PAdicContext(2, 6, SYMBOLIC)


@pytest.fixture
def num5():
    return PAdicContext(5, 5, NUMERIC)
