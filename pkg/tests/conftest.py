import pytest

from apds import saturate
from helpers import load


@pytest.fixture(scope="session")
def e1():
    return load("e1.apds")


@pytest.fixture(scope="session")
def e1s(e1):
    return saturate(e1)


@pytest.fixture(scope="session")
def rsys():
    return load("r.apds")
