import pytest

from apq.catalog import Catalog
from apq.quiverrep import build_quiver


@pytest.fixture(scope="session")
def q23():
    return build_quiver(2, 3)


@pytest.fixture(scope="session")
def cat23(q23):
    return Catalog(q23, seed=0)


@pytest.fixture(scope="session")
def q34():
    return build_quiver(3, 4)


@pytest.fixture(scope="session")
def cat34(q34):
    return Catalog(q34, seed=0)
