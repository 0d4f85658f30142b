import pytest

from rauzy import graphs
from rauzy.words import FreeGroup


@pytest.fixture(scope="session")
def group2():
    return FreeGroup(2)


@pytest.fixture(scope="session")
def rose2(group2):
    return graphs.rose(group2)


@pytest.fixture(scope="session")
def cyc2(group2):
    return graphs.two_cycle(group2)


@pytest.fixture(scope="session")
def star3(group2):
    return graphs.three_star(group2)
