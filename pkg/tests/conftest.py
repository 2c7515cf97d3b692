import pytest

from engine.fpmod import present_ideal
from utils.config import override_settings
from verify.fixtures import fixture_ring


@pytest.fixture(autouse=True)
def default_settings():
    # tests never depend on a developer's .env
    with override_settings(max_degree=64, ext_bound=4, dim_cap=64, seed=0, jobs=1) as settings:
        yield settings


@pytest.fixture
def node():
    return fixture_ring("node")


@pytest.fixture
def x2y2():
    return fixture_ring("x2y2")


@pytest.fixture
def exterior():
    return fixture_ring("exterior")


@pytest.fixture
def chain():
    return fixture_ring("chain")


@pytest.fixture
def square_of_max():
    return fixture_ring("square-of-max")


@pytest.fixture
def semigroup():
    return fixture_ring("semigroup")


@pytest.fixture
def plane():
    return fixture_ring("plane")


def ideal(R, *gens, label="I"):
    return present_ideal([R.element(g) for g in gens], R, label=label)
