import pytest

from hurwitz.groups import make_group, parse_class_vector
from hurwitz.nielsen import Mode, enumerate_nielsen
from hurwitz.braid import braid_orbits


@pytest.fixture(scope="session")
def a4():
    return make_group("A4")


@pytest.fixture(scope="session")
def a4_cv(a4):
    return parse_class_vector(a4, "[3a,3a,3b,3b]")


@pytest.fixture(scope="session")
def a4_ni(a4, a4_cv):
    return enumerate_nielsen(a4, a4_cv, Mode.INNER_REDUCED)


@pytest.fixture(scope="session")
def a4_orbits(a4_ni):
    # sorted by (size, least member): O1 has size 6, O2 has size 9
    return braid_orbits(a4_ni)


@pytest.fixture(scope="session")
def d5_orbits():
    d5 = make_group("D5")
    cv = parse_class_vector(d5, "[2a,2a,2a,2a]")
    ni = enumerate_nielsen(d5, cv, Mode.ABSOLUTE_REDUCED)
    return braid_orbits(ni)
