import pytest

from src.gfq import field_of_size
from src.rvring import RVRing


@pytest.fixture(scope="session")
def F2():
    return field_of_size(2)


@pytest.fixture(scope="session")
def F3():
    return field_of_size(3)


@pytest.fixture(scope="session")
def F4():
    return field_of_size(4)


@pytest.fixture(scope="session")
def ring_2_2(F2):
    """R_V for q=2, r=2."""
    return RVRing(F2, 2)


@pytest.fixture(scope="session")
def ring_3_2(F3):
    return RVRing(F3, 2)
