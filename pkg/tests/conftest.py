import pytest
from hypothesis import HealthCheck, settings

from hktorelli.lattice import diagonal, make_catalog
from hktorelli.scalar import quadratic_field

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def diag4():
    return diagonal(1, 1, 1, -1)


@pytest.fixture(scope="session")
def u3():
    return make_catalog("3u")


@pytest.fixture(scope="session")
def k3():
    return make_catalog("k3")


@pytest.fixture(scope="session")
def sqrt2():
    return quadratic_field(2)
