import random

import pytest
from hypothesis import HealthCheck, settings

from galdir import Prime

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def p3():
    return Prime(3)


@pytest.fixture(scope="session")
def p5():
    return Prime(5)


@pytest.fixture(scope="session")
def p7():
    return Prime(7)


@pytest.fixture
def rng():
    return random.Random(20260823)


def random_point_set(prime, rng, size=None):
    from galdir import PointSet

    p = prime.p
    all_points = [divmod(i, p) for i in range(p * p)]
    if size is None:
        size = rng.randrange(1, p * p + 1)
    return PointSet(prime, rng.sample(all_points, size))
