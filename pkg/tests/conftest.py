import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from complementarity.linalg import RngSpec

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng(request):
    """Generator seeded by the test's name, so each test sees its own stream."""
    return RngSpec(0, request.node.name).generator()


def assert_close(a, b, atol=1e-10):
    np.testing.assert_allclose(np.asarray(a), np.asarray(b), atol=atol, rtol=0)
