import pytest
from hypothesis import HealthCheck, settings, strategies as st

from trireg.generators import random_regular_graph

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def regular_graphs(draw, max_n=14, degrees=(2, 3, 4)):
    d = draw(st.sampled_from(degrees))
    n = draw(st.integers(d + 1, max_n))
    if (n * d) % 2:
        n += 1
    seed = draw(st.integers(0, 2**32 - 1))
    return random_regular_graph(n, d, seed)


@pytest.fixture
def two_triangles():
    from trireg.graph import build_graph

    return build_graph(6, 2, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
