import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from diskpattern.generators import random_instance

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def instances(draw, triangulated=None, max_vertices=18, max_side=6):
    """A seeded random subdivision together with a valid boundary pair."""
    seed = draw(st.integers(0, 2**32 - 1))
    tri = draw(st.booleans()) if triangulated is None else triangulated
    return random_instance(random.Random(seed), triangulated=tri, max_vertices=max_vertices, max_side=max_side)


@pytest.fixture
def rng():
    return random.Random(20261015)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, (ok, detail) in sorted(RESULTS.items()):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
