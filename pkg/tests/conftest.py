import hypothesis
import numpy as np
import pytest

from slopegap import fixtures
from slopegap.pipeline import analyze

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=5)
hypothesis.settings.register_profile("thorough", max_examples=1000, deadline=None)


@pytest.fixture(scope="session")
def torus():
    return fixtures.torus()


@pytest.fixture(scope="session")
def three_tile():
    return fixtures.three_tile()


@pytest.fixture(scope="session")
def four_tile():
    return fixtures.four_tile()


@pytest.fixture(scope="session")
def ten_tile():
    return fixtures.ten_tile()


@pytest.fixture(scope="session")
def analyses():
    """Full analyses of every bundled surface, computed once per session."""
    return {name: analyze(factory()) for name, factory in fixtures.NAMED.items()}


@pytest.fixture(scope="session")
def ten_tile_components(analyses):
    """Ten-tile section components keyed by (alpha_eff, y0)."""
    return {(c.component.alpha_eff, c.component.y0): c for c in analyses["ten-tile"].components}
