import pytest

from oscmodes.numerics import Grid
from oscmodes.modes import make_fg_pair
from oscmodes.wedge import make_wedge_pair

ACCEPTANCE_SPACING = 1.0 / 256.0


@pytest.fixture(scope="session")
def acceptance_grid():
    """The grid every residual criterion is stated on: [-4, 4], h = 1/256."""
    return Grid.symmetric(4.0, ACCEPTANCE_SPACING)


@pytest.fixture(scope="session")
def fg_pair(acceptance_grid):
    return make_fg_pair(0, acceptance_grid)


@pytest.fixture(scope="session")
def fg_tail_pair():
    """Coarser pair reaching past q = 20 for the logarithmically slow tails."""
    return make_fg_pair(0, Grid.symmetric(20.5, 1.0 / 64.0))


@pytest.fixture(scope="session")
def wedge_pair():
    return make_wedge_pair(8.0, ACCEPTANCE_SPACING)


@pytest.fixture(scope="session")
def wedge_tail_pair():
    return make_wedge_pair(20.0, 1.0 / 64.0)
