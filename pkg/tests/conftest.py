import numpy as np
import pytest

from confsphere.lorentz import Dimension
from confsphere import sphgrid


@pytest.fixture(scope="session")
def dim3():
    return Dimension(3)


@pytest.fixture(scope="session")
def grid16():
    return sphgrid.make_grid(16)


@pytest.fixture(scope="session")
def grid32():
    return sphgrid.make_grid(32)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def random_unit(rng, count, n=3):
    pts = rng.normal(size=(count, n))
    return pts / np.linalg.norm(pts, axis=1)[:, None]
