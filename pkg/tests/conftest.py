import numpy as np
import pytest

from restriction_lab.grids import make_sphere_grid, make_uniform_grid


@pytest.fixture(scope="session")
def circle_256():
    return make_sphere_grid(1, 256)


@pytest.fixture(scope="session")
def circle_512():
    return make_sphere_grid(1, 512)


@pytest.fixture(scope="session")
def sphere_64():
    return make_sphere_grid(2, 64)


@pytest.fixture(scope="session")
def small_box():
    return make_uniform_grid(2, [5.0, 5.0], [33, 33])


def random_complex(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)
