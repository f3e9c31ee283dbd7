import math

import numpy as np
import pytest

from restriction_lab.grids import (
    grid_from_json,
    grid_to_json,
    make_sphere_grid,
    make_uniform_grid,
)


def antipode_table(grid):
    index = {tuple(node): i for i, node in enumerate(grid.nodes)}
    return [index.get(tuple(-node)) for node in grid.nodes]


def test_circle_weight_sum(circle_256):
    assert circle_256.total_weight() == pytest.approx(2.0 * math.pi, abs=1e-12)


def test_sphere_weight_sum(sphere_64):
    assert sphere_64.total_weight() == pytest.approx(4.0 * math.pi, abs=1e-10)


@pytest.mark.parametrize("d,res", [(1, 64), (1, 256), (2, 16), (2, 64)])
def test_nodes_on_sphere(d, res):
    grid = make_sphere_grid(d, res)
    norms = np.linalg.norm(grid.nodes, axis=1)
    assert np.abs(norms - 1.0).max() <= 1e-14


@pytest.mark.parametrize("d,res", [(1, 64), (2, 16)])
def test_antipodal_closure_exact(d, res):
    grid = make_sphere_grid(d, res)
    partners = antipode_table(grid)
    assert all(j is not None for j in partners)
    w = grid.weights
    assert all(w[i] == w[j] for i, j in enumerate(partners))


def test_sphere_grid_errors():
    with pytest.raises(ValueError):
        make_sphere_grid(3, 64)
    with pytest.raises(ValueError):
        make_sphere_grid(1, 65)
    with pytest.raises(ValueError):
        make_sphere_grid(1, 4)


def test_uniform_trapezoid_weights():
    grid = make_uniform_grid(1, [1.0], [3])
    assert np.allclose(grid.axes[0], [-1.0, 0.0, 1.0])
    assert np.allclose(grid.axis_weights[0], [0.5, 1.0, 0.5])


def test_uniform_volume():
    grid = make_uniform_grid(2, [2.0, 3.0], [5, 5])
    assert grid.total_weight() == pytest.approx(24.0, abs=1e-14)
    assert grid.volume() == pytest.approx(24.0)


def test_uniform_grid_errors():
    with pytest.raises(ValueError):
        make_uniform_grid(1, [1.0], [3, 3])
    with pytest.raises(ValueError):
        make_uniform_grid(2, [1.0, -1.0], [4, 4])
    with pytest.raises(ValueError):
        make_uniform_grid(1, [1.0], [1])


def test_integrate_constant_boxes():
    grid = make_uniform_grid(3, [1.0, 2.0, 0.5], [4, 7, 5])
    ones = np.ones(grid.shape)
    assert complex(grid.integrate(ones)).real == pytest.approx(grid.volume(), rel=1e-13)


def test_sphere_json_roundtrip(circle_256):
    restored = grid_from_json(grid_to_json(circle_256))
    assert restored.d == 1
    assert np.array_equal(restored.nodes, circle_256.nodes)
    assert np.array_equal(restored.weights, circle_256.weights)


def test_uniform_json_roundtrip():
    grid = make_uniform_grid(2, [2.0, 3.0], [5, 9])
    doc = grid_to_json(grid)
    assert '"kind": "uniform"' in doc
    restored = grid_from_json(doc)
    assert restored.halfwidths == grid.halfwidths
    assert restored.counts == grid.counts
