import math

import numpy as np
import pytest

from restriction_lab.extend import (
    ExtensionOperator,
    extend_parab,
    extend_parab_at,
    extend_sphere,
    extend_sphere_at,
    gaussian_parab_oracle,
    modulate,
    restrict_dual,
)
from restriction_lab.fields import (
    PlaneField,
    SphereField,
    SpacetimeField,
    inner_product,
    lebesgue_norm,
)
from restriction_lab.grids import make_sphere_grid, make_uniform_grid

from conftest import random_complex


def bessel_j0_oracle(r):
    """J0 by its integral representation, independent of the operator path."""
    theta = np.linspace(0.0, np.pi, 8193)
    values = np.cos(np.multiply.outer(np.atleast_1d(r), np.sin(theta)))
    return np.trapezoid(values, theta, axis=-1) / np.pi


def test_bessel_oracle_self_check():
    from scipy.special import j0

    r = np.linspace(0.0, 25.0, 101)
    assert np.abs(bessel_j0_oracle(r) - j0(r)).max() < 1e-12


def test_extension_constant_at_origin(circle_512):
    f = SphereField(circle_512, np.ones(circle_512.size))
    value = extend_sphere_at(f, [[0.0, 0.0]])[0]
    assert value == pytest.approx(2.0 * math.pi, abs=1e-12)


def test_extension_matches_bessel(circle_512):
    f = SphereField(circle_512, np.ones(circle_512.size))
    rng = np.random.default_rng(11)
    r = 20.0 * rng.random(50)
    phi = 2.0 * math.pi * rng.random(50)
    points = np.stack([r * np.cos(phi), r * np.sin(phi)], axis=-1)
    values = extend_sphere_at(f, points)
    assert np.abs(values - 2.0 * math.pi * bessel_j0_oracle(r)).max() < 1e-8


def test_extension_sphere_d2_sinc():
    # E1(x) = 4 pi sin|x| / |x| on S^2
    grid = make_sphere_grid(2, 64)
    f = SphereField(grid, np.ones(grid.size))
    rng = np.random.default_rng(4)
    pts = rng.standard_normal((20, 3)) * 3.0
    r = np.linalg.norm(pts, axis=1)
    values = extend_sphere_at(f, pts)
    assert np.abs(values - 4.0 * math.pi * np.sin(r) / r).max() < 1e-9


def test_extension_linearity(circle_256, small_box):
    ones = SphereField(circle_256, np.ones(circle_256.size))
    twos = SphereField(circle_256, 2.0 * np.ones(circle_256.size))
    u1 = extend_sphere(ones, small_box)
    u2 = extend_sphere(twos, small_box)
    assert np.allclose(u2.values, 2.0 * u1.values, rtol=0, atol=1e-12)


def test_extension_grid_matches_pointwise(circle_256):
    rng = np.random.default_rng(9)
    f = SphereField(circle_256, random_complex(rng, circle_256.size))
    box = make_uniform_grid(2, [3.0, 4.0], [7, 5])
    u = extend_sphere(f, box)
    pts = box.nodes()
    direct = extend_sphere_at(f, pts).reshape(box.shape)
    assert np.abs(u.values - direct).max() < 1e-12


def test_dimension_mismatch(circle_256):
    f = SphereField(circle_256, np.ones(circle_256.size))
    with pytest.raises(ValueError):
        extend_sphere(f, make_uniform_grid(3, [1.0] * 3, [4] * 3))
    with pytest.raises(ValueError):
        restrict_dual(
            SpacetimeField(make_uniform_grid(3, [1.0] * 3, [4] * 3), np.zeros((4, 4, 4))),
            circle_256,
        )


def test_parab_gaussian_origin():
    grid = make_uniform_grid(1, [6.0], [257])
    phi = PlaneField(grid, np.exp(-grid.axes[0] ** 2))
    box = make_uniform_grid(2, [1.0, 1.0], [3, 3])
    u = extend_parab(phi, box)
    center = u.values[1, 1]
    assert center == pytest.approx(math.sqrt(math.pi), abs=1e-10)


def test_parab_matches_oracle():
    grid = make_uniform_grid(1, [6.0], [513])
    phi = PlaneField(grid, np.exp(-grid.axes[0] ** 2))
    rng = np.random.default_rng(2)
    pts = rng.standard_normal((25, 2)) * np.array([4.0, 2.0])
    values = extend_parab_at(phi, pts)
    expected = np.array([gaussian_parab_oracle(1.0, x) for x in pts])
    assert np.abs(values - expected).max() < 1e-8


def test_parab_zero_field(small_box):
    grid = make_uniform_grid(1, [6.0], [64])
    phi = PlaneField(grid, np.zeros(64))
    assert np.all(extend_parab(phi, small_box).values == 0)


def test_gaussian_oracle_reference_values():
    assert gaussian_parab_oracle(1.0, [0.0, 0.0]) == pytest.approx(math.sqrt(math.pi), abs=1e-14)
    assert gaussian_parab_oracle(1.0, [2.0, 0.0]) == pytest.approx(
        complex(np.sqrt(np.pi / (1.0 - 1.0j))), abs=1e-14
    )
    assert gaussian_parab_oracle(1.0, [0.0, 3.0]) == pytest.approx(
        math.sqrt(math.pi) * math.exp(-9.0 / 4.0), abs=1e-14
    )


def test_gaussian_oracle_vs_brute_quadrature():
    # independent check: dense trapezoid integration of the defining integral
    xi = np.linspace(-10.0, 10.0, 20001)
    a = 1.3 + 0.4j
    for x in ([0.7, -1.1], [3.0, 2.0]):
        integrand = np.exp(-a * xi**2 + 1j * (x[0] * xi**2 / 2.0 + x[1] * xi))
        brute = np.trapezoid(integrand, xi)
        assert gaussian_parab_oracle(a, x) == pytest.approx(brute, abs=1e-10)


def test_gaussian_oracle_domain():
    with pytest.raises(ValueError):
        gaussian_parab_oracle(-1.0, [0.0, 0.0])


def test_restrict_delta(circle_256):
    box = make_uniform_grid(2, [2.0, 2.0], [5, 5])
    values = np.zeros(box.shape, dtype=complex)
    w = box.weights()
    values[2, 2] = 1.0 / w[2, 2]  # discrete delta at the origin
    g = restrict_dual(SpacetimeField(box, values), circle_256)
    assert np.abs(g.values - 1.0).max() < 1e-12


def test_adjoint_identity(circle_256, small_box):
    rng = np.random.default_rng(21)
    for _ in range(5):
        f = SphereField(circle_256, random_complex(rng, circle_256.size))
        u = SpacetimeField(small_box, random_complex(rng, small_box.size).reshape(small_box.shape))
        lhs = inner_product(extend_sphere(f, small_box), u)
        rhs = inner_product(f, restrict_dual(u, circle_256))
        assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


def test_restrict_zero(circle_256, small_box):
    u = SpacetimeField(small_box, np.zeros(small_box.shape))
    assert np.all(restrict_dual(u, circle_256).values == 0)


def test_modulate_identity(circle_256):
    rng = np.random.default_rng(31)
    f = SphereField(circle_256, random_complex(rng, circle_256.size))
    assert np.array_equal(modulate(f, [0.0, 0.0]).values, f.values)
    x0 = np.array([0.7, -0.3])
    g = modulate(f, x0)
    assert np.abs(np.abs(g.values) - np.abs(f.values)).max() < 1e-14


def test_modulation_translates_extension(circle_256):
    rng = np.random.default_rng(41)
    f = SphereField(circle_256, random_complex(rng, circle_256.size))
    for _ in range(10):
        x0 = rng.standard_normal(2)
        x = rng.standard_normal(2)
        lhs = extend_sphere_at(modulate(f, x0), [x])[0]
        rhs = extend_sphere_at(f, [x + x0])[0]
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_norm_monotone_in_truncation(circle_256):
    rng = np.random.default_rng(51)
    f = SphereField(circle_256, random_complex(rng, circle_256.size))
    norms = []
    for halfwidth, count in ((5.0, 41), (10.0, 81), (20.0, 161)):
        box = make_uniform_grid(2, [halfwidth] * 2, [count] * 2)
        norms.append(lebesgue_norm(extend_sphere(f, box), 6.0))
    assert norms[0] <= norms[1] <= norms[2]


def test_operator_matches_functions(circle_256, small_box):
    rng = np.random.default_rng(61)
    f = random_complex(rng, circle_256.size)
    op = ExtensionOperator(circle_256, small_box)
    u_op = op.apply(f)
    u_fn = extend_sphere(SphereField(circle_256, f), small_box).values
    assert np.abs(u_op - u_fn).max() < 1e-10
    u = random_complex(rng, small_box.size).reshape(small_box.shape)
    g_op = op.apply_adjoint(u)
    g_fn = restrict_dual(SpacetimeField(small_box, u), circle_256).values
    assert np.abs(g_op - g_fn).max() < 1e-10


def test_operator_3d_matches_functions():
    grid = make_sphere_grid(2, 16)
    box = make_uniform_grid(3, [2.0, 2.0, 2.0], [5, 7, 6])
    rng = np.random.default_rng(71)
    f = random_complex(rng, grid.size)
    op = ExtensionOperator(grid, box)
    u_fn = extend_sphere(SphereField(grid, f), box).values
    assert np.abs(op.apply(f) - u_fn).max() < 1e-10
    u = random_complex(rng, box.size).reshape(box.shape)
    g_fn = restrict_dual(SpacetimeField(box, u), grid).values
    assert np.abs(op.apply_adjoint(u) - g_fn).max() < 1e-10
