import numpy as np
import pytest

from restriction_lab.caps import (
    Cap,
    caps_related,
    enumerate_caps,
    max_resolvable_level,
    slab_threshold,
)
from restriction_lab.grids import make_sphere_grid


def fine_circle_points(n=20001):
    theta = 2.0 * np.pi * np.arange(n) / n
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def test_level3_covering_circle():
    # independent oracle: exhaustive point-in-cap enumeration over a fine grid
    caps = enumerate_caps(1, 3, 3)
    points = fine_circle_points()
    covered = np.zeros(len(points), dtype=bool)
    for cap in caps:
        covered |= cap.contains(points)
    assert covered.all()


@pytest.mark.parametrize("d,level", [(1, 2), (1, 5), (2, 3)])
def test_covering_on_grids(d, level):
    grid = make_sphere_grid(d, 128 if d == 1 else 32)
    caps = enumerate_caps(d, level, level)
    covered = np.zeros(grid.size, dtype=bool)
    for cap in caps:
        covered |= cap.contains(grid.nodes)
    assert covered.all()


def test_empty_range():
    assert enumerate_caps(1, 5, 4) == []


def test_min_level_guard():
    with pytest.raises(ValueError):
        enumerate_caps(1, 1, 3)


def test_antipodal_membership_exact():
    points = fine_circle_points(4001)
    for cap in enumerate_caps(1, 3, 4):
        inside = cap.contains(points)
        mirrored = cap.contains(-points)
        assert np.array_equal(inside, mirrored)


def test_antipodal_membership_sphere():
    rng = np.random.default_rng(7)
    pts = rng.standard_normal((2000, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    for cap in enumerate_caps(2, 3, 4)[::7]:
        assert np.array_equal(cap.contains(pts), cap.contains(-pts))


def test_deterministic_ordering():
    caps = enumerate_caps(1, 2, 4)
    keys = [(c.axis, c.level, c.cell) for c in caps]
    assert keys == sorted(keys)
    assert caps == enumerate_caps(1, 2, 4)


def test_cap_geometry():
    cap = enumerate_caps(1, 3, 3)[0]
    assert cap.sidelength == pytest.approx(0.125)
    assert cap.measure() >= 2.0 * cap.sidelength  # area element >= 1
    center = cap.center_point()
    assert np.linalg.norm(center) == pytest.approx(1.0, abs=1e-12)
    assert abs(center[cap.axis]) >= slab_threshold(1) * 0.5


def test_caps_related_diagnostic():
    caps = [c for c in enumerate_caps(1, 4, 4) if c.axis == 0]
    base = caps[0]
    related = [c for c in caps if caps_related(base, c)]
    assert base not in related  # too close to itself
    assert related, "some cap at the right separation should be related"
    other_level = enumerate_caps(1, 5, 5)[0]
    assert not caps_related(base, other_level)


def test_max_resolvable_level(circle_512):
    level = max_resolvable_level(circle_512, min_nodes=8)
    assert level >= 3
    caps = enumerate_caps(1, level, level)
    counts = [int(c.contains(circle_512.nodes).sum()) for c in caps]
    assert min(counts) >= 8
