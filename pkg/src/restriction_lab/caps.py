"""Dyadic antipodal cap families on S^d.

A cap is the portion of the sphere sitting over one dyadic cell of sidelength
2^-k in the coordinates orthogonal to a chosen axis, taken together with its
antipodal mirror image.  For each axis j the caps of a given level tile the
slab where |omega_j| is bounded below, and the slabs over all d+1 axes cover
the sphere, because the largest coordinate of a unit vector is at least
1/sqrt(d+1).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .grids import SphereGrid

MIN_CAP_LEVEL = 2  # sidelength 2^-k stays <= 1/4


def slab_threshold(d: int) -> float:
    """Lower bound on |omega_axis| defining the slab covered from one axis."""
    return 1.0 / (2.0 * math.sqrt(d + 1))


def slab_radius(d: int) -> float:
    """Extent of the orthogonal coordinates over the slab."""
    return math.sqrt(1.0 - slab_threshold(d) ** 2)


@dataclass(frozen=True)
class Cap:
    """One antipodal cap: axis, dyadic level, cell index, and the cell itself.

    ``cell_origin`` holds the lower corner of the dyadic cell in the
    coordinates orthogonal to ``axis`` (increasing coordinate order); the cap
    is the set of omega with omega_axis > 0 whose orthogonal part lies in
    [origin, origin + 2^-level) per coordinate, together with its antipode.
    """

    d: int
    axis: int
    level: int
    cell: int
    cell_origin: tuple = field(repr=False)

    @property
    def sidelength(self) -> float:
        return 2.0 ** (-self.level)

    @property
    def perp_axes(self) -> tuple:
        return tuple(i for i in range(self.d + 1) if i != self.axis)

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Vectorized antipodal membership test for points of shape (N, d+1)."""
        points = np.atleast_2d(points)
        sign = np.sign(points[:, self.axis])
        perp = points[:, list(self.perp_axes)] * sign[:, None]
        s = self.sidelength
        origin = np.asarray(self.cell_origin)
        inside = np.all((perp >= origin) & (perp < origin + s), axis=1)
        return inside & (sign != 0)

    def center_point(self) -> np.ndarray:
        """Representative point of the positive component, lifted to the sphere."""
        zc = np.asarray(self.cell_origin) + 0.5 * self.sidelength
        rad = slab_radius(self.d)
        norm = np.linalg.norm(zc)
        if norm > rad:
            zc = zc * (rad / norm)
        point = np.zeros(self.d + 1)
        point[self.axis] = math.sqrt(max(1.0 - float(zc @ zc), 0.0))
        point[list(self.perp_axes)] = zc
        return point

    def measure(self) -> float:
        """Continuum surface measure of the cap (both components).

        Sidelength^d times the graph area element 1/|omega_axis| at the cell
        center, times 2 for the antipodal pair; cells protruding past the slab
        edge are evaluated at the clamped center.
        """
        zc = np.asarray(self.cell_origin) + 0.5 * self.sidelength
        r2 = min(float(zc @ zc), slab_radius(self.d) ** 2)
        return 2.0 * self.sidelength**self.d / math.sqrt(1.0 - r2)


def enumerate_caps(d: int, min_level: int, max_level: int) -> list:
    """All caps for axes 0..d and levels min_level..max_level, in (axis, level, cell) order.

    Together the caps of any single level cover S^d.  An empty range yields an
    empty list; levels below 2 are rejected (cap sidelength would exceed 1/4).
    """
    if d not in (1, 2):
        raise ValueError(f"unsupported dimension d={d}")
    if min_level < MIN_CAP_LEVEL:
        raise ValueError(f"min_level must be >= {MIN_CAP_LEVEL}, got {min_level}")
    caps: list = []
    if max_level < min_level:
        return caps
    rad = slab_radius(d)
    for axis in range(d + 1):
        for level in range(min_level, max_level + 1):
            s = 2.0**-level
            lo = math.floor(-rad / s)
            hi = math.ceil(rad / s)
            cell = 0
            for m in itertools.product(range(lo, hi), repeat=d):
                origin = np.array(m, dtype=float) * s
                # keep cells whose closure meets the disk of radius `rad`
                nearest = np.clip(0.0, origin, origin + s)
                if float(nearest @ nearest) <= rad * rad:
                    caps.append(Cap(d=d, axis=axis, level=level, cell=cell, cell_origin=tuple(origin)))
                    cell += 1
    return caps


def caps_related(a: Cap, b: Cap, separation: int = 2) -> bool:
    """Diagnostic relation between same-axis, same-level caps.

    True when the projective distance between the cap centers lies in
    [2^(-level+separation), 2^(-level+2*separation)].  The separation constant
    is a free parameter; 2 is a workable default.
    """
    if a.axis != b.axis or a.level != b.level or a.d != b.d:
        return False
    ca, cb = a.center_point(), b.center_point()
    dist = min(float(np.linalg.norm(ca - cb)), float(np.linalg.norm(ca + cb)))
    lo = 2.0 ** (-a.level + separation)
    hi = 2.0 ** (-a.level + 2 * separation)
    return lo <= dist <= hi


def max_resolvable_level(grid: SphereGrid, min_nodes: int = 8, max_search: int = 12) -> int:
    """Finest cap level at which every cap still holds at least ``min_nodes`` nodes."""
    best = 0
    for level in range(MIN_CAP_LEVEL, max_search + 1):
        caps = enumerate_caps(grid.d, level, level)
        counts = [int(c.contains(grid.nodes).sum()) for c in caps]
        if min(counts) >= min_nodes:
            best = level
        else:
            break
    if best < MIN_CAP_LEVEL:
        raise ValueError("grid too coarse to resolve even the coarsest caps")
    return best
