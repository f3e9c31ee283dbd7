"""Quadrature grids on the unit sphere and on rectangular boxes.

Sphere grids are antipodally symmetric by construction: nodes are generated on
one hemisphere and mirrored by exact floating-point negation, so ``-node`` is
always present with an identical weight.  Box grids are inclusive uniform
tensor lattices with product trapezoid weights.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

SPHERE_MEASURE = {1: 2.0 * math.pi, 2: 4.0 * math.pi}


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Quadrature nodes and weights for surface-measure integrals on S^d."""

    d: int
    nodes: np.ndarray  # (N, d+1) unit vectors
    weights: np.ndarray  # (N,) positive

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", np.ascontiguousarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.ascontiguousarray(self.weights, dtype=float))
        if self.nodes.ndim != 2 or self.nodes.shape[1] != self.d + 1:
            raise ValueError("nodes must have shape (N, d+1)")
        if self.weights.shape != (self.nodes.shape[0],):
            raise ValueError("weights must have one entry per node")

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    def total_weight(self) -> float:
        return float(self.weights.sum())

    def integrate(self, values: np.ndarray) -> complex:
        return complex(np.sum(self.weights * values))

    def to_json_dict(self) -> dict:
        return {
            "kind": "sphere",
            "d": self.d,
            "nodes": self.nodes.tolist(),
            "weights": self.weights.tolist(),
        }


@dataclass(frozen=True, eq=False)
class UniformGrid:
    """Inclusive uniform tensor lattice on prod_i [-R_i, R_i] with trapezoid weights."""

    dim: int
    halfwidths: tuple
    counts: tuple

    def __post_init__(self) -> None:
        halfwidths = tuple(float(r) for r in np.atleast_1d(self.halfwidths))
        counts = tuple(int(n) for n in np.atleast_1d(self.counts))
        object.__setattr__(self, "halfwidths", halfwidths)
        object.__setattr__(self, "counts", counts)
        if len(halfwidths) != self.dim or len(counts) != self.dim:
            raise ValueError(
                f"expected {self.dim} halfwidths and counts, "
                f"got {len(halfwidths)} and {len(counts)}"
            )
        if any(r <= 0 for r in halfwidths):
            raise ValueError("halfwidths must be positive")
        if any(n < 2 for n in counts):
            raise ValueError("each axis needs at least 2 nodes")

    @cached_property
    def axes(self) -> list:
        return [np.linspace(-r, r, n) for r, n in zip(self.halfwidths, self.counts)]

    @cached_property
    def axis_weights(self) -> list:
        out = []
        for r, n in zip(self.halfwidths, self.counts):
            h = 2.0 * r / (n - 1)
            w = np.full(n, h)
            w[0] = w[-1] = 0.5 * h
            out.append(w)
        return out

    @property
    def shape(self) -> tuple:
        return self.counts

    @property
    def size(self) -> int:
        return int(np.prod(self.counts))

    def volume(self) -> float:
        return float(np.prod([2.0 * r for r in self.halfwidths]))

    def total_weight(self) -> float:
        return float(np.prod([w.sum() for w in self.axis_weights]))

    def nodes(self) -> np.ndarray:
        """Full lattice as an (N, dim) array in C order."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def weights(self) -> np.ndarray:
        """Full product-trapezoid weight tensor, shape == counts."""
        w = self.axis_weights[0]
        for wa in self.axis_weights[1:]:
            w = np.multiply.outer(w, wa)
        return w

    def integrate(self, values: np.ndarray) -> complex:
        """Weighted lattice sum without materializing the full weight tensor."""
        acc = np.asarray(values)
        if acc.shape != self.shape:
            raise ValueError(f"values shape {acc.shape} != grid shape {self.shape}")
        for wa in reversed(self.axis_weights):
            acc = acc @ wa
        return complex(acc)

    def to_json_dict(self) -> dict:
        return {
            "kind": "uniform",
            "d": self.dim,
            "nodes": self.nodes().tolist(),
            "weights": self.weights().ravel().tolist(),
            "halfwidths": list(self.halfwidths),
            "counts": list(self.counts),
        }


def make_sphere_grid(d: int, resolution: int) -> SphereGrid:
    """Antipodally symmetric quadrature grid on S^d.

    d=1: ``resolution`` equally spaced angles, equal weights 2*pi/resolution
    (the periodic trapezoid rule, spectrally accurate for smooth integrands).
    d=2: Gauss-Legendre in the polar coordinate z = omega_1 crossed with
    ``resolution`` uniform azimuths; constants are integrated exactly.

    ``resolution`` must be even so that the antipodal map sends nodes to nodes.
    """
    if d not in (1, 2):
        raise ValueError(f"unsupported dimension d={d} (only d=1,2)")
    if resolution < 8 or resolution % 2 != 0:
        raise ValueError("resolution must be even and >= 8 to keep antipodal symmetry")

    if d == 1:
        half = resolution // 2
        theta = 2.0 * math.pi * np.arange(half) / resolution
        upper = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        nodes = np.concatenate([upper, -upper], axis=0)
        weights = np.full(resolution, 2.0 * math.pi / resolution)
        return SphereGrid(d=1, nodes=nodes, weights=weights)

    # d == 2: polar axis along coordinate 0 so concentration poles are +-e_1.
    z, wz = np.polynomial.legendre.leggauss(resolution)
    z = 0.5 * (z - z[::-1])  # enforce exact node antisymmetry
    wz = 0.5 * (wz + wz[::-1])
    rho = np.sqrt(1.0 - z * z)
    half = resolution // 2
    phi = 2.0 * math.pi * np.arange(half) / resolution
    cphi = np.concatenate([np.cos(phi), -np.cos(phi)])
    sphi = np.concatenate([np.sin(phi), -np.sin(phi)])
    nodes = np.empty((resolution, resolution, 3))
    nodes[:, :, 0] = z[:, None]
    nodes[:, :, 1] = rho[:, None] * cphi[None, :]
    nodes[:, :, 2] = rho[:, None] * sphi[None, :]
    weights = np.broadcast_to((wz * (2.0 * math.pi / resolution))[:, None], (resolution, resolution))
    return SphereGrid(d=2, nodes=nodes.reshape(-1, 3), weights=np.ascontiguousarray(weights).ravel())


def make_uniform_grid(dim: int, halfwidths: Sequence[float], counts: Sequence[int]) -> UniformGrid:
    """Uniform inclusive lattice on prod [-R_i, R_i] with product trapezoid weights."""
    halfwidths = tuple(np.atleast_1d(halfwidths).tolist())
    counts = tuple(np.atleast_1d(counts).tolist())
    if len(halfwidths) != dim or len(counts) != dim:
        raise ValueError(
            f"halfwidths/counts length mismatch: dim={dim}, "
            f"got {len(halfwidths)} and {len(counts)}"
        )
    return UniformGrid(dim=dim, halfwidths=halfwidths, counts=counts)


def grid_to_json(grid) -> str:
    return json.dumps(grid.to_json_dict())


def grid_from_json(text: str):
    doc = json.loads(text)
    kind = doc.get("kind")
    if kind == "sphere":
        return SphereGrid(d=int(doc["d"]), nodes=np.array(doc["nodes"]), weights=np.array(doc["weights"]))
    if kind == "uniform":
        return UniformGrid(
            dim=int(doc["d"]),
            halfwidths=tuple(doc["halfwidths"]),
            counts=tuple(doc["counts"]),
        )
    raise ValueError(f"unknown grid kind {kind!r}")
