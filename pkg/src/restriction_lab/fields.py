"""Sampled complex fields on sphere and box grids, with weighted Lebesgue norms."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .grids import SphereGrid, UniformGrid


@dataclass(frozen=True, eq=False)
class SphereField:
    """Complex samples attached to the nodes of a SphereGrid."""

    grid: SphereGrid
    values: np.ndarray  # (N,) complex

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(self.values, dtype=complex)
        if values.shape != (self.grid.size,):
            raise ValueError(
                f"values length {values.shape} does not match grid size {self.grid.size}"
            )
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray) -> "SphereField":
        return SphereField(self.grid, values)


@dataclass(frozen=True, eq=False)
class _BoxField:
    grid: UniformGrid
    values: np.ndarray  # shape == grid.counts, complex

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(self.values, dtype=complex)
        if values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {values.shape} does not match lattice shape {self.grid.shape}"
            )
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray):
        return type(self)(self.grid, values)


class PlaneField(_BoxField):
    """Complex samples on a box lattice in R^d (frequency plane of the paraboloid)."""


class SpacetimeField(_BoxField):
    """Complex samples on a box lattice in R^{d+1}."""


def _check_norm_exponent(exponent: float) -> float:
    exponent = float(exponent)
    if not exponent >= 1.0:
        raise ValueError(f"norm exponent must be >= 1 (or inf), got {exponent}")
    return exponent


def lebesgue_norm(field, exponent: float) -> float:
    """Weighted L^e norm of a field; exponent inf gives the lattice sup norm."""
    exponent = _check_norm_exponent(exponent)
    absvals = np.abs(field.values)
    if math.isinf(exponent):
        return float(absvals.max()) if absvals.size else 0.0
    power = field.grid.integrate(absvals**exponent)
    return float(np.real(power)) ** (1.0 / exponent)


def norm_power(field, exponent: float) -> float:
    """Weighted integral of |values|^e (the norm raised to the e-th power)."""
    exponent = _check_norm_exponent(exponent)
    if math.isinf(exponent):
        raise ValueError("norm_power requires a finite exponent")
    return float(np.real(field.grid.integrate(np.abs(field.values) ** exponent)))


def inner_product(f, g) -> complex:
    """Weighted sesquilinear pairing <f, g> with the conjugate on the second slot."""
    if f.values.shape != g.values.shape:
        raise ValueError("fields must live on grids of the same shape")
    return complex(f.grid.integrate(f.values * np.conj(g.values)))


_FIELD_KINDS = {"sphere": SphereField, "plane": PlaneField, "spacetime": SpacetimeField}


def field_to_json(field) -> str:
    values = np.asarray(field.values).ravel()
    kind = next(k for k, cls in _FIELD_KINDS.items() if isinstance(field, cls))
    return json.dumps(
        {
            "field": kind,
            "grid": field.grid.to_json_dict(),
            "values_re": values.real.tolist(),
            "values_im": values.imag.tolist(),
        }
    )


def field_from_json(text: str):
    from .grids import grid_from_json

    doc = json.loads(text)
    grid = grid_from_json(json.dumps(doc["grid"]))
    values = np.asarray(doc["values_re"], dtype=float) + 1j * np.asarray(doc["values_im"], dtype=float)
    cls = _FIELD_KINDS[doc["field"]]
    if cls is SphereField:
        return SphereField(grid, values)
    return cls(grid, values.reshape(grid.shape))
