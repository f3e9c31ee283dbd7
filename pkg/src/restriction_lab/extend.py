"""Extension operators for sphere and paraboloid, and the dual restriction.

All operators are direct weighted sums of complex exponentials over the
quadrature nodes; no fast transform or asymptotic approximation is involved.
For tensor-product box lattices the phase e^{ix.omega} factors across axes,
so the sums are organized as chunked matrix products.  Chunk sizes depend
only on array shapes, keeping the summation order (and hence the output
bits) reproducible run to run.
"""

from __future__ import annotations

import math

import numpy as np

from .fields import PlaneField, SphereField, SpacetimeField
from .grids import SphereGrid, UniformGrid

# complex elements per phase-matrix block (~128 MB)
_BLOCK_ELEMS = 1 << 23
# switch to the two-level exponential construction above this size
_FACTOR_MIN_ELEMS = 1 << 21


def _uniform_step(coords: np.ndarray):
    """Return (start, step) if coords is a uniform progression, else None."""
    if coords.size < 3:
        return None
    step = (coords[-1] - coords[0]) / (coords.size - 1)
    recon = coords[0] + step * np.arange(coords.size)
    scale = max(abs(coords[0]), abs(coords[-1]), 1.0)
    if np.max(np.abs(recon - coords)) <= 1e-12 * scale:
        return float(coords[0]), float(step)
    return None


def _phase_block(coords: np.ndarray, freqs: np.ndarray) -> np.ndarray:
    """exp(i * outer(coords, freqs)) as an (M, J) matrix.

    Large uniform coordinate axes use a coarse/fine index split so only
    O(M/B + B) exponentials per frequency are evaluated; the product of the
    two unit-modulus factors reproduces the direct exponential to a few ulp.
    """
    m, j = coords.size, freqs.size
    if m * j >= _FACTOR_MIN_ELEMS:
        uni = _uniform_step(coords)
        if uni is not None:
            x0, step = uni
            block = 1 << 8
            nb = (m + block - 1) // block
            coarse = np.exp(1j * np.outer(x0 + step * block * np.arange(nb), freqs))
            fine = np.exp(1j * np.outer(step * np.arange(block), freqs))
            out = (coarse[:, None, :] * fine[None, :, :]).reshape(nb * block, j)
            return out[:m]
    return np.exp(1j * np.outer(coords, freqs))


def _freq_chunk(n_rest: int, n_axis0_block: int) -> int:
    return max(1, _BLOCK_ELEMS // max(n_rest, n_axis0_block, 1))


def _tensor_extend(axes: list, axis_freqs: list, coeffs: np.ndarray) -> np.ndarray:
    """U[m...] = sum_j coeffs[j] * prod_a exp(i * axes[a][m_a] * axis_freqs[a][j])."""
    shape = tuple(len(ax) for ax in axes)
    m0 = shape[0]
    n_rest = int(np.prod(shape[1:], dtype=int)) if len(shape) > 1 else 1
    out = np.zeros((m0, n_rest), dtype=complex)
    total_j = coeffs.size
    if total_j == 0:
        return out.reshape(shape)
    block0 = min(m0, 1 << 14)
    jc = _freq_chunk(n_rest, block0)
    for j0 in range(0, total_j, jc):
        sl = slice(j0, min(j0 + jc, total_j))
        rest = None
        for ax, fr in zip(axes[1:], axis_freqs[1:]):
            blk = _phase_block(ax, fr[sl])
            rest = blk if rest is None else (rest[:, None, :] * blk[None, :, :]).reshape(-1, blk.shape[1])
        c = coeffs[sl]
        for b0 in range(0, m0, block0):
            rows = slice(b0, min(b0 + block0, m0))
            e0 = _phase_block(axes[0][rows], axis_freqs[0][sl]) * c[None, :]
            out[rows] += e0 if rest is None else e0 @ rest.T
    return out.reshape(shape)


def _tensor_restrict(axes: list, axis_freqs: list, weighted_values: np.ndarray) -> np.ndarray:
    """g[j] = sum_m weighted_values[m...] * prod_a exp(-i * axes[a][m_a] * axis_freqs[a][j])."""
    shape = weighted_values.shape
    m0 = shape[0]
    n_rest = int(np.prod(shape[1:], dtype=int)) if len(shape) > 1 else 1
    flat = weighted_values.reshape(m0, n_rest)
    total_j = axis_freqs[0].size
    out = np.zeros(total_j, dtype=complex)
    block0 = min(m0, 1 << 14)
    jc = _freq_chunk(n_rest, block0)
    for j0 in range(0, total_j, jc):
        sl = slice(j0, min(j0 + jc, total_j))
        rest = None
        for ax, fr in zip(axes[1:], axis_freqs[1:]):
            blk = np.conj(_phase_block(ax, fr[sl]))
            rest = blk if rest is None else (rest[:, None, :] * blk[None, :, :]).reshape(-1, blk.shape[1])
        acc = np.zeros(sl.stop - sl.start, dtype=complex)
        for b0 in range(0, m0, block0):
            rows = slice(b0, min(b0 + block0, m0))
            s = flat[rows] @ rest if rest is not None else flat[rows]
            e0 = np.conj(_phase_block(axes[0][rows], axis_freqs[0][sl]))
            acc += np.einsum("mj,mj->j", e0, s)
        out[sl] = acc
    return out


def _sphere_axis_freqs(nodes: np.ndarray) -> list:
    return [np.ascontiguousarray(nodes[:, a]) for a in range(nodes.shape[1])]


def _parab_axis_freqs(grid: UniformGrid) -> tuple:
    """Per-node paraboloid frequencies (|xi|^2/2, xi_1, ..., xi_d) and node weights."""
    pts = grid.nodes()
    freqs = [0.5 * np.sum(pts * pts, axis=1)]
    freqs += [np.ascontiguousarray(pts[:, a]) for a in range(grid.dim)]
    return freqs, grid.weights().ravel()


def extend_sphere(f: SphereField, box: UniformGrid) -> SpacetimeField:
    """Spacetime field x -> sum_omega w(omega) e^{i x.omega} f(omega) over the box lattice.

    Nodes where f vanishes are skipped; the remaining sum is evaluated exactly.
    """
    if f.grid.d + 1 != box.dim:
        raise ValueError(f"dimension mismatch: sphere d={f.grid.d}, box dim={box.dim}")
    coeffs = f.grid.weights * f.values
    mask = f.values != 0
    freqs = _sphere_axis_freqs(f.grid.nodes[mask])
    values = _tensor_extend(box.axes, freqs, coeffs[mask])
    return SpacetimeField(box, values)


def extend_sphere_at(f: SphereField, points: np.ndarray) -> np.ndarray:
    """Values of the extension at arbitrary spacetime points, shape (m, d+1)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != f.grid.d + 1:
        raise ValueError("points must have d+1 coordinates")
    coeffs = f.grid.weights * f.values
    return np.exp(1j * points @ f.grid.nodes.T) @ coeffs


def extend_parab_axes(phi: PlaneField, axes: list) -> np.ndarray:
    """Paraboloid extension on an arbitrary tensor lattice given by coordinate axes.

    axes[0] multiplies |xi|^2/2 and the remaining axes multiply xi.
    """
    if len(axes) != phi.grid.dim + 1:
        raise ValueError("need one time axis plus one axis per frequency coordinate")
    freqs, weights = _parab_axis_freqs(phi.grid)
    coeffs = weights * phi.values.ravel()
    mask = coeffs != 0
    axes = [np.ascontiguousarray(ax, dtype=float) for ax in axes]
    return _tensor_extend(axes, [fr[mask] for fr in freqs], coeffs[mask])


def extend_parab(phi: PlaneField, box: UniformGrid) -> SpacetimeField:
    """Spacetime field x -> sum_xi w(xi) e^{i(x_1 |xi|^2/2 + x'.xi)} phi(xi)."""
    if phi.grid.dim + 1 != box.dim:
        raise ValueError(f"dimension mismatch: plane dim={phi.grid.dim}, box dim={box.dim}")
    return SpacetimeField(box, extend_parab_axes(phi, box.axes))


def extend_parab_at(phi: PlaneField, points: np.ndarray) -> np.ndarray:
    """Paraboloid extension at arbitrary spacetime points, shape (m, d+1)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != phi.grid.dim + 1:
        raise ValueError("points must have d+1 coordinates")
    freqs, weights = _parab_axis_freqs(phi.grid)
    coeffs = weights * phi.values.ravel()
    phase = points[:, :1] * freqs[0][None, :]
    for a in range(1, len(freqs)):
        phase = phase + points[:, a : a + 1] * freqs[a][None, :]
    return np.exp(1j * phase) @ coeffs


def gaussian_parab_oracle(a: complex, x: np.ndarray) -> complex:
    """Closed form of the paraboloid extension of xi -> e^{-a|xi|^2} at x.

    Completing the square gives (pi/b)^{d/2} * exp(-|x'|^2/(4b)) with
    b = a - i x_1/2; the principal branch is used and, since Re a > 0, the
    argument b never crosses the negative real axis.
    """
    a = complex(a)
    if a.real <= 0:
        raise ValueError(f"need Re a > 0, got a={a}")
    x = np.asarray(x, dtype=float).ravel()
    d = x.size - 1
    if d < 1:
        raise ValueError("x must have at least 2 coordinates")
    b = a - 0.5j * x[0]
    xprime_sq = float(np.sum(x[1:] ** 2))
    return complex((np.pi / b) ** (d / 2.0) * np.exp(-xprime_sq / (4.0 * b)))


def restrict_dual(u: SpacetimeField, grid: SphereGrid) -> SphereField:
    """Sphere field omega -> sum_x w(x) e^{-i x.omega} u(x) over the box lattice.

    Exact discrete adjoint of extend_sphere: <Ef, u>_box = <f, Ru>_sphere for
    every f, u because both sides reorder the same finite double sum.
    """
    if u.grid.dim != grid.d + 1:
        raise ValueError(f"dimension mismatch: box dim={u.grid.dim}, sphere d={grid.d}")
    weighted = u.values.copy()
    for a, wa in enumerate(u.grid.axis_weights):
        shape = [1] * u.grid.dim
        shape[a] = wa.size
        weighted *= wa.reshape(shape)
    values = _tensor_restrict(u.grid.axes, _sphere_axis_freqs(grid.nodes), weighted)
    return SphereField(grid, values)


def modulate(f: SphereField, x0: np.ndarray) -> SphereField:
    """Multiply by e^{i x0.omega}; translates the extension by x0 exactly."""
    x0 = np.asarray(x0, dtype=float).ravel()
    if x0.size != f.grid.d + 1:
        raise ValueError("x0 must have d+1 coordinates")
    return f.with_values(f.values * np.exp(1j * (f.grid.nodes @ x0)))


class ExtensionOperator:
    """Extension/restriction pair bound to one (sphere grid, box) combination.

    Precomputes the per-axis phase matrices once so repeated applications
    (e.g. inside a power iteration) cost only matrix products.  The adjoint
    uses the conjugates of the same matrices, so the discrete duality
    <apply(f), u> = <f, apply_adjoint(u)> holds to rounding.
    """

    def __init__(self, grid: SphereGrid, box: UniformGrid):
        if grid.d + 1 != box.dim:
            raise ValueError("grid/box dimension mismatch")
        self.grid = grid
        self.box = box
        freqs = _sphere_axis_freqs(grid.nodes)
        self._mats = [_phase_block(ax, fr) for ax, fr in zip(box.axes, freqs)]
        self._wmats = [
            np.conj(mat) * wa[:, None] for mat, wa in zip(self._mats, box.axis_weights)
        ]

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Extension of sphere samples; returns the lattice tensor."""
        coeffs = self.grid.weights * values
        if self.box.dim == 2:
            return (self._mats[0] * coeffs[None, :]) @ self._mats[1].T
        return self._apply3(coeffs)

    def _apply3(self, coeffs: np.ndarray) -> np.ndarray:
        m0, m1, m2 = self.box.counts
        total_j = coeffs.size
        jc = _freq_chunk(m1 * m2, m0)
        out = np.zeros((m0, m1 * m2), dtype=complex)
        for j0 in range(0, total_j, jc):
            sl = slice(j0, min(j0 + jc, total_j))
            rest = (self._mats[1][:, None, sl] * self._mats[2][None, :, sl]).reshape(m1 * m2, -1)
            out += (self._mats[0][:, sl] * coeffs[None, sl]) @ rest.T
        return out.reshape(m0, m1, m2)

    def apply_adjoint(self, values: np.ndarray) -> np.ndarray:
        """Weighted dual restriction of lattice samples; returns sphere samples."""
        if self.box.dim == 2:
            return np.einsum("aj,ab,bj->j", self._wmats[0], values, self._wmats[1])
        m0, m1, m2 = self.box.counts
        total_j = self.grid.size
        jc = _freq_chunk(m1 * m2, m0)
        out = np.empty(total_j, dtype=complex)
        flat = values.reshape(m0, m1 * m2)
        for j0 in range(0, total_j, jc):
            sl = slice(j0, min(j0 + jc, total_j))
            rest = (self._wmats[1][:, None, sl] * self._wmats[2][None, :, sl]).reshape(m1 * m2, -1)
            out[sl] = np.einsum("mj,mj->j", self._wmats[0][:, sl], flat @ rest)
        return out

    def evaluate_at_origin(self, values: np.ndarray) -> complex:
        return complex(np.sum(self.grid.weights * values))
