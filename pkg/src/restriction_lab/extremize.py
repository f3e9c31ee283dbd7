"""Monotone generalized power iteration for the extension-norm ratio.

One step replaces f by the unit-norm maximizer of Re<f, g> where g is the
dual restriction of the L^q dual unit vector of Ef.  The chain

    ||E f_next||_q >= Re<E f_next, psi> = Re<f_next, g> = ||g||_{p'}
                   >= Re<f, g> = ||E f||_q

consists of Holder inequalities among the discrete weighted sums, so the
ratio history is nondecreasing up to rounding for every initialization.  The
converged ratio is a lower bound for the box-discretized operator norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exponents import conjugate_exponent
from .extend import ExtensionOperator, extend_sphere
from .fields import SphereField, SpacetimeField, lebesgue_norm
from .grids import SPHERE_MEASURE, SphereGrid, UniformGrid, make_sphere_grid


@dataclass(frozen=True)
class ExtremizerReport:
    """Outcome of a power-iteration run; the final field is L^p-normalized."""

    final_field: SphereField
    ratio_history: list
    el_residual: float
    modulation_center: np.ndarray
    tail_bound: float
    seed: int | None = None

    @property
    def final_ratio(self) -> float:
        return self.ratio_history[-1]

    def to_json_dict(self) -> dict:
        def finite_or_none(x: float):
            return x if math.isfinite(x) else None

        return {
            "ratio_history": list(self.ratio_history),
            "final_ratio": self.final_ratio,
            "el_residual": finite_or_none(self.el_residual),
            "tail_bound": finite_or_none(self.tail_bound),
            "seed": self.seed,
        }


def _box_norm(box: UniformGrid, values: np.ndarray, e: float) -> float:
    if math.isinf(e):
        return float(np.abs(values).max())
    return float(np.real(box.integrate(np.abs(values) ** e))) ** (1.0 / e)


def _dual_power(values: np.ndarray, exponent: float) -> np.ndarray:
    """|v|^(exponent-2) v with the v = 0 limit set to 0."""
    absv = np.abs(values)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = absv ** (exponent - 2.0) * values
    if exponent < 2.0:
        out = np.where(absv == 0.0, 0.0, out)
    return out


def _phase_fix(grid: SphereGrid, values: np.ndarray) -> np.ndarray:
    """Scale by a unimodular constant so the extension at the origin is >= 0."""
    z = complex(np.sum(grid.weights * values))
    if abs(z) == 0.0:
        return values
    return values * (np.conj(z) / abs(z))


def truncation_tail_bound(u: SpacetimeField, q: float, d: int) -> float:
    """Relative increase of ||u||_q if the box were extended to all of space.

    Uses the stationary-phase envelope |u(x)| <= c |x|^{-d/2} with c fitted on
    the outer 10% shell of the box, integrated outside the inscribed ball.
    Finite only for q above the decay-critical 2(d+1)/d.
    """
    a = d * q / 2.0 - (d + 1)
    if a <= 0:
        return math.inf
    r_in = min(u.grid.halfwidths)
    radii = np.sqrt(np.sum(u.grid.nodes() ** 2, axis=1)).reshape(u.grid.shape)
    shell = radii >= 0.9 * r_in
    c_est = float((np.abs(u.values) * radii ** (d / 2.0))[shell].max())
    tail_power = c_est**q * SPHERE_MEASURE[d] * r_in ** (-a) / a
    norm_power_box = float(np.real(u.grid.integrate(np.abs(u.values) ** q)))
    if norm_power_box == 0.0:
        return math.inf
    return (1.0 + tail_power / norm_power_box) ** (1.0 / q) - 1.0


def _lattice_argmax(box: UniformGrid, values: np.ndarray) -> np.ndarray:
    flat = int(np.argmax(np.abs(values)))
    return np.array([ax[i] for ax, i in zip(box.axes, np.unravel_index(flat, box.shape))])


def _peak_location(box: UniformGrid, values: np.ndarray) -> np.ndarray:
    """Peak of |values| with per-axis parabolic sub-lattice refinement."""
    absvals = np.abs(values)
    idx = np.unravel_index(int(np.argmax(absvals)), box.shape)
    peak = np.array([ax[i] for ax, i in zip(box.axes, idx)])
    for a, (ax, i) in enumerate(zip(box.axes, idx)):
        if 0 < i < ax.size - 1:
            sel = list(idx)
            sel[a] = slice(i - 1, i + 2)
            v_m, v_0, v_p = absvals[tuple(sel)]
            denom = v_m - 2.0 * v_0 + v_p
            if denom < 0:
                shift = 0.5 * (v_m - v_p) / denom
                peak[a] += np.clip(shift, -0.5, 0.5) * (ax[1] - ax[0])
    return peak


def power_iterate(
    init: SphereField,
    p: float,
    q: float,
    box: UniformGrid,
    max_iters: int = 500,
    stall_tol: float = 1e-10,
    stall_window: int = 5,
    seed: int | None = None,
    operator: ExtensionOperator | None = None,
) -> ExtremizerReport:
    """Ascend the ratio ||Ef||_{L^q(box)} / ||f||_p from the given start field.

    Stops at ``max_iters`` or when the ratio gained less than ``stall_tol``
    over ``stall_window`` consecutive steps.  q = inf replaces the dual vector
    by point evaluation at the lattice argmax of |Ef|.

    Between steps the modulation gauge is normalized: the iterate is modulated
    so that the peak of |Ef| sits at the origin (and the global phase makes
    Ef(0) real and nonnegative).  On the truncated box a modulation is not an
    exact symmetry, so the recentering is kept only when it does not lower the
    ratio; the recorded ratio history is therefore nondecreasing by
    construction of every accepted move.
    """
    if q <= p:
        raise ValueError(f"need q > p, got p={p}, q={q}")
    init_norm = lebesgue_norm(init, p)
    if init_norm == 0.0:
        raise ValueError("initial field must be nonzero")

    grid = init.grid
    if operator is None:
        operator = ExtensionOperator(grid, box)
    pprime = conjugate_exponent(p)
    f = _phase_fix(grid, init.values / init_norm)
    center = np.zeros(grid.d + 1)

    history: list = []
    u = operator.apply(f)
    ratio = _box_norm(box, u, q)
    for _ in range(max_iters):
        history.append(ratio)
        if len(history) > stall_window and history[-1] - history[-1 - stall_window] < stall_tol:
            break
        if math.isinf(q):
            x_star = _lattice_argmax(box, u)
            u_star = u.reshape(-1)[int(np.argmax(np.abs(u)))]
            g = (u_star / abs(u_star)) * np.exp(-1j * (grid.nodes @ x_star))
        else:
            psi = _dual_power(u, q) / ratio ** (q - 1.0)
            g = operator.apply_adjoint(psi)
        f = _dual_power(g, pprime)
        f = _phase_fix(grid, f / lebesgue_norm(SphereField(grid, f), p))
        u = operator.apply(f)
        ratio = _box_norm(box, u, q)

        x_star = _peak_location(box, u)
        if np.any(x_star != 0.0):
            trial = _phase_fix(grid, f * np.exp(1j * (grid.nodes @ x_star)))
            u_trial = operator.apply(trial)
            ratio_trial = _box_norm(box, u_trial, q)
            if ratio_trial >= ratio:
                f, u, ratio = trial, u_trial, ratio_trial
                center = center + x_star

    final = SphereField(grid, f)
    tail = truncation_tail_bound(SpacetimeField(box, u), q, grid.d) if not math.isinf(q) else 0.0
    residual = el_residual(final, p, q, box) if not math.isinf(q) else math.nan
    return ExtremizerReport(
        final_field=final,
        ratio_history=history,
        el_residual=residual,
        modulation_center=center,
        tail_bound=tail,
        seed=seed,
    )


def el_residual(f: SphereField, p: float, q: float, box: UniformGrid) -> float:
    """Relative Euler-Lagrange defect ||R(|Ef|^{q-2}Ef) - lam |f|^{p-2}f||_{p'} / ||.||_{p'}.

    The multiplier lam is the least-squares projection in the weighted sphere
    pairing, so the residual is normalization free; f must be L^p-normalized.
    """
    if math.isinf(q):
        raise ValueError("el_residual needs finite q")
    fnorm = lebesgue_norm(f, p)
    if abs(fnorm - 1.0) > 1e-9:
        raise ValueError(f"field must be L^p-normalized, got ||f||_p = {fnorm}")
    from .extend import restrict_dual

    u = extend_sphere(f, box)
    g = restrict_dual(SpacetimeField(box, _dual_power(u.values, q)), f.grid).values
    h = _dual_power(f.values, p)
    w = f.grid.weights
    lam = np.sum(w * g * np.conj(h)) / np.sum(w * h * np.conj(h))
    pprime = conjugate_exponent(p)
    num = lebesgue_norm(SphereField(f.grid, g - lam * h), pprime)
    den = lebesgue_norm(SphereField(f.grid, g), pprime)
    return num / den


def pinfty_norm(p: float, d: int, grid: SphereGrid | None = None, resolution: int = 64):
    """Exact L^p -> L^infty operator data: the value sigma(S^d)^{1/p'} and the
    constant extremizer lambda_p = sigma(S^d)^{-1/p} sampled on a grid."""
    if not (1.0 <= p):
        raise ValueError(f"p must satisfy 1 <= p <= inf, got {p}")
    sigma = SPHERE_MEASURE[d]
    value = sigma ** (1.0 / conjugate_exponent(p))  # exponent 0 when p = 1
    lam = sigma ** (-1.0 / p)
    if grid is None:
        grid = make_sphere_grid(d, resolution)
    return value, SphereField(grid, np.full(grid.size, lam, dtype=complex))


def noisy_constant_init(
    grid: SphereGrid, p: float, seed: int = 0, noise: float = 0.01
) -> SphereField:
    """Constant extremizer candidate plus proportional seeded complex noise."""
    lam = SPHERE_MEASURE[grid.d] ** (-1.0 / p) if not math.isinf(p) else 1.0
    rng = np.random.default_rng(seed)
    jitter = rng.standard_normal(grid.size) + 1j * rng.standard_normal(grid.size)
    values = lam * (1.0 + noise * jitter / math.sqrt(2.0))
    return SphereField(grid, values)
