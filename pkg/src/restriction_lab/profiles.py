"""Antipodally concentrating profiles and finite-scale limit diagnostics.

A profile pair (phi_plus, phi_minus) on the frequency plane generates, at
concentration scale lam, the sphere field

    g_lam(omega) = lam^{-d/p} [phi_plus(omega'/lam) 1_{omega_1>0}
                               + phi_minus(omega'/lam) 1_{omega_1<0}] 1_{|omega'|<1/2}.

As lam decreases, the extension of g_lam is described by parabolic extensions
of the two profiles riding opposite unit-frequency carriers e^{+-i x_1}; the
diagnostics here measure how fast the finite-scale quantities approach that
description: a relative residual against the two-carrier model, and the
spacetime norm against its fast-phase circle average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline, RegularGridInterpolator

from .constants import beta, circle_average_phi
from .exponents import scaling_line_q
from .extend import extend_parab_axes, extend_sphere
from .fields import PlaneField, SphereField, SpacetimeField, lebesgue_norm, norm_power
from .grids import SphereGrid, UniformGrid, make_sphere_grid, make_uniform_grid

MAX_SCHEDULE_LAMBDA = 0.25
MIN_CAP_NODES = 8

#: x_1 lattice spacing used for spacetime norms of concentrated fields: pi*5/16.
#: Successive nodes advance the relative carrier phase 2*x_1 by 2*pi*5/16, so
#: 16 consecutive nodes sample the fast phase uniformly and the lattice sum
#: performs the circle average exactly for trigonometric content of degree < 16
#: while the envelope drifts only O(lam^2) per cycle.
BEAT_STEP = math.pi * 5.0 / 16.0


@dataclass(frozen=True, eq=False)
class ProfilePair:
    """Two plane profiles destined for opposite hemispheres; t records the
    norm ratio ||phi_minus||_p / ||phi_plus||_p used in factored predictions."""

    phi_plus: PlaneField
    phi_minus: PlaneField
    t: float

    def __post_init__(self) -> None:
        if self.phi_plus.grid.shape != self.phi_minus.grid.shape or not np.allclose(
            self.phi_plus.grid.halfwidths, self.phi_minus.grid.halfwidths
        ):
            raise ValueError("profile pair must share one plane grid")

    @property
    def d(self) -> int:
        return self.phi_plus.grid.dim

    @property
    def grid(self) -> UniformGrid:
        return self.phi_plus.grid

    def is_zero(self) -> bool:
        return not (np.any(self.phi_plus.values) or np.any(self.phi_minus.values))

    def boundary_mass_fraction(self, p: float) -> float:
        """Fraction of |phi|^p mass sitting on the outermost lattice shell.

        A proxy for mass escaping the grid box; diagnostics are meaningful
        when this is tiny (< 1e-8).
        """
        total = 0.0
        edge = 0.0
        for phi in (self.phi_plus, self.phi_minus):
            dens = np.abs(phi.values) ** p * phi.grid.weights()
            total += float(dens.sum())
            interior = dens[(slice(1, -1),) * phi.grid.dim]
            edge += float(dens.sum() - interior.sum())
        return edge / total if total > 0 else 0.0


def pair_from_fields(phi_plus: PlaneField, phi_minus: PlaneField, p: float) -> ProfilePair:
    """Record the pair with t = ||phi_minus||_p / ||phi_plus||_p."""
    plus_norm = lebesgue_norm(phi_plus, p)
    minus_norm = lebesgue_norm(phi_minus, p)
    t = minus_norm / plus_norm if plus_norm > 0 else 0.0
    return ProfilePair(phi_plus, phi_minus, t)


def conjugate_pair(phi_plus: PlaneField, t: float) -> ProfilePair:
    """Pair phi_plus with t times its reflected conjugate.

    phi_minus(xi) = t * conj(phi_plus(-xi)) on the (symmetric) lattice, so
    ||phi_minus||_p = t ||phi_plus||_p exactly and the extension moduli obey
    |E_P phi_minus(x_1, x')| = t |E_P phi_plus(-x_1, x')| pointwise.
    """
    if not (0.0 <= t <= 1.0):
        raise ValueError(f"t must lie in [0, 1], got {t}")
    reflected = np.conj(np.flip(phi_plus.values))
    return ProfilePair(phi_plus, phi_plus.with_values(t * reflected), float(t))


@dataclass(frozen=True)
class ConcentrationSchedule:
    """Strictly decreasing concentration scales, each at most 1/4."""

    lambdas: tuple

    def __post_init__(self) -> None:
        lambdas = tuple(float(v) for v in self.lambdas)
        object.__setattr__(self, "lambdas", lambdas)
        if not lambdas:
            raise ValueError("schedule must be nonempty")
        if any(v <= 0 or v > MAX_SCHEDULE_LAMBDA for v in lambdas):
            raise ValueError(f"scales must lie in (0, {MAX_SCHEDULE_LAMBDA}]")
        if any(b >= a for a, b in zip(lambdas, lambdas[1:])):
            raise ValueError("scales must be strictly decreasing")

    def check_support(self, plane_grid: UniformGrid) -> None:
        """The rescaled profile support lam * halfwidth must fit inside |omega'| < 1/2."""
        worst = max(self.lambdas) * max(plane_grid.halfwidths)
        if worst >= 0.5:
            raise ValueError(
                f"lam * plane-halfwidth = {worst} >= 1/2; profile support leaves the cap"
            )


def _interpolators(pair: ProfilePair):
    axes = pair.grid.axes
    if pair.d == 1:
        x = axes[0]
        return tuple(
            CubicSpline(x, phi.values, extrapolate=False)
            for phi in (pair.phi_plus, pair.phi_minus)
        )
    return tuple(
        RegularGridInterpolator(axes, phi.values, method="cubic", bounds_error=False, fill_value=0.0)
        for phi in (pair.phi_plus, pair.phi_minus)
    )


def build_concentrated(pair: ProfilePair, lam: float, grid: SphereGrid, p: float) -> SphereField:
    """Sample the concentrated pair at scale lam on a sphere grid.

    Profile values off the plane lattice come from cubic interpolation; points
    outside the plane box and the equator omega_1 = 0 contribute zero.
    Raises when the grid resolves the concentration cap with fewer than 8
    nodes per hemisphere.
    """
    if not (0 < lam <= MAX_SCHEDULE_LAMBDA):
        raise ValueError(f"lam must lie in (0, {MAX_SCHEDULE_LAMBDA}], got {lam}")
    if math.isinf(p) or p < 1:
        raise ValueError(f"p must be finite and >= 1, got {p}")
    if grid.d != pair.d:
        raise ValueError("sphere dimension must match the plane profile dimension")

    nodes = grid.nodes
    perp = nodes[:, 1:]
    perp_norm = np.linalg.norm(perp, axis=1)
    pole = nodes[:, 0]
    cap_nodes = int(np.sum((pole > 0) & (perp_norm <= lam)))
    if cap_nodes < MIN_CAP_NODES:
        raise ValueError(
            f"only {cap_nodes} nodes inside the concentration cap of radius {lam}; "
            f"need >= {MIN_CAP_NODES} (raise the grid resolution)"
        )

    interp_plus, interp_minus = _interpolators(pair)
    values = np.zeros(grid.size, dtype=complex)
    support = perp_norm < 0.5
    scale = lam ** (-pair.d / p)
    for sign, interp in ((1.0, interp_plus), (-1.0, interp_minus)):
        mask = (sign * pole > 0) & support
        if not np.any(mask):
            continue
        xi = perp[mask] / lam
        sampled = interp(xi[:, 0]) if pair.d == 1 else interp(xi)
        values[mask] = scale * np.nan_to_num(sampled)
    return SphereField(grid, values)


def _resolution_for(lam: float, box_halfwidths, plane_halfwidth: float, samples_per_period: int) -> int:
    """Sphere resolution resolving the extension phases over the profile support."""
    w = plane_halfwidth
    gamma = 1.0 / math.sqrt(max(1.0 - (lam * w) ** 2, 0.25))
    r1 = box_halfwidths[0]
    rperp = max(box_halfwidths[1:])
    freq = r1 * lam * w * gamma + rperp
    n = max(samples_per_period * freq, 8.0 * math.pi / lam, 256.0)
    return int(2 * math.ceil(n / 2.0))


def _two_carrier_model(pair: ProfilePair, lam: float, box: UniformGrid, q: float) -> np.ndarray:
    """lam^{(d+2)/q} sum_{+-} e^{+-i x_1} E_P phi^{+-}(-+lam^2 x_1, lam x')."""
    ax0 = box.axes[0]
    perp_axes = [lam * ax for ax in box.axes[1:]]
    carrier = np.exp(1j * ax0).reshape((-1,) + (1,) * (box.dim - 1))
    model = carrier * extend_parab_axes(pair.phi_plus, [-(lam**2) * ax0] + perp_axes)
    if np.any(pair.phi_minus.values):
        model = model + np.conj(carrier) * extend_parab_axes(
            pair.phi_minus, [(lam**2) * ax0] + perp_axes
        )
    return lam ** ((pair.d + 2) / q) * model


def sphere_parab_residual(
    pair: ProfilePair,
    lam: float,
    box: UniformGrid,
    p: float,
    q: float,
    sphere_resolution: int | None = None,
    samples_per_period: int = 8,
) -> float:
    """Relative L^q(box) distance between the extension of the concentrated
    pair and its two-carrier parabolic model at scale lam."""
    if pair.is_zero():
        raise ValueError("degenerate pair: both profiles vanish")
    if box.dim != pair.d + 1:
        raise ValueError("box dimension must be d+1")
    if sphere_resolution is None:
        sphere_resolution = _resolution_for(
            lam, box.halfwidths, max(pair.grid.halfwidths), samples_per_period
        )
    grid = make_sphere_grid(pair.d, sphere_resolution)
    g = build_concentrated(pair, lam, grid, p)
    u = extend_sphere(g, box)
    model = _two_carrier_model(pair, lam, box, q)
    diff = SpacetimeField(box, u.values - model)
    return lebesgue_norm(diff, q) / lebesgue_norm(u, q)


@dataclass(frozen=True)
class AntipodalLimitReport:
    """Finite-scale data for the concentration limit of the extension norm."""

    lambdas: tuple
    lhs: tuple  # ||E g_lam||_q over the rescaled spacetime box, per scale
    rhs_theta_avg: float  # circle average of the two-profile interference norm
    rhs_factored: float  # ||E_P phi_plus||_q * Phi_q(t), exact for conjugate pairs
    beta_bound: float  # beta * (sum ||phi||_p^p)^{1/p} * (pair parabolic ratio)
    tail_bound: float  # q-mass share in the outer 10% frame of the box (truncation diagnostic)
    sphere_resolutions: tuple

    def to_json_dict(self) -> dict:
        return {
            "lambdas": list(self.lambdas),
            "lhs": list(self.lhs),
            "rhs_theta_avg": self.rhs_theta_avg,
            "rhs_factored": self.rhs_factored,
            "beta_bound": self.beta_bound,
            "tail_bound": self.tail_bound,
        }


def _frame_mass_fraction(box: UniformGrid, values: np.ndarray, q: float, margin: float = 0.1) -> float:
    """Share of the q-power mass in the outer ``margin`` frame of the box.

    A truncation diagnostic: for decaying integrands a small frame share
    indicates the box captures the norm; it is not a rigorous tail bound.
    """
    weights = box.weights()
    density = weights * np.abs(values) ** q
    total = float(density.sum())
    if total == 0.0:
        return 0.0
    interior = density
    for a, (ax, r) in enumerate(zip(box.axes, box.halfwidths)):
        inside = np.abs(ax) <= (1.0 - margin) * r
        shape = [1] * box.dim
        shape[a] = ax.size
        interior = interior * inside.reshape(shape)
    return (total - float(interior.sum())) / total


def _beat_box(lam: float, ybox: UniformGrid) -> UniformGrid:
    """Spacetime box whose image under y = (lam^2 x_1, lam x') is ybox.

    The x_1 spacing is the carrier-commensurate BEAT_STEP; the transverse
    lattice is the ybox lattice rescaled by 1/lam.
    """
    n_half = max(1, int(round(ybox.halfwidths[0] / (lam**2 * BEAT_STEP))))
    if 2 * n_half + 1 > (1 << 21):
        raise ValueError("scale too small: spacetime lattice would exceed 2^21 nodes per axis")
    halfwidths = [n_half * BEAT_STEP] + [r / lam for r in ybox.halfwidths[1:]]
    counts = [2 * n_half + 1] + list(ybox.counts[1:])
    return make_uniform_grid(ybox.dim, halfwidths, counts)


def antipodal_limit_check(
    pair: ProfilePair,
    schedule: ConcentrationSchedule,
    box: UniformGrid,
    p: float,
    q: float,
    theta_nodes: int = 256,
    samples_per_period: int = 8,
) -> AntipodalLimitReport:
    """Compare ||E g_lam||_q along the schedule against its concentration limit.

    ``box`` is the parabolic-variable domain: the right-hand sides integrate
    the parabolic extensions over it, and each scale's spacetime norm is taken
    over its preimage under the rescaling y = (lam^2 x_1, lam x').  Exponents
    must lie on the scaling line, where the rescaling Jacobian cancels the
    concentration normalization exactly.
    """
    d = pair.d
    target_q = scaling_line_q(p, d)
    if not math.isfinite(target_q) or abs(q - target_q) > 1e-9 * max(1.0, target_q):
        raise ValueError(f"(p={p}, q={q}) is off the scaling line q=(d+2)/d p' for d={d}")
    if pair.is_zero():
        raise ValueError("degenerate pair: both profiles vanish")
    if box.dim != d + 1:
        raise ValueError("box dimension must be d+1")
    schedule.check_support(pair.grid)

    # parabolic extensions on the y-box; the + profile enters reflected in y_1
    reflected_axes = [-box.axes[0]] + list(box.axes[1:])
    plus_reflected = extend_parab_axes(pair.phi_plus, reflected_axes)
    minus = extend_parab_axes(pair.phi_minus, box.axes)

    # theta average of || e^{i theta} A - B ||_q^q over the carrier phase
    weights = box.weights()
    mod_sq = np.abs(plus_reflected) ** 2 + np.abs(minus) ** 2
    cross = plus_reflected * np.conj(minus)
    theta = 2.0 * math.pi * np.arange(theta_nodes) / theta_nodes
    powers = np.empty(theta_nodes)
    for i, th in enumerate(theta):
        interference = np.maximum(mod_sq - 2.0 * np.real(np.exp(1j * th) * cross), 0.0)
        powers[i] = float(np.sum(weights * interference ** (q / 2.0)))
    rhs_theta_avg = float(np.mean(powers)) ** (1.0 / q)

    plus_norm_q = float(np.sum(weights * np.abs(plus_reflected) ** q)) ** (1.0 / q)
    rhs_factored = plus_norm_q * circle_average_phi(pair.t, q)

    plus_norm_p = lebesgue_norm(pair.phi_plus, p)
    pair_power = norm_power(pair.phi_plus, p) + norm_power(pair.phi_minus, p)
    beta_bound = beta(p, q) * pair_power ** (1.0 / p) * (plus_norm_q / plus_norm_p)

    tail = _frame_mass_fraction(box, plus_reflected, q)

    lhs = []
    resolutions = []
    for lam in schedule.lambdas:
        xbox = _beat_box(lam, box)
        resolution = _resolution_for(
            lam, xbox.halfwidths, max(pair.grid.halfwidths), samples_per_period
        )
        grid = make_sphere_grid(d, resolution)
        g = build_concentrated(pair, lam, grid, p)
        lhs.append(lebesgue_norm(extend_sphere(g, xbox), q))
        resolutions.append(resolution)

    return AntipodalLimitReport(
        lambdas=tuple(schedule.lambdas),
        lhs=tuple(lhs),
        rhs_theta_avg=rhs_theta_avg,
        rhs_factored=rhs_factored,
        beta_bound=beta_bound,
        tail_bound=tail,
        sphere_resolutions=tuple(resolutions),
    )
