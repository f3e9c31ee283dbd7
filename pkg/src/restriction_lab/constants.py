"""Scaling-line exponents and the antipodal comparison constants alpha and beta.

``alpha(p, q)`` maximizes, over the relative size t in [0, 1] of two
antipodally concentrating profiles, the ratio between the circle-averaged
interference norm of their extensions and the L^p size of the pair.  ``beta``
is the closed Gamma-function expression that bounds alpha from above, with
equality exactly when p >= 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exponents import conjugate_exponent, scaling_line_q

#: quadrature nodes for the circle average; the integrand loses smoothness as
#: t -> 1 (it behaves like |cos(theta/2)|^q near theta = pi), so the node
#: count is raised close to the endpoint.
PHI_NODES_SMOOTH = 4096
PHI_NODES_ENDPOINT = 65536
_ENDPOINT_T = 0.99

ALPHA_SCALING_TOL = 1e-9

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def scaling_exponents(p: float, d: int) -> tuple:
    """(q, ptilde, r) on the parabolic scaling line for L^p(S^d).

    q = (d+2)/d * p/(p-1), ptilde = max{p, p'}, r = max{p, 2};
    requires 1 < p < 2(d+1)/d.
    """
    if d not in (1, 2):
        raise ValueError(f"dimension must be 1 or 2, got {d}")
    upper = 2.0 * (d + 1) / d
    if not (1.0 < p < upper):
        raise ValueError(f"p must lie in (1, {upper}) for d={d}, got {p}")
    q = scaling_line_q(p, d)
    return q, max(p, conjugate_exponent(p)), max(p, 2.0)


def _phi_node_count(t: float) -> int:
    return PHI_NODES_ENDPOINT if t >= _ENDPOINT_T else PHI_NODES_SMOOTH


def circle_average_phi(t: float, q: float, nodes: int | None = None) -> float:
    """q-mean of |1 + t e^{i theta}| over the unit circle.

    Periodic trapezoid quadrature; the default node count follows the
    endpoint rule documented at the top of the module.
    """
    t = float(t)
    q = float(q)
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if nodes is None:
        nodes = _phi_node_count(t)
    if nodes < 2:
        raise ValueError("need at least 2 quadrature nodes")
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    # |1 + t e^{i theta}|^2 = 1 + 2 t cos(theta) + t^2, kept in real arithmetic
    modulus_sq = np.maximum(1.0 + 2.0 * t * np.cos(theta) + t * t, 0.0)
    mean = float(np.mean(modulus_sq ** (q / 2.0)))
    return mean ** (1.0 / q)


def circle_average_phi_endpoint(q: float) -> float:
    """Closed form of the circle average at t = 1 via the Wallis integral:
    2 * (Gamma((q+1)/2) / (sqrt(pi) * Gamma((q+2)/2)))^(1/q)."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    return 2.0 * (math.gamma((q + 1.0) / 2.0) / (math.sqrt(math.pi) * math.gamma((q + 2.0) / 2.0))) ** (1.0 / q)


def beta(p: float, q: float) -> float:
    """Gamma-function comparison constant 2^(1/r') * (Gamma((q+1)/2)/(sqrt(pi) Gamma((q+2)/2)))^(1/q),
    with r = max{p, 2}."""
    if p < 1 or q < 1:
        raise ValueError("p and q must be >= 1")
    r = max(p, 2.0)
    rprime = conjugate_exponent(r)
    wallis = math.gamma((q + 1.0) / 2.0) / (math.sqrt(math.pi) * math.gamma((q + 2.0) / 2.0))
    return 2.0 ** (1.0 / rprime) * wallis ** (1.0 / q)


@dataclass(frozen=True)
class AlphaResult:
    """Outcome of the alpha maximization over t in [0, 1]."""

    value: float
    argmax_t: float
    samples: list = field(repr=False)


def _alpha_objective(t: np.ndarray, p: float, q: float) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    num = np.array([circle_average_phi(ti, q) for ti in t])
    return num / (1.0 + t**p) ** (1.0 / p)


def _check_scaling_line(p: float, q: float) -> None:
    """alpha is defined on the scaling line; accept (p, q) matching d = 1 or 2.

    The degenerate endpoint p = 1 (whose scaling-line q is infinite) accepts
    any finite q > 1.
    """
    if p == 1.0:
        if q > 1.0 and math.isfinite(q):
            return
        raise ValueError("for p = 1 any finite q > 1 is accepted")
    for d in (1, 2):
        target = scaling_line_q(p, d)
        if abs(q - target) <= ALPHA_SCALING_TOL * max(1.0, target):
            if p >= 2.0 * (d + 1) / d:
                raise ValueError(f"p must lie in [1, {2.0 * (d + 1) / d}) for d={d}, got {p}")
            return
    raise ValueError(
        f"(p={p}, q={q}) is not on the scaling line q = (d+2)/d * p' for d in {{1, 2}}"
    )


def alpha(p: float, q: float, t_tol: float = 1e-10, scan_points: int = 2001) -> AlphaResult:
    """Maximize the antipodal-pair ratio over the relative profile size t in [0, 1].

    A uniform scan guards against non-unimodality, then golden-section search
    refines the best bracket to width ``t_tol``; the endpoints t = 0, 1 are
    always evaluated as candidates.  Only scaling-line (p, q) pairs are
    accepted.
    """
    if p < 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    _check_scaling_line(p, q)

    t_grid = np.linspace(0.0, 1.0, scan_points)
    ratios = _alpha_objective(t_grid, p, q)
    samples = list(zip(t_grid.tolist(), ratios.tolist()))
    k = int(np.argmax(ratios))

    lo = t_grid[max(k - 1, 0)]
    hi = t_grid[min(k + 1, scan_points - 1)]
    a, b = lo, hi
    c = b - _INV_GOLDEN * (b - a)
    d_ = a + _INV_GOLDEN * (b - a)
    fc = float(_alpha_objective(c, p, q)[0])
    fd = float(_alpha_objective(d_, p, q)[0])
    while b - a > t_tol:
        if fc >= fd:
            b, d_, fd = d_, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = float(_alpha_objective(c, p, q)[0])
        else:
            a, c, fc = c, d_, fd
            d_ = a + _INV_GOLDEN * (b - a)
            fd = float(_alpha_objective(d_, p, q)[0])
    t_star = c if fc >= fd else d_
    f_star = max(fc, fd)

    # endpoint candidates keep boundary maxima exact
    for t_cand in (0.0, 1.0):
        f_cand = float(_alpha_objective(t_cand, p, q)[0])
        if f_cand >= f_star:
            t_star, f_star = t_cand, f_cand

    return AlphaResult(value=float(f_star), argmax_t=float(t_star), samples=samples)
