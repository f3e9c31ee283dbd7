"""Lebesgue exponent bookkeeping for the sphere-to-spacetime extension problem.

The admissible exponent pairs live on or below the parabolic scaling line
``q = (d+2)/d * p'``; several derived exponents (the conjugate ``p'``, the
larger of ``p`` and ``p'``, the larger of ``p`` and 2) recur throughout the
package and are collected here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SCALING_LINE_TOL = 1e-12


def conjugate_exponent(p: float) -> float:
    """Holder conjugate p' = p/(p-1), with 1 and infinity exchanged."""
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    if p <= 0:
        raise ValueError(f"exponent must be positive, got {p}")
    return p / (p - 1.0)


def scaling_line_q(p: float, d: int) -> float:
    """Spacetime exponent on the parabolic scaling line, q = (d+2)/d * p'."""
    return (d + 2) / d * conjugate_exponent(p)


@dataclass(frozen=True)
class ExponentPair:
    """An admissible triple (d, p, q): L^p on S^d mapped into L^q on R^{d+1}."""

    d: int
    p: float
    q: float

    def __post_init__(self) -> None:
        if self.d not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.d}")
        if not (self.p > 1):
            raise ValueError(f"p must satisfy 1 < p <= inf, got {self.p}")
        if not (self.q > self.p or math.isinf(self.q)):
            raise ValueError(f"q must satisfy p < q <= inf, got q={self.q}")

    def pprime(self) -> float:
        return conjugate_exponent(self.p)

    def qprime(self) -> float:
        return conjugate_exponent(self.q)

    def on_scaling_line(self, tol: float = SCALING_LINE_TOL) -> bool:
        if math.isinf(self.p):
            target = (self.d + 2) / self.d
            return abs(self.q - target) <= tol * max(1.0, target)
        target = scaling_line_q(self.p, self.d)
        if math.isinf(target) or math.isinf(self.q):
            return math.isinf(target) and math.isinf(self.q)
        return abs(self.q - target) <= tol * max(1.0, abs(target))

    def ptilde(self) -> float:
        """max{p, p'}."""
        return max(self.p, self.pprime())

    def r(self) -> float:
        """max{p, 2}."""
        return max(self.p, 2.0)
