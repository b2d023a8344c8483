"""Closed-form mode-III references used to check simulated fields."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class StripProblem:
    """Steadily moving crack in a strip loaded by a total displacement ``w0``.

    ``L`` enters the steady-state formula as a pure number, so lengths are
    understood in units of the strip half-width.
    """

    L: float
    w0: float
    mu: float
    v: float
    beta: float = field(init=False)

    def __post_init__(self):
        if not 0 <= self.v < 1:
            raise ValueError(f"relative speed must lie in [0, 1), got {self.v}")
        if self.L <= 0 or self.mu <= 0:
            raise ValueError("L and mu must be positive")
        object.__setattr__(self, "beta", math.sqrt(1.0 - self.v**2))


def steady_strip_sif(p: StripProblem) -> float:
    """Steady-state stress intensity factor (negative for positive ``w0``)."""
    b = p.beta
    return -p.mu * p.w0 * math.sqrt(2.0 * b / (p.L * (2.0 * b * p.L + 1.0)))


def near_tip_displacement(K, mu, r, phi):
    return (2.0 * K / mu) * math.sqrt(r / (2.0 * math.pi)) * math.sin(0.5 * phi)


def cod_from_sif(K, mu, r):
    """Crack opening displacement at distance ``r`` behind the tip."""
    if r <= 0:
        raise ValueError("r must be positive")
    return (4.0 * K / mu) * math.sqrt(r / (2.0 * math.pi))
