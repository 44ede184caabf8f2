"""Sampled stability-boundary branches."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError


@dataclass(frozen=True)
class BoundaryBranch:
    """A parametric boundary curve beta -> (delta, h) over one beta-interval."""

    variant: str                 # "delayed" | "instant"
    n: int                       # lobe index
    beta_interval: tuple[float, float]
    points: list[tuple[float, float, float]] = field(default_factory=list)
    # each point is (beta, delta, h)

    def __post_init__(self):
        if self.variant not in ("delayed", "instant"):
            raise DomainError(f"unknown variant {self.variant!r}")
        betas = [p[0] for p in self.points]
        if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
            raise DomainError("branch points must be strictly increasing in beta")


def chebyshev_nodes(a: float, b: float, count: int) -> list[float]:
    """`count` strictly interior nodes of (a, b), clustered at the endpoints.

    Boundary curves have vertical asymptotes at interval endpoints, so
    sampling density grows like 1/distance-to-endpoint there.
    """
    if not (b > a and count >= 1):
        raise DomainError(f"bad sampling request: interval ({a}, {b}), count {count}")
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return [
        mid + half * math.cos(math.pi * (2 * i + 1) / (2 * count))
        for i in range(count - 1, -1, -1)
    ]
