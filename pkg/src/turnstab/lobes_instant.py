"""Stability boundary for the instantaneous PD spindle-speed control.

Purely imaginary roots i*beta of

    P(lambda) + delta*(h2 + q/lambda)*(1 - e^(-lambda)) = 0

are parameterized by (h2, delta)(beta).  Both must be positive on the
boundary; the positivity set is bounded by beta_star (zero of delta),
tilde_beta (pole of delta changing its sign), and the zeros of h2, which
satisfy  cot(b/2) = -q/b -/+ q*sqrt(1/b^2 + 2/(q*xi) - 1/q^2).  For
xi > 2q the radicand dies at  b = q*sqrt(xi/(xi-2q)), which together with
bar_beta (solution of b*cot(b/2) = -q) decides whether a lobe carries h2
zeros at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .branch import BoundaryBranch, chebyshev_nodes
from .errors import DomainError, PoleAt, UnsupportedParameters
from .lobes_delayed import _check_nq, beta_star, xi_crossing_fn
from .rootfind import ENDPOINT_SHRINK, bracket, solve_bracketed

TWO_PI = 2.0 * math.pi


def delta_denominator_fn(beta: float, q: float) -> float:
    """2q*(1 - cos(beta)) + beta*sin(beta); zero at tilde_beta."""
    return 2.0 * q * (1.0 - math.cos(beta)) + beta * math.sin(beta)


def tilde_beta_instant(q: float, n: int) -> float:
    """Unique zero of 2q*(1-cos b)+b*sin b in ((2n-1)pi, 2n*pi)."""
    _check_nq(n, ("q", q))
    f = lambda b: delta_denominator_fn(b, q)
    return solve_bracketed(
        f, bracket(f, (2 * n - 1) * math.pi, 2 * n * math.pi - ENDPOINT_SHRINK)
    )


def half_angle_cot(beta: float) -> float:
    """F(beta) = beta*cot(beta/2), decreasing from +inf to -inf on each lobe."""
    return beta / math.tan(0.5 * beta)


def bar_beta(q: float, n: int) -> float:
    """Unique solution of beta*cot(beta/2) = -q in (2(n-1)pi, 2n*pi)."""
    _check_nq(n, ("q", q))
    f = lambda b: half_angle_cot(b) + q
    return solve_bracketed(
        f,
        bracket(
            f, 2 * (n - 1) * math.pi + ENDPOINT_SHRINK, 2 * n * math.pi - ENDPOINT_SHRINK
        ),
    )


def h2_delta_of_beta(beta: float, xi: float, q: float) -> tuple[float, float]:
    """Closed-form (h2, delta) putting a root at lambda = i*beta."""
    if not (math.isfinite(beta) and beta != 0.0):
        raise DomainError(f"beta must be finite and nonzero, got {beta!r}")
    b = abs(beta)  # the pair is even in beta
    s, c = math.sin(b), math.cos(b)
    if abs(b / TWO_PI - round(b / TWO_PI)) * TWO_PI < 1e-9:
        raise PoleAt(beta, "beta = 2k*pi")

    den_h2 = xi * b * (1.0 - c) + b * b * s
    den_delta = 2.0 * q * (1.0 - c) + b * s
    # generic magnitudes: den_h2 ~ b^2*min(b,1), den_delta ~ b*min(b,1),
    # so the pole guards stay quiet on the regular beta -> 0 limit
    if abs(den_h2) < 1e-13 * b * b * min(b, 1.0):
        raise PoleAt(beta, "h2 denominator vanishes")
    if abs(den_delta) < 1e-13 * b * min(b, 1.0):
        raise PoleAt(beta, "delta denominator vanishes")

    h2 = (q * b * (1.0 - c) - xi * b - q * xi * s) / den_h2
    delta = (xi * b * b * (1.0 - c) + b ** 3 * s) / den_delta
    return h2, delta


@dataclass(frozen=True)
class H2Zeros:
    """Zeros of h2(beta) on lobe n, with the case analysis that produced them."""

    n: int
    case: str                       # "two-zeros" | "beyond-n0" | "radius-below-window" | "bar-beta-beyond-radius"
    gamma_star: float | None = None
    gamma_tilde: float | None = None
    bar_beta: float | None = None   # xi > 2q only
    radius: float | None = None     # q*sqrt(xi/(xi-2q)), xi > 2q only
    n0: int | None = None           # xi > 2q only

    @property
    def zeros(self) -> list[float]:
        if self.gamma_star is None:
            return []
        return [self.gamma_star, self.gamma_tilde]


def _radical(beta: float, xi: float, q: float) -> float:
    # sqrt(q^2 - ((xi-2q)/xi)*beta^2); real on the whole lobe when xi < 2q
    val = q * q - (xi - 2.0 * q) / xi * beta * beta
    return math.sqrt(val) if val > 0.0 else 0.0


def _cot_branch_fn(beta: float, xi: float, q: float, sign: float) -> float:
    # F(b) - (-q + sign*sqrt(...)); diverges at the 2k*pi endpoints, so
    # endpoint-shrunk brackets cannot pick up spurious zeros there
    return half_angle_cot(beta) + q - sign * _radical(beta, xi, q)


def n0_index(xi: float, q: float) -> int:
    """Smallest n with 2n*pi >= q*sqrt(xi/(xi-2q)) (requires xi > 2q)."""
    if not xi > 2.0 * q:
        raise DomainError("n0 is defined for xi > 2q only")
    radius = q * math.sqrt(xi / (xi - 2.0 * q))
    return max(1, math.ceil(radius / TWO_PI))


def h2_zeros(xi: float, q: float, n: int) -> H2Zeros:
    """Case-tagged zeros of h2(beta) on (2(n-1)pi, 2n*pi)."""
    _check_nq(n, ("xi", xi), ("q", q))
    if abs(xi - 2.0 * q) < 1e-12:
        raise UnsupportedParameters(f"xi = 2q (xi={xi}, q={q}) is excluded")
    lo, hi = 2 * (n - 1) * math.pi, 2 * n * math.pi

    if xi < 2.0 * q:
        bs = beta_star(xi, n)
        tb = tilde_beta_instant(q, n)
        g = lambda b: _cot_branch_fn(b, xi, q, +1.0)
        h = lambda b: _cot_branch_fn(b, xi, q, -1.0)
        gamma_star = solve_bracketed(g, bracket(g, lo + ENDPOINT_SHRINK, bs))
        gamma_tilde = solve_bracketed(h, bracket(h, tb, hi - ENDPOINT_SHRINK))
        return H2Zeros(n, "two-zeros", gamma_star, gamma_tilde)

    radius = q * math.sqrt(xi / (xi - 2.0 * q))
    n0 = n0_index(xi, q)
    if n > n0:
        return H2Zeros(n, "beyond-n0", radius=radius, n0=n0)
    if radius <= (2 * n - 1) * math.pi:
        return H2Zeros(n, "radius-below-window", radius=radius, n0=n0)
    bb = bar_beta(q, n)
    if bb > radius:
        return H2Zeros(n, "bar-beta-beyond-radius", bar_beta=bb, radius=radius, n0=n0)
    g = lambda b: _cot_branch_fn(b, xi, q, +1.0)
    h = lambda b: _cot_branch_fn(b, xi, q, -1.0)
    gamma_star = solve_bracketed(g, bracket(g, lo + ENDPOINT_SHRINK, bb))
    right = min(radius, hi - ENDPOINT_SHRINK)
    gamma_tilde = solve_bracketed(h, bracket(h, bb, right)) if bb < right else bb
    return H2Zeros(n, "two-zeros", gamma_star, gamma_tilde, bar_beta=bb, radius=radius, n0=n0)


def positive_pair_intervals_instant(xi: float, q: float, n: int) -> list[tuple[float, float]]:
    """Open beta-intervals of lobe n where both delta(beta) > 0 and h2(beta) > 0."""
    _check_nq(n, ("xi", xi), ("q", q))
    if abs(xi - 2.0 * q) < 1e-12:
        raise UnsupportedParameters(f"xi = 2q (xi={xi}, q={q}) is excluded")
    hi = 2 * n * math.pi
    bs = beta_star(xi, n)
    if xi < 2.0 * q:
        z = h2_zeros(xi, q, n)
        return [(z.gamma_star, bs), (z.gamma_tilde, hi)]
    z = h2_zeros(xi, q, n)
    if z.case == "two-zeros":
        return [(z.gamma_star, z.gamma_tilde), (bs, hi)]
    return [(bs, hi)]


def beta_bounds_instant(h2: float, delta: float, xi: float, q: float) -> tuple[float, float]:
    """Bounds on beta^2 for any purely imaginary root i*beta."""
    for name, v in (("h2", h2), ("delta", delta), ("xi", xi), ("q", q)):
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v!r}")
    lower = max(0.0, delta - q * xi / h2)
    mid = delta * h2 + 2.0 * delta * h2 * h2 - xi * q
    upper = (mid + math.sqrt(mid * mid + 8.0 * delta * h2 * q * q)) / (2.0 * h2)
    return lower, upper


def sample_branches_instant(
    xi: float, q: float, n: int, samples_per_interval: int = 256
) -> list[BoundaryBranch]:
    """One sampled branch per positive-(delta, h2) interval of lobe n."""
    branches = []
    for a, b in positive_pair_intervals_instant(xi, q, n):
        points = []
        for beta in chebyshev_nodes(a, b, samples_per_interval):
            h2, delta = h2_delta_of_beta(beta, xi, q)
            points.append((beta, delta, h2))
        branches.append(BoundaryBranch("instant", n, (a, b), points))
    return branches
