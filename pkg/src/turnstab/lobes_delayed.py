"""Stability boundary for the delayed spindle-speed control.

The purely imaginary characteristic roots i*beta of

    P(lambda) + delta*(h1 + q/(lambda*e^lambda))*(1 - e^(-lambda)) = 0,
    P(lambda) = lambda^2 + xi*lambda + delta,

admit the closed-form parameterization (h1, delta)(beta).  delta > 0 holds
on a union of open beta-subintervals of (2(n-1)pi, 2n*pi) whose endpoints
are isolated zeros of two transcendental functions:

    zero of  xi*(1-cos b) + b*sin b          -> beta_star (one per lobe)
    zeros of 2q*cos b*(1-cos b) + b*sin b    -> tilde_betas (one or three,
                                                depending on q vs q_threshold)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .branch import BoundaryBranch, chebyshev_nodes
from .errors import DegenerateTangency, DomainError, PoleAt, UnsupportedParameters
from .rootfind import ENDPOINT_SHRINK, bracket, solve_bracketed

TWO_PI = 2.0 * math.pi

#: relative half-width of the excluded band around q_threshold
THRESHOLD_RTOL = 1e-8

#: cos(beta) at the interior extremum separating tilde_beta_{n,2} and _{n,3}
_COS_EXTREMUM = (math.sqrt(5.0) - 1.0) / 2.0

#: multiplier in the three-zero condition q >= beta_1 * this
_THRESHOLD_FACTOR = math.sqrt(2.0 * math.sqrt(5.0) - 2.0) / (4.0 * math.sqrt(5.0) - 8.0)


def xi_crossing_fn(beta: float, xi: float) -> float:
    """xi*(1 - cos(beta)) + beta*sin(beta); zero at beta_star."""
    return xi * (1.0 - math.cos(beta)) + beta * math.sin(beta)


def delta_denominator_fn(beta: float, q: float) -> float:
    """2q*cos(beta)*(1 - cos(beta)) + beta*sin(beta); zeros at tilde_betas."""
    c = math.cos(beta)
    return 2.0 * q * c * (1.0 - c) + beta * math.sin(beta)


def _check_nq(n: int, *positives: tuple[str, float]) -> None:
    if not (isinstance(n, int) and n >= 1):
        raise DomainError(f"lobe index n must be a positive integer, got {n!r}")
    for name, v in positives:
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be positive, got {v!r}")


def beta_star(xi: float, n: int) -> float:
    """Unique zero of xi*(1-cos b)+b*sin b in ((2n-1)pi, 2n*pi)."""
    _check_nq(n, ("xi", xi))
    lo = (2 * n - 1) * math.pi
    hi = 2 * n * math.pi - ENDPOINT_SHRINK
    return solve_bracketed(lambda b: xi_crossing_fn(b, xi), bracket(lambda b: xi_crossing_fn(b, xi), lo, hi))


def q_threshold(n: int) -> float:
    """Smallest q for which the lobe-n denominator has three zeros."""
    _check_nq(n)
    beta1 = 2 * n * math.pi - math.acos(_COS_EXTREMUM)
    return beta1 * _THRESHOLD_FACTOR


def tilde_betas(q: float, n: int) -> list[float]:
    """Zeros of 2q*cos(b)*(1-cos(b))+b*sin(b) in (2(n-1)pi, 2n*pi), ascending.

    One zero below (2n-1)pi always; two more in ((2n-1/2)pi, 2n*pi) when
    q exceeds q_threshold(n).  Raises DegenerateTangency within the
    relative band THRESHOLD_RTOL of the threshold, where the upper pair
    merges and the count is ill-conditioned.
    """
    _check_nq(n, ("q", q))
    f = lambda b: delta_denominator_fn(b, q)

    first = solve_bracketed(f, bracket(f, (2 * n - 1.5) * math.pi, (2 * n - 1) * math.pi))

    q_th = q_threshold(n)
    if abs(q - q_th) < THRESHOLD_RTOL * q_th:
        raise DegenerateTangency(
            f"q={q} within {THRESHOLD_RTOL:g} (rel.) of the three-zero threshold {q_th}"
        )
    if q < q_th:
        return [first]

    beta1 = 2 * n * math.pi - math.acos(_COS_EXTREMUM)  # interior extremum
    second = solve_bracketed(f, bracket(f, (2 * n - 0.5) * math.pi + ENDPOINT_SHRINK, beta1))
    third = solve_bracketed(f, bracket(f, beta1, 2 * n * math.pi - ENDPOINT_SHRINK))
    return [first, second, third]


def h1_delta_of_beta(beta: float, xi: float, q: float) -> tuple[float, float]:
    """Closed-form (h1, delta) putting a root at lambda = i*beta.

    Undefined at zeros of either denominator and at beta = 2k*pi.
    """
    if not (math.isfinite(beta) and beta != 0.0):
        raise DomainError(f"beta must be finite and nonzero, got {beta!r}")
    b = abs(beta)  # the pair is even in beta
    s, c = math.sin(b), math.cos(b)
    if abs(b / TWO_PI - round(b / TWO_PI)) * TWO_PI < 1e-9:
        raise PoleAt(beta, "beta = 2k*pi")

    den_h1 = xi * b * (1.0 - c) + b * b * s
    den_delta = 2.0 * q * c * (1.0 - c) + b * s
    # generic magnitudes: den_h1 ~ b^2*min(b,1), den_delta ~ b*min(b,1),
    # so the pole guards stay quiet on the regular beta -> 0 limit
    if abs(den_h1) < 1e-13 * b * b * min(b, 1.0):
        raise PoleAt(beta, "h1 denominator vanishes")
    if abs(den_delta) < 1e-13 * b * min(b, 1.0):
        raise PoleAt(beta, "delta denominator vanishes")

    h1 = (q * b * (1.0 - c) * (1.0 + 2.0 * c) - xi * b + q * xi * s * (1.0 - 2.0 * c)) / den_h1
    delta = (xi * b * b * (1.0 - c) + b ** 3 * s) / den_delta
    return h1, delta


def positive_delta_intervals(xi: float, q: float, n: int) -> list[tuple[float, float]]:
    """Open beta-intervals of (2(n-1)pi, 2n*pi) where delta(beta) > 0."""
    _check_nq(n, ("xi", xi), ("q", q))
    if abs(xi - 2.0 * q) < 1e-12:
        raise UnsupportedParameters(f"xi = 2q (xi={xi}, q={q}) is excluded")
    lo, hi = 2 * (n - 1) * math.pi, 2 * n * math.pi
    bs = beta_star(xi, n)
    tb = tilde_betas(q, n)
    if len(tb) == 1:
        return [(lo, tb[0]), (bs, hi)]
    t1, t2, t3 = tb
    if bs <= t2:
        return [(lo, t1), (bs, t2), (t3, hi)]
    if bs <= t3:
        return [(lo, t1), (t2, bs), (t3, hi)]
    return [(lo, t1), (t2, t3), (bs, hi)]


def beta_bounds_delayed(h1: float, delta: float, xi: float, q: float) -> tuple[float, float]:
    """Bounds on beta^2 for any purely imaginary root i*beta."""
    for name, v in (("delta", delta), ("xi", xi), ("q", q)):
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v!r}")
    if h1 == 0.0:
        return 0.0, 9.0 * delta * q / (8.0 * xi)
    a = abs(h1)
    plus = delta * a + 2.0 * delta * h1 * h1 + 2.0 * q * xi
    upper = (plus + math.sqrt(plus * plus + 8.0 * q * q * delta * a)) / (2.0 * a)
    minus = delta * a - 2.0 * delta * h1 * h1 - 2.0 * q * xi
    disc = minus * minus - 4.0 * q * q * delta * a
    lower = max(0.0, (minus + math.sqrt(disc)) / (2.0 * a)) if disc >= 0.0 else 0.0
    return lower, upper


def frequency_estimate(beta: float) -> float:
    """Vibration frequency estimate beta/(2*pi) at a boundary point."""
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    return beta / TWO_PI


def sample_branches_delayed(
    xi: float, q: float, n: int, samples_per_interval: int = 256
) -> list[BoundaryBranch]:
    """One sampled branch per positive-delta interval of lobe n."""
    branches = []
    for a, b in positive_delta_intervals(xi, q, n):
        points = []
        for beta in chebyshev_nodes(a, b, samples_per_interval):
            h1, delta = h1_delta_of_beta(beta, xi, q)
            points.append((beta, delta, h1))
        branches.append(BoundaryBranch("delayed", n, (a, b), points))
    return branches
