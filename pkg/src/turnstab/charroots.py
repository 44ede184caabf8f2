"""Characteristic quasipolynomial evaluation, root counting and verdicts.

The delay-coupled factor of each characteristic equation,

    delayed:  F(l) = P(l) + delta*(h1 + q/(l*e^l))*(1 - e^(-l))
    instant:  F(l) = P(l) + delta*(h2 + q/l)*(1 - e^(-l))

is cleared of its pole by multiplying with l*e^l (delayed) or l (instant),
giving G(l) = l*g(l) with g entire:

    delayed:  g(l) = e^l*(P(l) + delta*h1*(1 - e^(-l))) + delta*q*phi(l)
    instant:  g(l) = P(l) + delta*h2*(1 - e^(-l)) + delta*q*phi(l)

where phi(l) = (1 - e^(-l))/l.  G(0) = 0 with G'(0) = g(0) = delta*(q+1),
so the extraneous zero of G at the origin is never a characteristic root;
counting zeros of g over a right-half-plane rectangle by the argument
principle therefore counts exactly the unstable characteristic roots.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import lobes_delayed, lobes_instant
from .errors import ContourTooClose, Diverged, DomainError

#: left edge of counting contours; excludes the cleared function's zero at 0
CONTOUR_EPS = 1e-7

#: a root with |Re| below this is treated as sitting on the stability boundary
AXIS_TOL = 1e-9

_MIN_ABS_ON_CONTOUR = 1e-9

#: leftmost real part the margin search will reach before saturating
RE_FLOOR = -200.0


@dataclass(frozen=True)
class CharParams:
    """Dimensionless coefficients of one characteristic factor."""

    variant: str    # "delayed" | "instant"
    xi: float
    delta: float
    h: float        # h1 for delayed, h2 for instant
    q: float

    def __post_init__(self):
        if self.variant not in ("delayed", "instant"):
            raise DomainError(f"unknown variant {self.variant!r}")
        for name in ("xi", "delta", "q"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive, got {v!r}")
        if not math.isfinite(self.h):
            raise DomainError(f"h must be finite, got {self.h!r}")


@dataclass(frozen=True)
class StabilityVerdict:
    unstable_count: int
    stable: bool
    margin: float                       # |Re| of the root nearest the imaginary axis
    rightmost_root: complex | None = None


def _phi(lam: complex) -> complex:
    """(1 - e^(-l))/l, entire; series branch near the removable singularity."""
    if abs(lam) < 1e-3:
        # 1 - l/2 + l^2/6 - ... - l^8 term; ~1e-28 truncation error at |l|=1e-3
        acc = 0j
        term = 1.0 + 0j
        for k in range(1, 10):
            term *= -lam / (k + 1)
            acc += term
        return 1.0 + acc
    return (1.0 - cmath.exp(-lam)) / lam


def eval_cleared(lam: complex, p: CharParams, include_delay: bool = True) -> complex:
    """g(l) = G(l)/l; entire, shares all zeros with the characteristic factor."""
    quad = lam * lam + p.xi * lam + p.delta
    delay = 1.0 - cmath.exp(-lam)
    coupling = 1.0 if include_delay else 0.0
    if p.variant == "delayed":
        return cmath.exp(lam) * (quad + coupling * p.delta * p.h * delay) \
            + coupling * p.delta * p.q * _phi(lam)
    return quad + coupling * p.delta * p.h * delay + coupling * p.delta * p.q * _phi(lam)


def eval_entire(lam: complex, p: CharParams) -> complex:
    """The cleared characteristic function G(l) = l*g(l).

    G(0) = 0 exactly and G'(0) = delta*(q+1).
    """
    return lam * eval_cleared(lam, p)


def _winding(values: list[complex]) -> float:
    total = 0.0
    for z0, z1 in zip(values, values[1:]):
        total += cmath.phase(z1 / z0)
    return total / (2.0 * math.pi)


def _trace_edge(
    f, a: complex, b: complex, fa: complex, fb: complex, out: list[complex], depth: int = 0
) -> None:
    """Append samples of f along [a, b] so successive phase steps stay < pi/2.

    Callers must pre-split edges to below the phase-aliasing length; the
    depth >= 1 floor adds one unconditional halving as a safety margin.
    """
    if abs(fa) < _MIN_ABS_ON_CONTOUR or abs(fb) < _MIN_ABS_ON_CONTOUR:
        raise ContourTooClose(f"|g| < {_MIN_ABS_ON_CONTOUR} on contour near {a}..{b}")
    if abs(cmath.phase(fb / fa)) < 0.5 * math.pi and depth >= 1:
        out.append(fb)
        return
    if depth > 48:
        raise ContourTooClose(f"phase refinement exhausted between {a} and {b}")
    mid = 0.5 * (a + b)
    fm = f(mid)
    _trace_edge(f, a, mid, fa, fm, out, depth + 1)
    _trace_edge(f, mid, b, fm, fb, out, depth + 1)


def count_in_rectangle(
    p: CharParams, re_lo: float, re_hi: float, omega_max: float
) -> int:
    """Zeros of g inside [re_lo, re_hi] x [-omega_max, omega_max] (argument principle)."""
    if not (re_hi > re_lo and omega_max > 0):
        raise DomainError("empty counting rectangle")
    f = lambda z: eval_cleared(z, p)
    corners = [
        complex(re_lo, -omega_max),
        complex(re_hi, -omega_max),
        complex(re_hi, omega_max),
        complex(re_lo, omega_max),
        complex(re_lo, -omega_max),
    ]
    samples = [f(corners[0])]
    for a, b in zip(corners, corners[1:]):
        # pre-split below the aliasing scale: the exponential terms turn
        # the contour phase at a rate of order 1 per unit length
        nseg = max(1, math.ceil(abs(b - a) / 0.5))
        for k in range(nseg):
            lo = a + (b - a) * (k / nseg)
            hi = a + (b - a) * ((k + 1) / nseg)
            _trace_edge(f, lo, hi, samples[-1], f(hi), samples)
    w = _winding(samples)
    count = round(w)
    if abs(w - count) > 0.25:
        raise ContourTooClose(f"non-integer winding number {w}")
    return count


def count_unstable(p: CharParams, omega_max: float, sigma_max: float) -> int:
    """Characteristic roots with Re in (CONTOUR_EPS, sigma_max), |Im| < omega_max."""
    return count_in_rectangle(p, CONTOUR_EPS, sigma_max, omega_max)


def refine_root(seed: complex, p: CharParams, tol_scale: float = 1e-12, max_iter: int = 100) -> complex:
    """Newton iteration on g from a seed near a simple root."""
    if seed == 0:
        raise DomainError("seed must be nonzero (0 is not a characteristic root)")
    guard = 1.0 + abs(seed)
    z = complex(seed)
    for _ in range(max_iter):
        gz = eval_cleared(z, p)
        target = tol_scale * (1.0 + abs(z) ** 3)
        if abs(z * gz) < target and abs(z) > AXIS_TOL:
            return z
        h = 1e-7 * max(1.0, abs(z))
        dg = (eval_cleared(z + h, p) - eval_cleared(z - h, p)) / (2.0 * h)
        if dg == 0:
            raise Diverged(f"flat derivative at {z}")
        z = z - gz / dg
        if not (abs(z - seed) <= guard and math.isfinite(z.real) and math.isfinite(z.imag)):
            raise Diverged(f"iterate {z} left the guard disc around {seed}")
    raise Diverged(f"no convergence from seed {seed}")


def default_omega_max(p: CharParams) -> float:
    """Frequency window: doubled lemma bound on |beta| for imaginary roots."""
    if p.variant == "delayed":
        _, upper = lobes_delayed.beta_bounds_delayed(p.h, p.delta, p.xi, p.q)
    elif p.h > 0:
        _, upper = lobes_instant.beta_bounds_instant(p.h, p.delta, p.xi, p.q)
    else:
        _, upper = lobes_delayed.beta_bounds_delayed(0.0, p.delta, p.xi, p.q)
    return 2.0 * math.sqrt(upper) + 1.0


def default_sigma_max(p: CharParams) -> float:
    return 5.0 * max(1.0, p.xi)


def _count_right_of(p: CharParams, sigma: float, omega_max: float, sigma_max: float) -> int:
    for nudge in (0.0, 3e-7, -3e-7, 1e-6, -1e-6):
        try:
            return count_in_rectangle(p, sigma + nudge, sigma_max, omega_max)
        except ContourTooClose:
            continue
    raise ContourTooClose(f"all contours near Re={sigma} pass too close to a root")


def rightmost_real_part(
    p: CharParams, omega_max: float, sigma_max: float, tol: float = 1e-6
) -> float:
    """Real part of the rightmost root in the frequency window, by bisection.

    Searches leftward down to RE_FLOOR; returns RE_FLOOR when even that
    window holds no root, so the stability margin saturates there.
    """
    lo = -sigma_max
    hi = sigma_max
    while _count_right_of(p, lo, omega_max, sigma_max) == 0:
        if lo <= RE_FLOOR:
            return RE_FLOOR
        lo = max(2.0 * lo, RE_FLOOR)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _count_right_of(p, mid, omega_max, sigma_max) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _seed_on_line(p: CharParams, sigma: float, omega_max: float) -> complex:
    grid = 400
    best, best_abs = None, math.inf
    for i in range(grid + 1):
        w = omega_max * i / grid
        z = complex(sigma, w)
        a = abs(eval_cleared(z, p))
        if a < best_abs:
            best, best_abs = z, a
    return best


def verdict(p: CharParams, axis_tol: float = AXIS_TOL) -> StabilityVerdict:
    """Count unstable roots and locate the root nearest the imaginary axis."""
    omega_max = default_omega_max(p)
    sigma_max = default_sigma_max(p)
    count = count_unstable(p, omega_max, sigma_max)
    sigma_r = rightmost_real_part(p, omega_max, sigma_max)
    root = None
    if sigma_r > RE_FLOOR:
        try:
            root = refine_root(_seed_on_line(p, sigma_r, omega_max), p)
        except Diverged:
            pass
    margin = abs(root.real) if root is not None else abs(sigma_r)
    stable = count == 0 and margin > axis_tol
    return StabilityVerdict(
        unstable_count=count, stable=stable, margin=margin, rightmost_root=root
    )
