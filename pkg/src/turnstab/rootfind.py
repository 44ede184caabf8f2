"""Bracketed and guarded scalar root finding.

Both lobe modules reduce their existence/uniqueness lemmas to sign-change
brackets on subintervals of (2(n-1)pi, 2n*pi); the boundary functions have
poles adjacent to those brackets, so a guaranteed-bracketing Brent hybrid
is used rather than pure Newton.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import Diverged, MaxIterations, NoSignChange

# Brackets touching a 2*k*pi singularity are shrunk inward by this much.
ENDPOINT_SHRINK = 1e-9 * 2.0 * math.pi

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class Bracket:
    """A sign-change interval [lo, hi] with cached endpoint values."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise NoSignChange(f"empty bracket [{self.lo}, {self.hi}]")
        if not (math.isfinite(self.f_lo) and math.isfinite(self.f_hi)):
            raise NoSignChange("non-finite endpoint value")
        if self.f_lo == 0.0 or self.f_hi == 0.0:
            return  # exact root at an endpoint is acceptable
        if (self.f_lo > 0.0) == (self.f_hi > 0.0):
            raise NoSignChange(
                f"f({self.lo}) = {self.f_lo} and f({self.hi}) = {self.f_hi} "
                "have the same sign"
            )


def bracket(f: Callable[[float], float], lo: float, hi: float) -> Bracket:
    """Evaluate f at the endpoints and build a validated Bracket."""
    return Bracket(lo, hi, f(lo), f(hi))


def solve_bracketed(
    f: Callable[[float], float],
    brk: Bracket,
    tol_x: float | None = None,
    tol_f: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Brent's method (inverse quadratic / secant / bisection hybrid).

    Returns a root inside [brk.lo, brk.hi] with |f(root)| <= tol_f or
    bracket width <= tol_x.  Deterministic for identical inputs.
    """
    if tol_x is None:
        tol_x = 1e-12 * max(1.0, abs(brk.hi))

    a, b = brk.lo, brk.hi
    fa, fb = brk.f_lo, brk.f_hi
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b

    c, fc = a, fa
    d = e = b - a

    for _ in range(max_iter):
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = 2.0 * _EPS * abs(b) + tol_x
        m = 0.5 * (c - b)
        if abs(m) <= tol or abs(fb) <= tol_f:
            return b
        if abs(e) < tol or abs(fa) <= abs(fb):
            d = e = m
        else:
            s = fb / fa
            if a == c:
                # secant
                p = 2.0 * m * s
                qd = 1.0 - s
            else:
                # inverse quadratic interpolation
                qd = fa / fc
                r = fb / fc
                p = s * (2.0 * m * qd * (qd - r) - (b - a) * (r - 1.0))
                qd = (qd - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                qd = -qd
            else:
                p = -p
            if 2.0 * p < min(3.0 * m * qd - abs(tol * qd), abs(e * qd)):
                e = d
                d = p / qd
            else:
                d = e = m
        a, fa = b, fb
        b += d if abs(d) > tol else math.copysign(tol, m)
        fb = f(b)
        if fb == 0.0:
            return b
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            d = e = b - a

    raise MaxIterations(f"no convergence in {max_iter} iterations on [{brk.lo}, {brk.hi}]")


def refine_open(
    f: Callable[[float], float],
    seed: float,
    tol: float = 1e-12,
    guard: tuple[float, float] | None = None,
    max_iter: int = 100,
) -> float:
    """Newton iteration (finite-difference slope, secant fallback) near a simple root.

    Iterates are confined to `guard` (default: seed +/- max(1, |seed|));
    leaving it raises Diverged.
    """
    if guard is None:
        half = max(1.0, abs(seed))
        guard = (seed - half, seed + half)
    lo, hi = guard

    x = float(seed)
    fx = f(x)
    x_prev, f_prev = x, fx
    for _ in range(max_iter):
        if abs(fx) <= tol:
            return x
        h = max(abs(x), 1.0) * 1e-7
        dfdx = (f(x + h) - f(x - h)) / (2.0 * h)
        if dfdx != 0.0 and math.isfinite(dfdx):
            step = -fx / dfdx
        elif fx != f_prev:
            step = -fx * (x - x_prev) / (fx - f_prev)  # secant fallback
        else:
            raise Diverged(f"flat function near x={x}")
        x_prev, f_prev = x, fx
        x = x + step
        if not (lo <= x <= hi) or not math.isfinite(x):
            raise Diverged(f"iterate {x} left guard interval [{lo}, {hi}]")
        fx = f(x)
    raise Diverged(f"|f| = {abs(fx)} > {tol} after {max_iter} iterations")
