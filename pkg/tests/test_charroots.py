import cmath
import math

import pytest

from turnstab.charroots import (
    AXIS_TOL,
    CharParams,
    count_in_rectangle,
    count_unstable,
    default_omega_max,
    default_sigma_max,
    eval_cleared,
    eval_entire,
    refine_root,
    rightmost_real_part,
    verdict,
)
from turnstab.errors import DomainError
from turnstab.lobes_delayed import h1_delta_of_beta
from turnstab.lobes_instant import h2_delta_of_beta


def test_params_validation():
    with pytest.raises(DomainError):
        CharParams(variant="weird", xi=0.2, delta=1.0, h=0.1, q=0.8)
    with pytest.raises(DomainError):
        CharParams(variant="delayed", xi=-0.2, delta=1.0, h=0.1, q=0.8)
    with pytest.raises(DomainError):
        CharParams(variant="instant", xi=0.2, delta=1.0, h=math.nan, q=0.8)


def test_conjugate_symmetry():
    for variant, h in (("delayed", -0.3), ("instant", 0.4)):
        p = CharParams(variant=variant, xi=0.2, delta=1.5, h=h, q=0.8)
        for lam in (0.3 + 1.7j, -0.8 + 5.0j, 2.0 - 0.4j):
            a = eval_entire(lam.conjugate(), p)
            b = eval_entire(lam, p).conjugate()
            assert cmath.isclose(a, b, rel_tol=1e-14)


def test_phi_series_matches_direct_branch():
    p = CharParams(variant="instant", xi=0.2, delta=1.5, h=0.4, q=0.8)
    # straddle the series switchover radius of the removable singularity
    for lam in (9.99e-4 + 0j, 1.001e-3 + 0j, 7e-4 + 7e-4j, 1e-3 + 1e-3j):
        direct = (
            lam * lam + p.xi * lam + p.delta
            + p.delta * p.h * (1.0 - cmath.exp(-lam))
            + p.delta * p.q * (1.0 - cmath.exp(-lam)) / lam
        )
        assert cmath.isclose(eval_cleared(lam, p), direct, rel_tol=1e-10)


def test_origin_is_removed():
    p = CharParams(variant="delayed", xi=0.2, delta=1.5, h=-0.3, q=0.8)
    assert eval_entire(0.0, p) == 0.0
    # the entire function's derivative at 0 equals delta*(q+1)
    h = 1e-6
    fd = (eval_entire(h, p) - eval_entire(-h, p)) / (2.0 * h)
    assert abs(fd - p.delta * (p.q + 1.0)) < 1e-6 * p.delta * (p.q + 1.0)


def test_delay_free_factor_counts_zero():
    # with the delay coupling off, the factor reduces to the damped quadratic
    # (times e^l for the delayed clearing), which has no right-half-plane zeros
    for variant in ("delayed", "instant"):
        p = CharParams(variant=variant, xi=0.2, delta=1.5, h=0.4, q=0.8)
        f = lambda z: eval_cleared(z, p, include_delay=False)
        quad = lambda z: z * z + p.xi * z + p.delta
        for lam in (0.5 + 1.0j, 2.0 - 3.0j):
            expected = quad(lam) * (cmath.exp(lam) if variant == "delayed" else 1.0)
            assert cmath.isclose(f(lam), expected, rel_tol=1e-14)


def test_count_rectangle_validation():
    p = CharParams(variant="instant", xi=0.2, delta=1.5, h=0.4, q=0.8)
    with pytest.raises(DomainError):
        count_in_rectangle(p, 1.0, 1.0, 5.0)


def test_boundary_point_refines_to_imaginary_root():
    # a point taken on a closed-form stability boundary has a root at i*beta
    beta = 4.6
    h1, delta = h1_delta_of_beta(beta, 0.2, 12.0)
    p = CharParams(variant="delayed", xi=0.2, delta=delta, h=h1, q=12.0)
    root = refine_root(complex(1e-4, beta + 1e-4), p)
    assert abs(root - complex(0.0, beta)) < 1e-8
    assert abs(eval_entire(root, p)) < 1e-10

    beta = 5.8
    h2, delta = h2_delta_of_beta(beta, 0.2, 0.8)
    p = CharParams(variant="instant", xi=0.2, delta=delta, h=h2, q=0.8)
    root = refine_root(complex(1e-4, beta + 1e-4), p)
    assert abs(root - complex(0.0, beta)) < 1e-8


def test_crossing_changes_count_by_two():
    # crossing a lobe boundary transversally in delta moves one conjugate
    # pair across the axis: the unstable count jumps by exactly 2
    beta = 4.6
    h1, delta = h1_delta_of_beta(beta, 0.2, 12.0)
    counts = []
    for d in (delta * 0.97, delta * 1.03):
        p = CharParams(variant="delayed", xi=0.2, delta=d, h=h1, q=12.0)
        counts.append(count_unstable(p, default_omega_max(p), default_sigma_max(p)))
    assert abs(counts[0] - counts[1]) == 2


def test_verdict_stable_example():
    p = CharParams(variant="instant", xi=1.62, delta=150.0, h=0.05, q=0.8)
    v = verdict(p)
    assert v.stable and v.unstable_count == 0
    assert math.isclose(v.margin, 0.458, abs_tol=5e-3)
    assert v.rightmost_root is not None
    assert abs(v.rightmost_root - complex(-0.458, 11.704)) < 5e-3


def test_verdict_unstable_example():
    p = CharParams(variant="instant", xi=1.62, delta=150.0, h=1.2, q=0.8)
    v = verdict(p)
    assert not v.stable and v.unstable_count == 6
    assert v.rightmost_root is not None and v.rightmost_root.real > 0


def test_verdict_delayed_diagonal():
    stable = CharParams(variant="delayed", xi=0.2, delta=0.005, h=0.005, q=12.0)
    assert verdict(stable).stable
    unstable = CharParams(variant="delayed", xi=0.2, delta=0.02, h=0.02, q=12.0)
    v = verdict(unstable)
    assert not v.stable and v.unstable_count > 0


def test_verdict_near_origin_point():
    p = CharParams(variant="delayed", xi=0.2, delta=1e-4, h=1e-4, q=0.75)
    v = verdict(p)
    assert v.stable
    assert v.margin > AXIS_TOL


def test_rightmost_real_part_matches_refined_root():
    p = CharParams(variant="instant", xi=1.62, delta=150.0, h=0.05, q=0.8)
    sigma = rightmost_real_part(p, default_omega_max(p), default_sigma_max(p))
    v = verdict(p)
    assert abs(sigma - v.rightmost_root.real) < 1e-5
