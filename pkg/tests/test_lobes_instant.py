import math

import pytest

from turnstab.errors import DomainError, PoleAt, UnsupportedParameters
from turnstab.lobes_instant import (
    bar_beta,
    beta_bounds_instant,
    delta_denominator_fn,
    h2_delta_of_beta,
    h2_zeros,
    half_angle_cot,
    n0_index,
    positive_pair_intervals_instant,
    sample_branches_instant,
    tilde_beta_instant,
)

TWO_PI = 2.0 * math.pi


def test_tilde_beta_is_a_zero():
    tb = tilde_beta_instant(0.8, 1)
    assert math.pi < tb < TWO_PI
    assert abs(delta_denominator_fn(tb, 0.8)) < 1e-9


def test_bar_beta_solves_cot_relation():
    bb = bar_beta(0.8, 1)
    assert abs(half_angle_cot(bb) + 0.8) < 1e-9
    assert 0.0 < bb < TWO_PI


def test_h2_zeros_small_damping():
    z = h2_zeros(0.2, 0.8, 1)
    assert z.case == "two-zeros"
    for g in z.zeros:
        h2, _ = h2_delta_of_beta(g, 0.2, 0.8)
        assert abs(h2) < 1e-9


def test_h2_zeros_large_damping_cases():
    assert n0_index(1.62, 0.8) == 2
    assert h2_zeros(1.62, 0.8, 1).case == "two-zeros"
    assert h2_zeros(1.62, 0.8, 2).case == "radius-below-window"
    assert h2_zeros(1.62, 0.8, 3).case == "beyond-n0"
    assert h2_zeros(1.62, 0.8, 2).zeros == []


def test_positive_pair_intervals():
    ivs = positive_pair_intervals_instant(0.2, 0.8, 1)
    assert len(ivs) == 2
    # both delta and h2 positive at each midpoint
    for a, b in ivs:
        h2, delta = h2_delta_of_beta(0.5 * (a + b), 0.2, 0.8)
        assert h2 > 0 and delta > 0
    ivs162 = positive_pair_intervals_instant(1.62, 0.8, 1)
    assert len(ivs162) == 2
    assert len(positive_pair_intervals_instant(1.62, 0.8, 2)) == 1


def test_xi_equals_2q_is_unsupported():
    with pytest.raises(UnsupportedParameters):
        h2_zeros(1.6, 0.8, 1)


def test_pole_and_domain_guards():
    with pytest.raises(PoleAt):
        h2_delta_of_beta(2.0 * TWO_PI, 0.2, 0.8)
    with pytest.raises(DomainError):
        h2_delta_of_beta(0.0, 0.2, 0.8)


def test_beta_bounds_closed_form():
    lo, hi = beta_bounds_instant(1.0, 1.0, 1.0, 1.0)
    assert lo == 0.0
    assert math.isclose(hi, 1.0 + math.sqrt(3.0), rel_tol=1e-14)
    with pytest.raises(DomainError):
        beta_bounds_instant(0.0, 1.0, 1.0, 1.0)


def test_beta_bounds_bracket_boundary_roots():
    for beta in (2.0, 5.8):
        h2, delta = h2_delta_of_beta(beta, 0.2, 0.8)
        if h2 <= 0 or delta <= 0:
            continue
        lo, hi = beta_bounds_instant(h2, delta, 0.2, 0.8)
        assert lo < beta * beta <= hi


def test_sampled_branches_fig8():
    branches = []
    for n in (1, 2, 3):
        branches.extend(sample_branches_instant(1.62, 0.8, n, samples_per_interval=16))
    assert len(branches) == 4  # small lobe + three upper lobes
    for br in branches:
        assert all(delta > 0 and h2 > 0 for _, delta, h2 in br.points)
