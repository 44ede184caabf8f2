import math

import pytest

from turnstab.errors import (
    DegenerateTangency,
    DomainError,
    PoleAt,
    UnsupportedParameters,
)
from turnstab.lobes_delayed import (
    beta_bounds_delayed,
    beta_star,
    delta_denominator_fn,
    frequency_estimate,
    h1_delta_of_beta,
    positive_delta_intervals,
    q_threshold,
    sample_branches_delayed,
    tilde_betas,
    xi_crossing_fn,
)

TWO_PI = 2.0 * math.pi


def test_beta_star_is_a_zero_in_its_window():
    for xi, n in [(0.2, 1), (1.62, 1), (1.62, 2), (0.05, 3)]:
        bs = beta_star(xi, n)
        assert (2 * n - 1) * math.pi < bs < 2 * n * math.pi
        assert abs(xi_crossing_fn(bs, xi)) < 1e-9


def test_tilde_beta_counts():
    assert len(tilde_betas(0.8, 1)) == 1
    assert len(tilde_betas(12.0, 1)) == 3
    for b in tilde_betas(12.0, 1):
        assert abs(delta_denominator_fn(b, 12.0)) < 1e-8


def test_tilde_beta_threshold_band_is_degenerate():
    q_th = q_threshold(1)
    with pytest.raises(DegenerateTangency):
        tilde_betas(q_th * (1.0 + 1e-10), 1)
    # just outside the band both sides resolve cleanly
    assert len(tilde_betas(q_th * 1.001, 1)) == 3
    assert len(tilde_betas(q_th * 0.999, 1)) == 1


def test_pair_is_even_in_beta():
    assert h1_delta_of_beta(-4.0, 0.2, 0.8) == h1_delta_of_beta(4.0, 0.2, 0.8)


def test_pole_at_full_turns():
    with pytest.raises(PoleAt):
        h1_delta_of_beta(TWO_PI, 0.2, 0.8)
    with pytest.raises(DomainError):
        h1_delta_of_beta(0.0, 0.2, 0.8)


def test_small_beta_limit_is_regular():
    # delta -> 0+ and h1 -> -inf along the curve; no spurious pole error
    h1, delta = h1_delta_of_beta(1e-5, 0.2, 0.8)
    assert 0.0 < delta < 1e-8
    assert h1 < -1e6


def test_positive_delta_intervals_fig4():
    ivs = positive_delta_intervals(0.2, 12.0, 1)
    assert len(ivs) == 3
    flat = [v for iv in ivs for v in iv]
    assert flat == sorted(flat)
    # delta really is positive at interval midpoints and negative between them
    for a, b in ivs:
        _, delta = h1_delta_of_beta(0.5 * (a + b), 0.2, 12.0)
        assert delta > 0


def test_positive_delta_intervals_fig6():
    ivs = positive_delta_intervals(0.2, 0.8, 1)
    assert len(ivs) == 2
    assert ivs[0][0] == 0.0 and ivs[1][1] == TWO_PI


def test_xi_equals_2q_is_unsupported():
    with pytest.raises(UnsupportedParameters):
        positive_delta_intervals(1.6, 0.8, 1)


def test_beta_bounds_bracket_boundary_roots():
    for beta in (2.0, 4.5, 5.9):
        h1, delta = h1_delta_of_beta(beta, 0.2, 12.0)
        if delta <= 0:
            continue
        lo, hi = beta_bounds_delayed(h1, delta, 0.2, 12.0)
        assert lo <= beta * beta <= hi


def test_beta_bounds_h1_zero_form():
    lo, hi = beta_bounds_delayed(0.0, 2.0, 0.5, 1.5)
    assert lo == 0.0
    assert math.isclose(hi, 9.0 * 2.0 * 1.5 / (8.0 * 0.5), rel_tol=1e-15)


def test_frequency_estimate():
    assert math.isclose(frequency_estimate(TWO_PI), 1.0, rel_tol=1e-15)
    with pytest.raises(DomainError):
        frequency_estimate(-1.0)


def test_sampled_branches_structure():
    branches = sample_branches_delayed(0.2, 12.0, 1, samples_per_interval=32)
    assert len(branches) == 3
    for br in branches:
        assert br.variant == "delayed" and br.n == 1
        assert len(br.points) == 32
        betas = [p[0] for p in br.points]
        assert betas == sorted(betas)
        assert all(delta > 0 for _, delta, _ in br.points)
