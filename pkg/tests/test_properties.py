import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from beliefs.choice_belief import expectation, mix_choice_belief
from beliefs.composite import composite_compare, pushforward, triple_leq
from beliefs.density import ComparisonResult, fosd_compare, mix_density
from games import bertrand_game, cournot_game
from solver.best_response import best_response
from solver.closed_forms import bertrand_round_interval, limit_bertrand_interval
from solver.iteration import ChoicePolicy, Interval, solve
from verify.sampling import dominating_density, ordered_pair, raised_belief, random_choice_belief, random_density

seeds = st.integers(min_value=0, max_value=2**32 - 1)
weights = st.floats(min_value=0.0, max_value=1.0)

BERTRAND = bertrand_game(1.0, 1.0, 3.0)
COURNOT = cournot_game(10.0, 2.0, 1.0, 3.0, 8.0)

OPPOSITE = {
    ComparisonResult.DOMINATES: ComparisonResult.DOMINATED_BY,
    ComparisonResult.DOMINATED_BY: ComparisonResult.DOMINATES,
    ComparisonResult.EQUAL: ComparisonResult.EQUAL,
    ComparisonResult.INCOMPARABLE: ComparisonResult.INCOMPARABLE,
}


def rng_for(seed):
    return np.random.default_rng(seed)


@settings(max_examples=500, derandomize=True)
@given(seed=seeds, lam=weights)
def test_mixture_lies_between_ordered_densities(seed, lam):
    rng = rng_for(seed)
    f = random_density(rng, 0.0, 1.0)
    f_high = dominating_density(rng, f)

    mixed = mix_density(f, f_high, lam)
    assert fosd_compare(f_high, mixed).dominates
    assert fosd_compare(mixed, f).dominates
    assert mixed.piece_masses().sum() == pytest.approx(1.0)
    assert mixed.mean() == pytest.approx((1.0 - lam) * f.mean() + lam * f_high.mean())


@settings(max_examples=500, derandomize=True)
@given(seed=seeds)
def test_fosd_comparison_is_antisymmetric(seed):
    rng = rng_for(seed)
    f = random_density(rng, -1.0, 2.0)
    g = random_density(rng, -1.0, 2.0)
    assert fosd_compare(g, f).result == OPPOSITE[fosd_compare(f, g).result]


@settings(max_examples=500, derandomize=True)
@given(seed=seeds)
def test_pushforward_keeps_unit_mass(seed):
    rng = rng_for(seed)
    beta = random_choice_belief(rng, 0.0, 1.0, 0.0, 2.0)
    f = random_density(rng, 0.0, 1.0)

    composite = pushforward(beta, f, 0.0, 2.0)
    assert composite.total_mass() == pytest.approx(1.0, abs=1e-9)
    assert composite.survival(0.0) == pytest.approx(1.0, abs=1e-9)
    assert composite.mean() == pytest.approx(expectation(beta, f), abs=1e-9)


@settings(max_examples=500, derandomize=True)
@given(seed=seeds, lam=weights)
def test_expectation_is_linear_in_mixture_weight(seed, lam):
    rng = rng_for(seed)
    beta = random_choice_belief(rng, 1.0, 3.0, 0.0, 8.0)
    beta_p = random_choice_belief(rng, 1.0, 3.0, 0.0, 8.0)
    f = random_density(rng, 1.0, 3.0)

    mixed = expectation(mix_choice_belief(beta, beta_p, lam), f)
    expected = (1.0 - lam) * expectation(beta, f) + lam * expectation(beta_p, f)
    assert mixed == pytest.approx(expected, abs=1e-9)


@settings(max_examples=500, derandomize=True)
@given(seed=seeds, lo=st.floats(min_value=0.0, max_value=0.4), hi=st.floats(min_value=0.6, max_value=1.0))
def test_clip_stays_within_bounds(seed, lo, hi):
    rng = rng_for(seed)
    beta = random_choice_belief(rng, 0.0, 1.0, -0.5, 1.5)

    clipped = beta.clip(lo, hi)
    assert clipped.lies_within(lo, hi)
    for theta in np.linspace(0.0, 1.0, 9):
        assert clipped(theta) == pytest.approx(min(hi, max(lo, beta(theta))), abs=1e-12)


@settings(max_examples=500, derandomize=True)
@given(
    a=st.floats(min_value=0.1, max_value=5.0),
    phi=st.floats(min_value=0.1, max_value=5.0),
    slack=st.floats(min_value=0.0, max_value=5.0),
    share=weights,
    k=st.integers(min_value=1, max_value=30),
)
def test_bertrand_closed_form_rounds_are_nested(a, phi, slack, share, k):
    p_bar = a + phi + slack
    theta = share * phi
    current = bertrand_round_interval(k, a, phi, p_bar, theta)
    following = bertrand_round_interval(k + 1, a, phi, p_bar, theta)
    limit = limit_bertrand_interval(a, phi, theta)

    assert current.contains(following, tol=1e-12)
    assert following.contains(limit, tol=1e-12)


@settings(max_examples=500, derandomize=True, deadline=None)
@given(a=st.floats(min_value=0.5, max_value=2.0), phi=st.floats(min_value=0.5, max_value=2.0))
def test_bertrand_iteration_rounds_are_nested(a, phi):
    trace = solve(bertrand_game(a, phi, a + phi), max_rounds=4, grid_size=3)
    for before, after in zip(trace.rounds, trace.rounds[1:]):
        for old, new in zip(before.players, after.players):
            assert np.all(new.lower >= old.lower - 1e-12)
            assert np.all(new.upper <= old.upper + 1e-12)


@settings(max_examples=500, derandomize=True)
@given(seed=seeds)
def test_fosd_dominance_is_transitive(seed):
    rng = rng_for(seed)
    f = random_density(rng, 0.0, 2.0)
    g = dominating_density(rng, f)
    h = dominating_density(rng, g)

    assert fosd_compare(g, f).dominates
    assert fosd_compare(h, g).dominates
    assert fosd_compare(h, f).dominates
    assert fosd_compare(f, h).dominated_by


@settings(max_examples=500, derandomize=True)
@given(seed=seeds)
def test_pointwise_higher_belief_gives_dominating_composite(seed):
    rng = rng_for(seed)
    beta = random_choice_belief(rng, 0.0, 1.0, 0.0, 3.0)
    beta_p = raised_belief(rng, beta, 3.0)
    f = random_density(rng, 0.0, 1.0)

    high = pushforward(beta_p, f, 0.0, 3.0)
    low = pushforward(beta, f, 0.0, 3.0)
    assert composite_compare(high, low).dominates
    assert high.mean() >= low.mean() - 1e-12


@settings(max_examples=500, derandomize=True, deadline=None)
@given(seed=seeds, thetas=st.tuples(weights, weights))
def test_bertrand_best_response_increases_along_triple_order(seed, thetas):
    rng = rng_for(seed)
    theta, theta_p = sorted(thetas)
    (beta, f), (beta_p, f_p) = ordered_pair(rng, 0.0, 1.0, 0.0, 3.0)
    first = (theta, {1: beta}, {1: f})
    second = (theta_p, {1: beta_p}, {1: f_p})
    assert triple_leq(first, second)

    full = Interval(0.0, 3.0)
    low = best_response(BERTRAND, 0, *first, full)
    high = best_response(BERTRAND, 0, *second, full)
    assert high >= low - 1e-12


@settings(max_examples=500, derandomize=True, deadline=None)
@given(seed=seeds, thetas=st.tuples(weights, weights))
def test_cournot_best_response_decreases_along_triple_order(seed, thetas):
    rng = rng_for(seed)
    theta, theta_p = sorted(1.0 + 2.0 * t for t in thetas)
    (beta, f), (beta_p, f_p) = ordered_pair(rng, 1.0, 3.0, 0.0, 8.0)
    first = (theta, {0: beta}, {0: f})
    second = (theta_p, {0: beta_p}, {0: f_p})
    assert triple_leq(first, second)

    full = Interval(0.0, 8.0)
    low = best_response(COURNOT, 1, *first, full)
    high = best_response(COURNOT, 1, *second, full)
    assert high <= low + 1e-12


def _assert_refinement_stable(g, size, policy):
    coarse = solve(g, max_rounds=6, width_tol=1e-300, grid_size=size, policy=policy)
    fine = solve(g, max_rounds=6, width_tol=1e-300, grid_size=2 * size - 1, policy=policy)

    assert len(coarse.rounds) == len(fine.rounds)
    for rough, smooth in zip(coarse.final.players, fine.final.players):
        np.testing.assert_allclose(smooth.grid[::2], rough.grid, atol=1e-12)
        np.testing.assert_allclose(smooth.lower[::2], rough.lower, atol=1e-8)
        np.testing.assert_allclose(smooth.upper[::2], rough.upper, atol=1e-8)
        np.testing.assert_allclose(smooth.lower_fn(rough.grid), rough.lower, atol=1e-8)
        np.testing.assert_allclose(smooth.upper_fn(rough.grid), rough.upper, atol=1e-8)


@settings(max_examples=500, derandomize=True, deadline=None)
@given(
    a=st.floats(min_value=0.5, max_value=3.0),
    phi=st.floats(min_value=0.5, max_value=3.0),
    size=st.integers(min_value=2, max_value=12),
)
def test_bertrand_bounds_are_stable_under_grid_refinement(a, phi, size):
    _assert_refinement_stable(bertrand_game(a, phi, a + phi), size, ChoicePolicy.CONFINED)


@settings(max_examples=500, derandomize=True, deadline=None)
@given(a=st.floats(min_value=6.0, max_value=12.0), size=st.integers(min_value=2, max_value=12))
def test_cournot_bounds_are_stable_under_grid_refinement(a, size):
    g = cournot_game(a, 2.0, 1.0, 3.0, max(8.0, (a - 2.0) / 2.0))
    _assert_refinement_stable(g, size, ChoicePolicy.UNCONFINED)
