import numpy as np
import pytest

from beliefs.choice_belief import ChoiceBelief, choice_belief_compare, expectation, mix_choice_belief
from beliefs.density import ComparisonResult, PiecewiseConstantDensity
from games.base_game import split_density_family
from utils.errors import ArgumentError, DomainError


def test_step_belief_pieces_are_closed_on_the_right(worked_first):
    beta, _ = worked_first
    assert beta(0.0) == pytest.approx(0.5)
    assert beta(0.3) == pytest.approx(0.5)
    assert beta(0.31) == pytest.approx(0.3)
    assert beta(1.0) == pytest.approx(0.8)


def test_evaluate_returns_float_for_scalar_and_array_for_array():
    beta = ChoiceBelief.affine(0.0, 1.0, 1.0, 2.0)
    assert isinstance(beta(0.5), float)
    np.testing.assert_allclose(beta(np.array([0.0, 0.5, 1.0])), [1.0, 2.0, 3.0])


def test_evaluate_outside_domain_raises():
    beta = ChoiceBelief.constant(0.0, 1.0, 0.5)
    with pytest.raises(DomainError):
        beta(1.5)


def test_reciprocal_term_on_piece_containing_zero_raises():
    with pytest.raises(DomainError):
        ChoiceBelief((0.0, 1.0), (0.0,), (0.0,), (1.0,))


def test_value_range_uses_stationary_points():
    beta = ChoiceBelief.reciprocal_affine(0.5, 2.0, 0.0, 1.0, 1.0)
    low, high = beta.value_range()
    assert low == pytest.approx(2.0)
    assert high == pytest.approx(2.5)


def test_compare_detects_interior_crossing():
    beta = ChoiceBelief.reciprocal_affine(0.5, 2.0, 0.0, 1.0, 1.0)
    comparison = choice_belief_compare(beta, ChoiceBelief.constant(0.5, 2.0, 2.1))
    assert comparison.result == ComparisonResult.INCOMPARABLE
    assert comparison.second_above == pytest.approx(1.0)


def test_compare_pointwise_order():
    rising = ChoiceBelief.affine(0.0, 1.0, 0.0, 1.0)
    assert choice_belief_compare(rising, ChoiceBelief.constant(0.0, 1.0, -1.0)).result == ComparisonResult.DOMINATES
    assert choice_belief_compare(rising, rising).result == ComparisonResult.EQUAL


def test_pointwise_max_and_min_split_at_crossing():
    rising = ChoiceBelief.affine(0.0, 1.0, 0.0, 1.0)
    falling = ChoiceBelief.affine(0.0, 1.0, 1.0, -1.0)

    upper = rising.pointwise_max(falling)
    lower = rising.pointwise_min(falling)

    assert upper(0.25) == pytest.approx(0.75)
    assert upper(0.75) == pytest.approx(0.75)
    assert lower(0.5) == pytest.approx(0.5)
    assert lower(0.0) == pytest.approx(0.0)
    assert upper.n_pieces == 2


def test_clip_is_exact():
    beta = ChoiceBelief.affine(0.0, 1.0, -1.0, 3.0).clip(0.0, 1.0)
    assert beta(0.0) == pytest.approx(0.0)
    assert beta(1 / 3) == pytest.approx(0.0)
    assert beta(0.5) == pytest.approx(0.5)
    assert beta(1.0) == pytest.approx(1.0)
    assert beta.lies_within(0.0, 1.0)
    assert beta.is_monotone(increasing=True)


def test_from_samples_interpolates_linearly():
    beta = ChoiceBelief.from_samples([0.0, 1.0, 2.0], [0.0, 1.0, 1.0])
    assert beta(0.5) == pytest.approx(0.5)
    assert beta(1.5) == pytest.approx(1.0)
    assert beta.n_pieces == 2


def test_from_samples_merges_collinear_pieces():
    beta = ChoiceBelief.from_samples([0.0, 1.0, 2.0], [0.0, 1.0, 2.0])
    assert beta.n_pieces == 1


def test_from_samples_needs_two_points():
    with pytest.raises(ArgumentError):
        ChoiceBelief.from_samples([0.0], [1.0])


def test_monotonicity_checks_jumps_between_pieces():
    beta = ChoiceBelief.step((0.0, 0.5, 1.0), (1.0, 0.0))
    assert beta.is_monotone(increasing=False)
    assert not beta.is_monotone(increasing=True)


def test_refine_keeps_values():
    beta = ChoiceBelief.affine(0.0, 1.0, 0.0, 1.0)
    refined = beta.refine([0.25, 0.5])
    assert refined.n_pieces == 3
    assert refined(0.4) == pytest.approx(0.4)


def test_expectation_exact_for_linear_and_reciprocal_pieces():
    rising = ChoiceBelief.affine(0.0, 1.0, 0.0, 1.0)
    assert expectation(rising, PiecewiseConstantDensity.uniform(0.0, 1.0)) == pytest.approx(0.5)

    inverse = ChoiceBelief.reciprocal_affine(1.0, 3.0, 0.0, 0.0, 1.0)
    assert expectation(inverse, PiecewiseConstantDensity.uniform(1.0, 3.0)) == pytest.approx(np.log(3.0) / 2.0)


def test_expectation_of_identity_under_split_family():
    top, _, bottom = split_density_family(0.0, 1.0).members
    identity = ChoiceBelief.affine(0.0, 1.0, 0.0, 1.0)
    assert expectation(identity, top) == pytest.approx(0.75)
    assert expectation(identity, bottom) == pytest.approx(0.25)


def test_expectation_requires_matching_domain():
    with pytest.raises(DomainError):
        expectation(ChoiceBelief.constant(0.0, 1.0, 1.0), PiecewiseConstantDensity.uniform(0.0, 2.0))


def test_mix_choice_belief():
    zero = ChoiceBelief.constant(0.0, 1.0, 0.0)
    two = ChoiceBelief.constant(0.0, 1.0, 2.0)
    assert mix_choice_belief(zero, two, 0.5)(0.3) == pytest.approx(1.0)
    assert mix_choice_belief(zero, two, 0.0) is zero
    with pytest.raises(ArgumentError):
        mix_choice_belief(zero, two, -0.1)
