import pytest

from beliefs.density import (
    ComparisonResult,
    PiecewiseConstantDensity,
    cdf_at,
    fosd_compare,
    merge_breakpoints,
    mix_density,
    survival_at,
)
from games.base_game import split_density_family
from utils.errors import ArgumentError, DomainError


def test_worked_densities_are_incomparable(worked_first, worked_second):
    _, f_first = worked_first
    _, f_second = worked_second

    comparison = fosd_compare(f_first, f_second)

    assert comparison.result == ComparisonResult.INCOMPARABLE
    assert comparison.first_above == pytest.approx(0.7)
    assert comparison.second_above == pytest.approx(0.3)
    assert not comparison.dominates
    assert not comparison.dominated_by


def test_survival_and_cdf_are_exact(worked_first):
    _, f = worked_first
    assert survival_at(f, 0.3) == pytest.approx(0.8)
    assert survival_at(f, 0.7) == pytest.approx(0.7)
    assert cdf_at(f, 0.5) == pytest.approx(0.2 + 0.25 * 0.2)
    assert cdf_at(f, 0.0) == 0.0
    assert survival_at(f, 1.0) == 0.0


def test_height_at_breakpoint_belongs_to_left_piece(worked_first):
    _, f = worked_first
    assert f.height_at(0.3) == pytest.approx(2 / 3)
    assert f.height_at(0.0) == pytest.approx(2 / 3)
    assert f.height_at(0.31) == pytest.approx(1 / 4)


def test_uniform_dominance_is_equal():
    f = PiecewiseConstantDensity.uniform(0.0, 2.0)
    g = PiecewiseConstantDensity((0.0, 1.0, 2.0), (0.5, 0.5))
    assert fosd_compare(f, g).result == ComparisonResult.EQUAL


def test_split_family_order_and_means():
    family = split_density_family(0.0, 1.0)
    top, uniform, bottom = family.members

    assert fosd_compare(top, uniform).result == ComparisonResult.DOMINATES
    assert fosd_compare(bottom, uniform).result == ComparisonResult.DOMINATED_BY
    assert top.mean() == pytest.approx(0.75)
    assert uniform.mean() == pytest.approx(0.5)
    assert bottom.mean() == pytest.approx(0.25)


def test_mix_density_endpoints_and_middle():
    family = split_density_family(0.0, 1.0)
    top, _, bottom = family.members

    assert mix_density(top, bottom, 0.0) is top
    assert mix_density(top, bottom, 1.0) is bottom
    middle = mix_density(top, bottom, 0.5)
    assert middle.mean() == pytest.approx(0.5)
    assert fosd_compare(top, middle).dominates
    assert fosd_compare(middle, bottom).dominates


def test_mix_density_rejects_bad_weight():
    f = PiecewiseConstantDensity.uniform(0.0, 1.0)
    with pytest.raises(ArgumentError):
        mix_density(f, f, 1.5)


def test_merge_breakpoints_drops_duplicates():
    merged = merge_breakpoints((0.0, 0.5, 1.0), (0.0, 0.25, 1.0))
    assert list(merged) == [0.0, 0.25, 0.5, 1.0]


@pytest.mark.parametrize(
    "breakpoints, values",
    [
        ((0.0, 1.0), (0.5,)),
        ((0.0, 0.5, 1.0), (3.0, -1.0)),
        ((0.0, 0.5, 0.5, 1.0), (1.0, 1.0, 1.0)),
        ((0.0, 1.0), (1.0, 1.0)),
    ],
)
def test_invalid_densities_raise(breakpoints, values):
    with pytest.raises(DomainError):
        PiecewiseConstantDensity(breakpoints, values)


def test_queries_outside_domain_raise():
    f = PiecewiseConstantDensity.uniform(0.0, 1.0)
    with pytest.raises(DomainError):
        cdf_at(f, 1.5)
    with pytest.raises(DomainError):
        fosd_compare(f, PiecewiseConstantDensity.uniform(0.0, 2.0))


def test_from_weights_normalizes():
    f = PiecewiseConstantDensity.from_weights((0.0, 1.0, 3.0), (1.0, 3.0))
    assert f.piece_masses().tolist() == pytest.approx([0.25, 0.75])
    assert f.values == pytest.approx((0.25, 0.375))
