import pytest

from beliefs.density import PiecewiseConstantDensity
from beliefs.family import BeliefFamily, family_extremes, find_extreme_index, reduce_to_extremes
from games.base_game import split_density_family
from utils.errors import AssumptionViolationError, DomainError


def test_split_family_extremes():
    family = split_density_family(0.0, 1.0)
    f_max, f_min = family_extremes(family)

    assert f_max is family.members[0]
    assert f_min is family.members[2]
    assert family.labels == ("f^0", "f^1/w", "f^2/w")
    assert find_extreme_index(family) == (0, 2)


def test_reduce_to_extremes_keeps_designated_members():
    family = split_density_family(1.0, 3.0)
    reduced = reduce_to_extremes(family)

    assert len(reduced) == 2
    assert reduced.members == (family.members[0], family.members[2])
    assert reduced.labels == ("f^0", "f^2/w")
    assert family_extremes(reduced) == (family.members[0], family.members[2])


def test_singleton_family():
    f = PiecewiseConstantDensity.uniform(0.0, 1.0)
    family = BeliefFamily.singleton(f, "uniform")
    assert family_extremes(family) == (f, f)
    assert len(reduce_to_extremes(family)) == 1


def test_wrong_designation_reports_witness():
    family = split_density_family(0.0, 1.0)
    wrong = BeliefFamily(family.members, max_index=1, min_index=2)

    with pytest.raises(AssumptionViolationError) as error:
        family_extremes(wrong)
    assert error.value.witness["extreme"] == "max"
    assert error.value.witness["member"] == "#0"


def test_incomparable_members_have_no_extremes(worked_first, worked_second):
    family = BeliefFamily((worked_first[1], worked_second[1]))
    assert find_extreme_index(family) == (None, None)
    with pytest.raises(AssumptionViolationError):
        family_extremes(family)


def test_family_validation():
    with pytest.raises(DomainError):
        BeliefFamily(())
    with pytest.raises(DomainError):
        BeliefFamily((PiecewiseConstantDensity.uniform(0.0, 1.0),), max_index=3)
    with pytest.raises(DomainError):
        BeliefFamily((PiecewiseConstantDensity.uniform(0.0, 1.0), PiecewiseConstantDensity.uniform(0.0, 2.0)))
