from beliefs.density import (
    Comparison,
    ComparisonResult,
    PiecewiseConstantDensity,
    cdf_at,
    fosd_compare,
    mix_density,
    survival_at,
)
from beliefs.choice_belief import ChoiceBelief, choice_belief_compare, expectation, mix_choice_belief
from beliefs.composite import (
    CompositeBelief,
    composite_compare,
    composite_profile_compare,
    pushforward,
    triple_leq,
)
from beliefs.family import BeliefFamily, family_extremes, find_extreme_index, reduce_to_extremes
