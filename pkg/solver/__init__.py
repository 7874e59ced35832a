from solver.expected_utility import expected_coefficients, expected_utility
from solver.best_response import best_response, best_response_function, golden_section_maximize
from solver.iteration import (
    Bound,
    BoundProfile,
    ChoicePolicy,
    Interval,
    IterationTrace,
    PlayerBounds,
    Termination,
    extremal_composite_inputs,
    iterate_round,
    solve,
)
from solver.closed_forms import (
    bertrand_round_interval,
    comparative_statics,
    cournot_round_interval,
    limit_bertrand_interval,
    limit_cournot_interval,
)
