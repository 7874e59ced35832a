from verify.report import AssumptionReport, CheckResult, CheckStatus
from verify.assumptions import (
    check_belief_families,
    check_cross_partials,
    check_expectation_dominance,
    check_increasing_differences,
    check_mixture_continuity,
    check_unique_optimum,
    cross_partial_samples,
    mixture_sweep,
    run_all_checks,
)
from verify.oracle import DiscretizedGame, OracleResult, compare_oracle, discretize_game, oracle_rationalizable
