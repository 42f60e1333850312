"""Prediction-augmented online page migration.

A page lives at a point of a metric space; moving it costs D times the
distance and serving a request costs the distance from the page. This
package implements the prediction-following strategy and its lazy,
delayed, and robust variants, the offline DP optimum they are measured
against, adversarial instance generators, and an experiment harness.
"""

from .metric import (
    COST_ATOL,
    EuclideanPlane,
    ExplicitMetric,
    MetricViolation,
    UniformMetric,
    distance,
    load_explicit_metric,
    repaired_explicit,
    validate_explicit,
)
from .offline import (
    SolveResult,
    brute_force_schedule,
    candidate_points,
    constrained_optimal,
    multiples_move_times,
    optimal_schedule,
)
from .sequences import (
    AssumptionParams,
    PredictionPair,
    RequestSequence,
    ViolationDetector,
    check_assumption,
    max_window_density,
    mismatches,
)
from .simulation import CostLedger, RunReport, Schedule, cost_of, eq3_diagnostic, run
from .strategies import (
    CoinflipStrategy,
    DelayedStrategy,
    FixedScheduleStrategy,
    LazyMultiples,
    PredictStrategy,
    RobustStrategy,
    Strategy,
    coinflip_expected_cost,
    make_strategy,
)
from .generators import (
    NoiseModel,
    bounded_flip,
    brownian_process,
    gaussian_perturb,
    line_process,
    lower_bound_instance,
    suffix_adversary,
)

__version__ = "0.1.0"
