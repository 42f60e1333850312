import numpy as np
import pytest

from pagemig import (
    COST_ATOL,
    RequestSequence,
    UniformMetric,
    brute_force_schedule,
    candidate_points,
    constrained_optimal,
    multiples_move_times,
    optimal_schedule,
)
from pagemig.generators import lower_bound_instance

from instances import small_random_instance

U = UniformMetric()


def test_candidates_of_empty_sequence():
    assert candidate_points(RequestSequence("p0", ())) == ["p0"]


def test_candidates_dedup_start_first():
    seq = RequestSequence("c", ("a", "a", "b"))
    assert candidate_points(seq) == ["c", "a", "b"]


def test_candidates_bounded_by_requests():
    rng = np.random.default_rng(0)
    pts = tuple((float(x), float(y)) for x, y in rng.normal(size=(100, 2)).cumsum(axis=0))
    seq = RequestSequence((0.0, 0.0), pts)
    assert len(candidate_points(seq)) <= 101


def test_move_immediately_when_requests_repeat():
    res = optimal_schedule(RequestSequence(0, (1, 1, 1)), U, 2.0)
    assert res.total_cost == 2.0
    assert res.schedule.positions == (0, 1, 1, 1)
    assert brute_force_schedule(RequestSequence(0, (1, 1, 1)), U, 2.0).total_cost == 2.0


def test_tie_broken_toward_staying():
    res = optimal_schedule(RequestSequence(0, (1, 1)), U, 2.0)
    assert res.total_cost == 2.0
    assert res.schedule.positions == (0, 0, 0)
    assert brute_force_schedule(RequestSequence(0, (1, 1)), U, 2.0).total_cost == 2.0


def test_lower_bound_prediction_stays_home():
    pair = lower_bound_instance(100.0, 0.1, "A")
    res = optimal_schedule(pair.predicted, U, 100.0)
    assert res.total_cost == 90.0
    assert set(res.schedule.positions) == {0}
    small = lower_bound_instance(12.0, 0.25, "A")  # small enough to enumerate
    assert (
        brute_force_schedule(small.predicted, U, 12.0).total_cost
        == optimal_schedule(small.predicted, U, 12.0).total_cost
    )


def test_brute_force_empty_and_alternating():
    empty = RequestSequence(0, ())
    res = brute_force_schedule(empty, U, 2.0)
    assert res.total_cost == 0.0 and res.schedule.positions == (0,)
    res = brute_force_schedule(RequestSequence(0, (1, 0, 1, 0, 1)), U, 2.0)
    assert res.total_cost == 3.0  # staying at 0 serves the three 1-requests


def test_brute_force_size_guard():
    seq = RequestSequence(0, tuple([1, 2, 3] * 20))
    with pytest.raises(ValueError, match="brute-force limit"):
        brute_force_schedule(seq, U, 2.0)


def test_start_must_be_candidate():
    seq = RequestSequence(0, (1,))
    with pytest.raises(ValueError, match="p_0"):
        optimal_schedule(seq, U, 2.0, candidates=[1])
    with pytest.raises(ValueError, match="p_0"):
        brute_force_schedule(seq, U, 2.0, candidates=[1])


def test_dp_equals_brute_force_on_200_random_instances():
    rng = np.random.default_rng(1234)
    for _ in range(200):
        seq, metric, D = small_random_instance(rng)
        dp = optimal_schedule(seq, metric, D)
        bf = brute_force_schedule(seq, metric, D)
        assert dp.total_cost == bf.total_cost  # exactly, by shared accumulation order


def test_restricting_moves_never_helps():
    rng = np.random.default_rng(77)
    for _ in range(40):
        seq, metric, D = small_random_instance(rng)
        n = len(seq)
        if n == 0:
            continue
        free = optimal_schedule(seq, metric, D).total_cost
        period = int(rng.integers(1, n + 1))
        restricted = optimal_schedule(
            seq, metric, D, move_times=multiples_move_times(n, period)
        ).total_cost
        assert free <= restricted + COST_ATOL


def test_move_times_respected_in_schedule():
    seq = RequestSequence(0, (1, 1, 1, 1, 1, 1))
    res = optimal_schedule(seq, U, 2.0, move_times={3})
    assert res.schedule.moves_at() == [3]
    res_none = optimal_schedule(seq, U, 2.0, move_times=set())
    assert res_none.schedule.moves_at() == []
    with pytest.raises(ValueError, match="move times"):
        optimal_schedule(seq, U, 2.0, move_times={9})


def test_constrained_at_zero():
    seq = RequestSequence(0, (1,))
    assert constrained_optimal(seq, U, 2.0, 0, 0) == 0.0
    with pytest.raises(ValueError, match="t=0"):
        constrained_optimal(seq, U, 2.0, 0, 1)


def test_constrained_single_request():
    seq = RequestSequence(0, (1,))
    assert constrained_optimal(seq, U, 2.0, 1, 1) == 2.0  # move beats serving remotely
    assert constrained_optimal(seq, U, 2.0, 1, 0) == 1.0


def test_constrained_end_must_be_candidate():
    seq = RequestSequence(0, (1,))
    with pytest.raises(ValueError, match="candidate"):
        constrained_optimal(seq, U, 2.0, 1, 7)


def test_constrained_min_over_ends_is_optimum():
    rng = np.random.default_rng(31)
    for _ in range(30):
        seq, metric, D = small_random_instance(rng)
        cands = candidate_points(seq)
        opt = optimal_schedule(seq, metric, D).total_cost
        if len(seq) == 0:
            assert opt == 0.0
            continue
        best = min(constrained_optimal(seq, metric, D, len(seq), e) for e in cands)
        assert best == opt


def test_doubling_D_never_decreases_cost():
    rng = np.random.default_rng(8)
    for _ in range(40):
        seq, metric, D = small_random_instance(rng)
        c1 = optimal_schedule(seq, metric, D).total_cost
        c2 = optimal_schedule(seq, metric, 2 * D).total_cost
        assert c2 >= c1 - COST_ATOL


def test_solve_result_cost_split():
    rng = np.random.default_rng(15)
    for _ in range(30):
        seq, metric, D = small_random_instance(rng)
        res = optimal_schedule(seq, metric, D)
        assert res.total_cost == pytest.approx(res.move_cost + res.serve_cost, abs=COST_ATOL)
