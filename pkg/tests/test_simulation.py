import numpy as np
import pytest

from pagemig import (
    COST_ATOL,
    CoinflipStrategy,
    FixedScheduleStrategy,
    PredictionPair,
    PredictStrategy,
    RequestSequence,
    RunReport,
    Schedule,
    UniformMetric,
    bounded_flip,
    brute_force_schedule,
    candidate_points,
    cost_of,
    eq3_diagnostic,
    optimal_schedule,
    run,
)

from instances import small_random_instance

U = UniformMetric()


def opt_report(seq, metric, D, candidates=None):
    res = optimal_schedule(seq, metric, D, candidates=candidates)
    return RunReport(
        "opt", {}, None, D, res.schedule, cost_of(res.schedule, seq, metric, D)
    )


def test_stationary_run_costs_nothing():
    s = RequestSequence(0, (0, 0, 0))
    report = run(FixedScheduleStrategy([0, 0, 0, 0]), s, U, 2.0)
    assert report.total_cost == 0.0


def test_move_then_serve_charges():
    s = RequestSequence(0, (1, 1))
    report = run(FixedScheduleStrategy([0, 1, 1]), s, U, 2.0)
    assert list(report.ledger.move) == [2.0, 0.0]
    assert list(report.ledger.serve) == [0.0, 0.0]
    assert report.total_cost == 2.0


def test_perfect_prediction_matches_dp_exactly():
    rng = np.random.default_rng(2)
    for _ in range(25):
        s, metric, D = small_random_instance(rng)
        res = optimal_schedule(s, metric, D)
        report = run(PredictStrategy(s, metric, D), s, metric, D)
        assert report.total_cost == res.total_cost


def test_ledger_matches_cost_of_recompute():
    rng = np.random.default_rng(3)
    s, metric, D = small_random_instance(rng)
    strat = CoinflipStrategy(s.start, max(D, 1.5), seed=5)
    report = run(strat, s, metric, max(D, 1.5))
    again = cost_of(report.schedule, s, metric, max(D, 1.5))
    assert np.array_equal(report.ledger.prefix, again.prefix)


def test_cost_of_matches_brute_force_oracle():
    rng = np.random.default_rng(4)
    for _ in range(10):
        s, metric, D = small_random_instance(rng)
        bf = brute_force_schedule(s, metric, D)
        ledger = cost_of(bf.schedule, s, metric, D)
        assert ledger.total_cost == bf.total_cost


def test_cost_of_shape_error():
    s = RequestSequence(0, (1, 1))
    with pytest.raises(ValueError, match="positions"):
        cost_of(Schedule((0, 1)), s, U, 2.0)


def test_strategy_reuse_rejected():
    s = RequestSequence(0, (1,))
    strat = FixedScheduleStrategy([0, 0])
    run(strat, s, U, 2.0)
    with pytest.raises(ValueError, match="single-use"):
        run(strat, s, U, 2.0)


def test_ledger_additivity_and_interval():
    rng = np.random.default_rng(6)
    s, metric, D = small_random_instance(rng)
    while len(s) < 4:
        s, metric, D = small_random_instance(rng)
    report = run(CoinflipStrategy(s.start, max(D, 1.5), seed=1), s, metric, max(D, 1.5))
    led = report.ledger
    n = len(led)
    assert all(m >= 0 for m in led.move) and all(v >= 0 for v in led.serve)
    assert led.interval(0, n) == led.total_cost
    for t1, t2, t3 in [(0, 1, n), (0, n // 2, n), (1, 2, 3)]:
        assert led.interval(t1, t2) + led.interval(t2, t3) == pytest.approx(
            led.interval(t1, t3), abs=COST_ATOL
        )
    with pytest.raises(IndexError):
        led.interval(2, 1)


def test_run_deterministic_under_seed():
    s = RequestSequence(0, tuple(int(v) for v in np.random.default_rng(0).integers(0, 3, 80)))
    r1 = run(CoinflipStrategy(0, 4.0, seed=99), s, U, 4.0)
    r2 = run(CoinflipStrategy(0, 4.0, seed=99), s, U, 4.0)
    assert r1.to_json() == r2.to_json()
    r3 = run(CoinflipStrategy(0, 4.0, seed=100), s, U, 4.0)
    assert r1.to_json() != r3.to_json()


def test_eq3_zero_noise_gives_zero_bound():
    rng = np.random.default_rng(8)
    s, metric, D = small_random_instance(rng)
    pair = PredictionPair(actual=s, predicted=s)
    alg = run(PredictStrategy(s, metric, D), s, metric, D)
    diag = eq3_diagnostic(alg, opt_report(s, metric, D), pair)
    assert diag.rhs == 0.0
    assert diag.lhs <= 1e-9
    assert diag.breakpoints[0] == 0
    if len(s):
        assert diag.breakpoints[-1] == len(s)


def test_eq3_matches_naive_recomputation():
    rng = np.random.default_rng(12)
    k = 4
    pred = RequestSequence(0, tuple(int(v) for v in rng.integers(0, k, 60)))
    act = bounded_flip(pred, 0.1, 1.0, 10.0, seed=3, pool=list(range(k)))
    pair = PredictionPair(actual=act, predicted=pred)
    cands = candidate_points(pred)
    for p in act.items:
        if p not in cands:
            cands.append(p)
    alg = run(PredictStrategy(pred, U, 10.0, candidates=cands), act, U, 10.0)
    opt = opt_report(act, U, 10.0, candidates=cands)
    diag = eq3_diagnostic(alg, opt, pair)

    # naive recomputation from raw schedules and ledgers
    moves = sorted(
        set(alg.schedule.moves_at()) | set(opt.schedule.moves_at())
    )
    bps = [0] + moves + ([len(pair)] if (not moves or moves[-1] != len(pair)) else [])
    assert list(diag.breakpoints) == bps
    rhs = 0.0
    flags = pair.mismatch_flags()
    for a, b in zip(bps, bps[1:]):
        m = int(flags[a:b].sum())
        da = alg.ledger.prefix[b] - alg.ledger.prefix[a]
        do = opt.ledger.prefix[b] - opt.ledger.prefix[a]
        cm = alg.ledger.move[a:b].sum() + opt.ledger.move[a:b].sum()
        rhs += m * (da + do - cm) / (b - a)
    assert diag.rhs == pytest.approx(2 * rhs, rel=1e-12)
    assert diag.holds


def test_eq3_bound_holds_on_random_noisy_instances():
    rng = np.random.default_rng(21)
    for trial in range(25):
        k = int(rng.integers(2, 5))
        n = int(rng.integers(30, 120))
        D = float(rng.uniform(2, 12))
        pred = RequestSequence(0, tuple(int(v) for v in rng.integers(0, k, n)))
        act = bounded_flip(pred, 0.1, 1.0, D, seed=trial, pool=list(range(k)))
        pair = PredictionPair(actual=act, predicted=pred)
        cands = candidate_points(pred)
        for p in act.items:
            if p not in cands:
                cands.append(p)
        alg = run(PredictStrategy(pred, U, D, candidates=cands), act, U, D)
        diag = eq3_diagnostic(alg, opt_report(act, U, D, candidates=cands), pair)
        assert diag.holds


def test_eq3_shape_mismatch():
    s = RequestSequence(0, (1, 1))
    pair = PredictionPair(actual=s, predicted=s)
    alg = run(PredictStrategy(s, U, 2.0), s, U, 2.0)
    short = RequestSequence(0, (1,))
    opt = opt_report(short, U, 2.0)
    with pytest.raises(ValueError, match="horizon"):
        eq3_diagnostic(alg, opt, pair)
