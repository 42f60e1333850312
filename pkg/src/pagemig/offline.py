"""Offline optimum by dynamic programming over a candidate point set.

Page positions range over {p_0} union the requested points (optionally all
points of a finite explicit metric). On finite metrics with full expansion
this is the exact optimum; in the plane it is a restricted optimum, since a
non-request point (e.g. the center of a star) can be strictly better. All
competitive ratios in this package compare against this restricted optimum
consistently.

The recurrence is C[t][p] = min_{p'} (C[t-1][p'] + D*d(p', p)) + d(p, s_t),
with p != p' permitted only when t is in move_times. Ties prefer staying
put, then the lowest candidate index, which makes schedules deterministic.
Costs accumulate per step as ((C + move) + serve), the same order the
brute-force oracle uses, so optimal costs agree exactly, not just within
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metric import ExplicitMetric, cross_distances, pairwise_distances
from .sequences import RequestSequence
from .simulation import Schedule, cost_of

BRUTE_FORCE_LIMIT = 10**7


@dataclass(frozen=True)
class SolveResult:
    schedule: Schedule
    total_cost: float
    move_cost: float
    serve_cost: float


def candidate_points(seq: RequestSequence, metric=None, expand_explicit: bool = False) -> list:
    """Candidate page positions: p_0 first, then requests in first-appearance order.

    With expand_explicit and an explicit metric, all k labels are included
    (p_0 first, the rest in ascending label order).
    """
    if expand_explicit:
        if not isinstance(metric, ExplicitMetric):
            raise ValueError("expand_explicit requires an explicit metric")
        return [seq.start] + [p for p in metric.points() if p != seq.start]
    out = [seq.start]
    seen = {seq.start}
    for p in seq.items:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _normalize_move_times(move_times, n: int):
    if move_times is None:
        return None
    times = set(int(t) for t in move_times)
    bad = [t for t in times if not 1 <= t <= n]
    if bad and n > 0:
        raise ValueError(f"move times {sorted(bad)} outside 1..{n}")
    return times


def multiples_move_times(n: int, period: int) -> set[int]:
    """{t in 1..n : t mod period == 0} - the move schedule of the lazy solver."""
    if period < 1:
        raise ValueError("period must be >= 1")
    return set(range(period, n + 1, period))


def _dp_tables(seq: RequestSequence, metric, D: float, candidates, move_times):
    """Cost table (n+1, k) and parent table (n, k); start has cost 0."""
    pos = list(candidates)
    if seq.start not in pos:
        raise ValueError("start position p_0 must be among the candidates")
    n = len(seq)
    k = len(pos)
    start_idx = pos.index(seq.start)
    move_times = _normalize_move_times(move_times, n)

    dmove = D * pairwise_distances(metric, pos)
    serve = cross_distances(metric, list(seq.items), pos) if n else np.zeros((0, k))

    costs = np.full((n + 1, k), np.inf)
    costs[0, start_idx] = 0.0
    parents = np.empty((n, k), dtype=np.int64)
    idx = np.arange(k)
    c = costs[0]
    for t in range(1, n + 1):
        if move_times is None or t in move_times:
            tot = c[:, None] + dmove  # tot[p', p]
            parent = np.argmin(tot, axis=0)
            best = tot[parent, idx]
            stay = tot[idx, idx]
            at_home = stay == best  # prefer staying on exact ties
            parent[at_home] = idx[at_home]
            c = best + serve[t - 1]
        else:
            parent = idx.copy()
            c = (c + 0.0) + serve[t - 1]
        costs[t] = c
        parents[t - 1] = parent
    return pos, start_idx, costs, parents


def _reconstruct(pos, costs, parents, end_idx) -> Schedule:
    n = parents.shape[0]
    idxs = [0] * (n + 1)
    idxs[n] = end_idx
    for t in range(n, 0, -1):
        idxs[t - 1] = int(parents[t - 1, idxs[t]])
    return Schedule(tuple(pos[i] for i in idxs))


def _result(schedule: Schedule, seq, metric, D, total: float) -> SolveResult:
    ledger = cost_of(schedule, seq, metric, D)
    return SolveResult(
        schedule=schedule,
        total_cost=total,
        move_cost=ledger.move_cost,
        serve_cost=ledger.serve_cost,
    )


def optimal_schedule(
    seq: RequestSequence,
    metric,
    D: float,
    candidates=None,
    move_times=None,
) -> SolveResult:
    """Minimum-cost schedule over the candidate set.

    move_times restricts the steps at which the page may move (absent =
    every step); this realizes the lazy solver as a DP restriction.
    """
    if candidates is None:
        candidates = candidate_points(seq)
    pos, start_idx, costs, parents = _dp_tables(seq, metric, D, candidates, move_times)
    n = len(seq)
    if n == 0:
        return _result(Schedule((seq.start,)), seq, metric, D, 0.0)
    end_idx = int(np.argmin(costs[n]))
    schedule = _reconstruct(pos, costs, parents, end_idx)
    return _result(schedule, seq, metric, D, float(costs[n, end_idx]))


def constrained_optimal(
    seq: RequestSequence,
    metric,
    D: float,
    t: int,
    end,
    candidates=None,
    move_times=None,
) -> float:
    """Minimum cost over schedules for s_[1,t] that finish at `end`.

    t = 0 is only satisfiable at p_0 (moves happen on requests); positions
    unreachable under move_times come back as inf.
    """
    if candidates is None:
        candidates = candidate_points(seq)
    pos = list(candidates)
    if end not in pos:
        raise ValueError(f"end position {end!r} is not a candidate")
    if not 0 <= t <= len(seq):
        raise IndexError(f"t={t} outside 0..{len(seq)}")
    if t == 0:
        if end != seq.start:
            raise ValueError("at t=0 the page has not moved; only p_0 is reachable")
        return 0.0
    _, _, costs, _ = _dp_tables(seq, metric, D, pos, move_times)
    return float(costs[t, pos.index(end)])


def brute_force_schedule(seq: RequestSequence, metric, D: float, candidates=None) -> SolveResult:
    """Exact optimum by exhaustive enumeration; verification oracle.

    Guards against instances with more than BRUTE_FORCE_LIMIT candidate
    schedules. Costs accumulate in the same per-step order as the DP.
    """
    if candidates is None:
        candidates = candidate_points(seq)
    pos = list(candidates)
    if seq.start not in pos:
        raise ValueError("start position p_0 must be among the candidates")
    n = len(seq)
    k = len(pos)
    if n == 0:
        return _result(Schedule((seq.start,)), seq, metric, D, 0.0)
    total_schedules = k**n
    if total_schedules > BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"{k}^{n} = {total_schedules} schedules exceeds the brute-force limit"
        )
    start_idx = pos.index(seq.start)
    dmove = D * pairwise_distances(metric, pos)
    serve = cross_distances(metric, list(seq.items), pos)

    best_cost = np.inf
    best_row_id = -1
    powers = k ** np.arange(n - 1, -1, -1, dtype=np.int64)
    chunk = 1 << 16
    for lo in range(0, total_schedules, chunk):
        hi = min(lo + chunk, total_schedules)
        rows = (np.arange(lo, hi, dtype=np.int64)[:, None] // powers) % k
        cost = np.zeros(hi - lo)
        prev = np.full(hi - lo, start_idx)
        for t in range(n):
            cur = rows[:, t]
            cost = (cost + dmove[prev, cur]) + serve[t, cur]
            prev = cur
        local = int(np.argmin(cost))
        if cost[local] < best_cost:
            best_cost = float(cost[local])
            best_row_id = lo + local
    digits = (best_row_id // powers) % k
    schedule = Schedule((seq.start,) + tuple(pos[int(i)] for i in digits))
    return _result(schedule, seq, metric, D, best_cost)
