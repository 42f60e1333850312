"""The run loop and cost accounting shared by every algorithm.

One step charges the move first, then the serve: at time t the strategy
commits its next position a_t after seeing s_t, pays D * d(a_{t-1}, a_t),
and then serves the request for d(a_t, s_t). Some page migration
formulations serve before moving; everything here is move-then-serve.

Prefix costs accumulate per step as ((C + move) + serve) so the ledger
total is bit-identical to the DP optimum's objective for the same
schedule, which is what makes exact solver-vs-brute-force comparisons
possible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .metric import distance
from .sequences import PredictionPair, RequestSequence, mismatches
from .seqio import point_to_json


@dataclass(frozen=True)
class Schedule:
    """Page positions a_0..a_n; a_0 is the start position."""

    positions: tuple

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(self.positions))

    def __len__(self):
        return len(self.positions)

    def moves_at(self) -> list[int]:
        """Steps t >= 1 where a_t != a_{t-1}."""
        return [
            t
            for t in range(1, len(self.positions))
            if self.positions[t] != self.positions[t - 1]
        ]


class CostLedger:
    """Per-step move and serve costs with sequential prefix sums."""

    def __init__(self, move: np.ndarray, serve: np.ndarray):
        if move.shape != serve.shape:
            raise ValueError("move and serve cost arrays must align")
        self.move = move
        self.serve = serve
        prefix = np.empty(len(move) + 1)
        prefix[0] = 0.0
        c = 0.0
        for t in range(len(move)):
            c = (c + move[t]) + serve[t]
            prefix[t + 1] = c
        self.prefix = prefix

    def __len__(self):
        return len(self.move)

    @property
    def total_cost(self) -> float:
        return float(self.prefix[-1])

    @property
    def move_cost(self) -> float:
        return math.fsum(self.move)

    @property
    def serve_cost(self) -> float:
        return math.fsum(self.serve)

    def interval(self, t1: int, t2: int) -> float:
        """Cost paid during steps t1+1 .. t2, i.e. C_{t1,t2} = C_{t2} - C_{t1}."""
        if not 0 <= t1 <= t2 <= len(self.move):
            raise IndexError(f"interval ({t1}, {t2}] outside 0..{len(self.move)}")
        return float(self.prefix[t2] - self.prefix[t1])


def cost_of(schedule: Schedule, s: RequestSequence, metric, D: float) -> CostLedger:
    """Recompute the ledger of a schedule from positions alone."""
    n = len(s)
    if len(schedule) != n + 1:
        raise ValueError(f"schedule has {len(schedule)} positions, expected {n + 1}")
    move = np.empty(n)
    serve = np.empty(n)
    pos = schedule.positions
    for t in range(1, n + 1):
        move[t - 1] = D * distance(metric, pos[t - 1], pos[t])
        serve[t - 1] = distance(metric, pos[t], s.at(t))
    return CostLedger(move, serve)


@dataclass(frozen=True)
class RunReport:
    """Everything needed to replay and audit one simulation run."""

    strategy: str
    params: dict
    seed: int | None
    D: float
    schedule: Schedule
    ledger: CostLedger
    switch_time: int | None = None
    violation_time: int | None = None

    @property
    def total_cost(self) -> float:
        return self.ledger.total_cost

    def to_json(self) -> str:
        return json.dumps(
            {
                "strategy": self.strategy,
                "params": self.params,
                "seed": self.seed,
                "D": self.D,
                "cost": self.ledger.total_cost,
                "move_cost": self.ledger.move_cost,
                "serve_cost": self.ledger.serve_cost,
                "switch_time": self.switch_time,
                "violation_time": self.violation_time,
                "positions": [point_to_json(p) for p in self.schedule.positions],
            }
        )


def run(strategy, s: RequestSequence, metric, D: float) -> RunReport:
    """Drive a fresh strategy over the actual sequence and account costs."""
    if getattr(strategy, "steps_taken", 0) != 0:
        raise ValueError("strategy has already been stepped; strategies are single-use")
    positions = [s.start]
    for t in range(1, len(s) + 1):
        positions.append(strategy.step(t, s.at(t)))
    schedule = Schedule(tuple(positions))
    ledger = cost_of(schedule, s, metric, D)
    return RunReport(
        strategy=getattr(strategy, "name", type(strategy).__name__),
        params=dict(getattr(strategy, "params", lambda: {})()),
        seed=getattr(strategy, "seed", None),
        D=D,
        schedule=schedule,
        ledger=ledger,
        switch_time=getattr(strategy, "switch_time", None),
        violation_time=getattr(strategy, "violation_time", None),
    )


@dataclass(frozen=True)
class BoundDiagnostic:
    """Both sides of the mismatch-weighted upper bound on A_n - O_n."""

    lhs: float
    rhs: float
    breakpoints: tuple
    terms: tuple = field(repr=False, default=())

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + 1e-6


def eq3_diagnostic(alg_report: RunReport, opt_report: RunReport, pair: PredictionPair) -> BoundDiagnostic:
    """Empirical check of the interval bound relating ALG's excess to mismatches.

    Breakpoints are the steps where either schedule moves, always including
    t_0 = 0 and a closing breakpoint at n. For each interval (t_{i-1}, t_i]
    the term is m(I) * (dA + dO - c_move) / |I|; the bound asserts
    A_n - O_n <= 2 * sum of terms. Intervals without mismatches contribute
    nothing, so the synthetic final breakpoint is harmless.
    """
    n = len(pair)
    if len(alg_report.ledger) != n or len(opt_report.ledger) != n:
        raise ValueError("reports and prediction pair cover different horizons")
    a_led, o_led = alg_report.ledger, opt_report.ledger
    lhs = a_led.total_cost - o_led.total_cost

    move_steps = sorted(set(alg_report.schedule.moves_at()) | set(opt_report.schedule.moves_at()))
    breakpoints = [0] + move_steps
    if n > 0 and breakpoints[-1] != n:
        breakpoints.append(n)

    terms = []
    rhs = 0.0
    for t_prev, t_cur in zip(breakpoints, breakpoints[1:]):
        m_i = mismatches(pair, t_prev + 1, t_cur)
        if m_i == 0:
            terms.append(0.0)
            continue
        d_cost = a_led.interval(t_prev, t_cur) + o_led.interval(t_prev, t_cur)
        c_move = float(
            a_led.move[t_prev:t_cur].sum() + o_led.move[t_prev:t_cur].sum()
        )
        term = m_i * (d_cost - c_move) / (t_cur - t_prev)
        terms.append(term)
        rhs += term
    rhs *= 2.0
    return BoundDiagnostic(lhs=lhs, rhs=rhs, breakpoints=tuple(breakpoints), terms=tuple(terms))
