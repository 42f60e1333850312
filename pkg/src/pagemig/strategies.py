"""Online decision procedures.

Every strategy is a single-owner mutable object driven by the simulation
loop: step(t, request) is called once per t = 1..n in order, sees the
actual request, and commits the next page position. Wrapping strategies
(lazy, delayed, robust) run their inner strategy as a shadow on the same
request stream.

The coin-flip baseline serves each request remotely and then flips a coin
to decide whether to move to it. Since this package charges moves before
serves within a step, a coin fired at step t takes effect at step t+1:
the costs are identical except that a move triggered by the final request
is never executed.
"""

from __future__ import annotations

import math
import random

from .metric import distance
from .offline import optimal_schedule
from .rounding import delay_steps, window_size
from .sequences import AssumptionParams, RequestSequence, ViolationDetector


class Strategy:
    """Base class enforcing the step-once-per-t contract."""

    name = "strategy"

    def __init__(self, start):
        self.start = start
        self.position = start
        self.steps_taken = 0
        self.seed = None

    def params(self) -> dict:
        return {}

    def step(self, t: int, request):
        if t != self.steps_taken + 1:
            raise ValueError(
                f"step(t={t}) out of order; strategy has taken {self.steps_taken} steps"
            )
        self.steps_taken = t
        self.position = self._decide(t, request)
        return self.position

    def _decide(self, t, request):
        raise NotImplementedError


class FixedScheduleStrategy(Strategy):
    """Replays a precomputed schedule, ignoring the requests."""

    name = "fixed"

    def __init__(self, schedule):
        positions = tuple(schedule.positions) if hasattr(schedule, "positions") else tuple(schedule)
        super().__init__(positions[0])
        self.plan = positions

    def _decide(self, t, request):
        if t < len(self.plan):
            return self.plan[t]
        return self.plan[-1]


class PredictStrategy(FixedScheduleStrategy):
    """Follow the offline optimum computed on the predicted sequence."""

    name = "predict"

    def __init__(self, predicted: RequestSequence, metric, D, candidates=None, move_times=None):
        solved = optimal_schedule(predicted, metric, D, candidates=candidates, move_times=move_times)
        super().__init__(solved.schedule)
        self.predicted = predicted
        self.solved = solved
        self.D = D
        self._move_times = move_times

    def params(self) -> dict:
        out = {"D": self.D}
        if self._move_times is not None:
            out["restricted_moves"] = len(self._move_times)
        return out


class LazyMultiples(Strategy):
    """Move only at multiples of `period`, to the inner strategy's position.

    At each multiple the move is mandatory (free when the inner strategy is
    already here). Total cost is at most (1 + period/D) times the inner
    strategy's cost.
    """

    name = "lazy"

    def __init__(self, inner, period: int):
        if period < 1:
            raise ValueError("period must be >= 1")
        if not isinstance(inner, Strategy):
            inner = FixedScheduleStrategy(inner)
        super().__init__(inner.start)
        self.inner = inner
        self.period = period
        self.seed = inner.seed

    def params(self) -> dict:
        return {"period": self.period, "inner": self.inner.name, **self.inner.params()}

    def _decide(self, t, request):
        inner_pos = self.inner.step(t, request)
        if t % self.period == 0:
            return inner_pos
        return self.position


class DelayedStrategy(Strategy):
    """Occupy the inner strategy's position from `delay` steps ago."""

    name = "delayed"

    def __init__(self, inner, delay: int):
        if delay < 0:
            raise ValueError("delay must be >= 0")
        if not isinstance(inner, Strategy):
            inner = FixedScheduleStrategy(inner)
        super().__init__(inner.start)
        self.inner = inner
        self.delay = delay
        self.seed = inner.seed
        self._history = [inner.start]  # inner positions at times 0..t

    def params(self) -> dict:
        return {"delay": self.delay, "inner": self.inner.name, **self.inner.params()}

    def _decide(self, t, request):
        self._history.append(self.inner.step(t, request))
        return self._history[max(0, t - self.delay)]


class CoinflipStrategy(Strategy):
    """Serve remotely, then move to the request with probability 1/(2D).

    The move takes effect at the next step (see module docstring). With a
    seed the run is fully deterministic; a rigged `rng` object with a
    random() method can force the coin for tests.
    """

    name = "coinflip"

    def __init__(self, start, D: float, seed=None, rng=None):
        if not D > 1:
            raise ValueError("D must exceed 1")
        super().__init__(start)
        self.D = D
        self.move_prob = 1.0 / (2.0 * D)
        self.seed = seed
        self._rng = rng if rng is not None else random.Random(seed)
        self._pending = None

    def params(self) -> dict:
        return {"D": self.D, "move_prob": self.move_prob}

    def _decide(self, t, request):
        pos = self.position if self._pending is None else self._pending
        self._pending = None
        if self._rng.random() < self.move_prob:
            self._pending = request
        return pos


def coinflip_expected_cost(s: RequestSequence, metric, D: float) -> float:
    """Exact expected total cost of CoinflipStrategy on `s`.

    The position distribution evolves independently of costs:
    mu_t = p * delta(s_{t-1}) + (1-p) * mu_{t-1} with p = 1/(2D), so the
    expectation is a deterministic O(n * k) sweep over the support
    {p_0} union requests. Used where sampling would be too noisy (exact
    lower-bound evaluations).
    """
    p = 1.0 / (2.0 * D)
    mu = {s.start: 1.0}
    total = 0.0
    prev_request = None
    for t in range(1, len(s) + 1):
        if prev_request is not None:
            # expected move cost: the coin fired (prob p) and we were elsewhere
            expected_dist = sum(
                w * distance(metric, x, prev_request) for x, w in mu.items()
            )
            total += D * p * expected_dist
            mu = {x: w * (1.0 - p) for x, w in mu.items()}
            mu[prev_request] = mu.get(prev_request, 0.0) + p
        req = s.at(t)
        total += sum(w * distance(metric, x, req) for x, w in mu.items())
        prev_request = req
    return total


class RobustStrategy(Strategy):
    """Delayed prediction-following with a fallback to an online baseline.

    Runs the predicted-optimum schedule behind a delay of ceil(6*q*D)
    steps while feeding every actual request to (a) the sliding-window
    violation detector and (b) a shadow online baseline. At the first
    detected violation it teleports to the baseline's current position and
    follows the baseline from then on. The theoretical guarantee assumes
    q < 1/24; larger q is allowed but unguaranteed.
    """

    name = "robust"

    def __init__(self, predicted: RequestSequence, params: AssumptionParams, online: Strategy, metric, D):
        if online.start != predicted.start:
            raise ValueError("online baseline must share the start position")
        super().__init__(predicted.start)
        self.predicted = predicted
        self.assumption = params
        self.metric = metric
        self.D = D
        self.delay = delay_steps(6.0 * params.q * D)
        self.online = online
        self.delayed = DelayedStrategy(PredictStrategy(predicted, metric, D), self.delay)
        self.detector = ViolationDetector(params.window, params.threshold)
        self.switched = False
        self.switch_time = None
        self.violation_time = None
        self.switch_t_prime = None
        self.seed = online.seed

    def params(self) -> dict:
        return {
            "q": self.assumption.q,
            "epsilon": self.assumption.epsilon,
            "D": self.D,
            "delay": self.delay,
            "window": self.assumption.window,
            "threshold": self.assumption.threshold,
            "online": self.online.name,
        }

    def _decide(self, t, request):
        online_pos = self.online.step(t, request)
        if self.switched:
            return online_pos
        fired = self.detector.observe(request != self.predicted.at(t))
        delayed_pos = self.delayed.step(t, request)
        if fired:
            self.switched = True
            self.switch_time = t
            self.violation_time = t
            # analysis-facing label t' = t - ceil(qD) + 1
            self.switch_t_prime = max(1, t - delay_steps(self.assumption.q * self.D) + 1)
            return online_pos
        return delayed_pos


def make_strategy(name: str, *, predicted=None, metric=None, D=None, start=None, seed=None, **kw):
    """Build a strategy from its harness name and a parameter map.

    Names: predict | lazy_predict | delayed_predict | coinflip | robust.
    """
    if name == "predict":
        return PredictStrategy(predicted, metric, D, move_times=kw.get("move_times"))
    if name == "lazy_predict":
        period = kw.get("period")
        if period is None:
            period = window_size(kw["epsilon"] * D)
        return LazyMultiples(PredictStrategy(predicted, metric, D), int(period))
    if name == "delayed_predict":
        delay = kw.get("delay")
        if delay is None:
            delay = delay_steps(6.0 * kw["q"] * D)
        return DelayedStrategy(PredictStrategy(predicted, metric, D), int(delay))
    if name == "coinflip":
        return CoinflipStrategy(start if start is not None else predicted.start, D, seed=seed)
    if name == "robust":
        params = AssumptionParams(D=D, q=kw["q"], epsilon=kw.get("epsilon", 1.0))
        online = CoinflipStrategy(predicted.start, D, seed=seed)
        return RobustStrategy(predicted, params, online, metric, D)
    raise ValueError(f"unknown strategy {name!r}")
