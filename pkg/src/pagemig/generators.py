"""Synthetic and adversarial instance generators.

All generators are pure functions of their parameters and seed. Planar
processes follow the two synthetic datasets used in the experiments (a
deterministic line and a 2-D Brownian motion), with i.i.d. Gaussian noise
turning the predicted sequence into the actual one.

bounded_flip is the constructive counterpart of the error-spread
assumption: it flips at most floor(q*W) indices in each aligned block of
length W = round(eps*D), which guarantees at most 2*floor(q*W) mismatches
in an arbitrary window; its output therefore always passes the checker at
rate 2q. Callers wanting the checker to hold at rate q should construct
with q/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rounding import round_half_up, threshold_count, window_size
from .sequences import PredictionPair, RequestSequence


def line_process(n: int) -> RequestSequence:
    """Predicted t-th point is (t, 0); the page starts at the origin."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return RequestSequence((0.0, 0.0), tuple((float(t), 0.0) for t in range(1, n + 1)))


def brownian_process(n: int, seed) -> RequestSequence:
    """2-D random walk with i.i.d. standard normal increments from (0, 0)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = np.random.default_rng(seed)
    steps = rng.standard_normal((n, 2))
    path = np.cumsum(steps, axis=0)
    return RequestSequence((0.0, 0.0), tuple((float(x), float(y)) for x, y in path))


def gaussian_perturb(predicted: RequestSequence, sigma: float, seed) -> RequestSequence:
    """Actual sequence: each predicted point plus i.i.d. N(0, sigma^2) per coordinate."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    for p in (predicted.start,) + predicted.items[:1]:
        if not (isinstance(p, tuple) and len(p) == 2):
            raise ValueError("gaussian_perturb requires planar sequences")
    if sigma == 0.0 or len(predicted) == 0:
        return RequestSequence(predicted.start, predicted.items)
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, sigma, size=(len(predicted), 2))
    items = tuple(
        (p[0] + dx, p[1] + dy) for p, (dx, dy) in zip(predicted.items, noise)
    )
    return RequestSequence(predicted.start, items)


def bounded_flip(
    predicted: RequestSequence,
    q: float,
    epsilon: float,
    D: float,
    seed,
    pool=None,
) -> RequestSequence:
    """Flip at most floor(q*W) indices per aligned block of W = round(eps*D).

    Flipped requests are replaced by a different point drawn uniformly from
    `pool` (default: the distinct points of the predicted sequence plus the
    start). Passing a pool of far-away points turns this into a stress
    generator.
    """
    if not 0 < q < 1:
        raise ValueError("q must lie in (0, 1)")
    w = window_size(epsilon * D)
    per_block = threshold_count(q * w)
    items = list(predicted.items)
    if per_block == 0 or not items:
        return RequestSequence(predicted.start, tuple(items))
    if pool is None:
        pool = []
        seen = set()
        for p in (predicted.start,) + predicted.items:
            if p not in seen:
                seen.add(p)
                pool.append(p)
    pool = list(pool)
    rng = np.random.default_rng(seed)
    n = len(items)
    for block_start in range(0, n, w):
        block = range(block_start, min(block_start + w, n))
        count = min(per_block, len(block))
        flip_at = rng.choice(len(block), size=count, replace=False)
        for off in flip_at:
            i = block_start + int(off)
            options = [p for p in pool if p != items[i]]
            if options:
                items[i] = options[int(rng.integers(len(options)))]
    return RequestSequence(predicted.start, tuple(items))


def lower_bound_instance(D: float, q: float, branch: str) -> PredictionPair:
    """Two-point uniform-metric instance realizing the 1 + Omega(q) floor.

    The prediction is (1-q)D ones then 2qD zeros from start 0. Branch A
    leaves the actual sequence equal to the prediction; branch B requests
    ones throughout, for (1+q)D steps. The branches share their first
    (1-q)D requests, so no online algorithm can tell them apart before
    that prefix ends.
    """
    ones = round_half_up((1.0 - q) * D)
    zeros = round_half_up(2.0 * q * D)
    if ones < 1 or zeros < 1:
        raise ValueError(
            f"degenerate instance: (1-q)D rounds to {ones}, 2qD rounds to {zeros}; both must be >= 1"
        )
    predicted = RequestSequence(0, (1,) * ones + (0,) * zeros)
    if branch == "A":
        actual = RequestSequence(0, predicted.items)
    elif branch == "B":
        actual = RequestSequence(0, (1,) * (ones + zeros))
    else:
        raise ValueError(f"branch must be 'A' or 'B', got {branch!r}")
    return PredictionPair(actual=actual, predicted=predicted)


def suffix_adversary(n: int, q: float, adversarial: RequestSequence) -> PredictionPair:
    """Prediction is the start repeated n times; the actual sequence ends
    with the adversarial run of length floor(q*n)."""
    suffix_len = int(np.floor(q * n))
    if len(adversarial) != suffix_len:
        raise ValueError(
            f"adversarial run has {len(adversarial)} requests, expected floor(q*n) = {suffix_len}"
        )
    start = adversarial.start
    predicted = RequestSequence(start, (start,) * n)
    actual_items = (start,) * (n - suffix_len) + adversarial.items
    return PredictionPair(
        actual=RequestSequence(start, actual_items), predicted=predicted
    )


@dataclass(frozen=True)
class NoiseModel:
    """Configured noise channel turning a predicted sequence into an actual one."""

    kind: str  # gaussian | bounded_flip
    sigma: float = 0.0
    q: float = 0.0
    epsilon: float = 1.0
    D: float = 2.0

    def apply(self, predicted: RequestSequence, seed) -> RequestSequence:
        if self.kind == "gaussian":
            return gaussian_perturb(predicted, self.sigma, seed)
        if self.kind == "bounded_flip":
            if self.q == 0.0:
                return RequestSequence(predicted.start, predicted.items)
            return bounded_flip(predicted, self.q, self.epsilon, self.D, seed)
        raise ValueError(f"unknown noise kind {self.kind!r}")
