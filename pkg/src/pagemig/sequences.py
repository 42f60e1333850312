"""Request sequences, prediction pairs, and the error-spread checker.

A prediction pair holds the actual sequence s and the predicted sequence
s_hat, aligned index by index (1-based in all public operations, matching
the usual t = 1..n convention). The error-spread condition says every
window of length W contains at most `threshold` mismatches; the online
detector evaluates exactly that predicate one request at a time, so the
batch checker and the in-run violation detector can never disagree.

Windows are arbitrary contiguous windows, not aligned blocks. Windows
ending at t < W are clipped to [1, t]; a clipped window is a subset of a
full one, so the verdict is unchanged for n >= W while detection becomes
possible as soon as the evidence is visible online.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .rounding import round_half_up, threshold_count


@dataclass(frozen=True)
class RequestSequence:
    """Requests s_1..s_n plus the common start position p_0."""

    start: object
    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))

    def __len__(self):
        return len(self.items)

    def at(self, t: int):
        """1-based access: at(1) is the first request."""
        if not 1 <= t <= len(self.items):
            raise IndexError(f"t={t} outside 1..{len(self.items)}")
        return self.items[t - 1]


@dataclass(frozen=True)
class PredictionPair:
    """Aligned (actual, predicted) sequences of equal length and start."""

    actual: RequestSequence
    predicted: RequestSequence

    def __post_init__(self):
        if len(self.actual) != len(self.predicted):
            raise ValueError(
                f"sequence lengths differ: {len(self.actual)} vs {len(self.predicted)}"
            )
        if self.actual.start != self.predicted.start:
            raise ValueError("actual and predicted sequences must share the start point")
        flags = np.fromiter(
            (a != p for a, p in zip(self.actual.items, self.predicted.items)),
            dtype=bool,
            count=len(self.actual),
        )
        prefix = np.zeros(len(flags) + 1, dtype=np.int64)
        np.cumsum(flags, out=prefix[1:])
        object.__setattr__(self, "_flags", flags)
        object.__setattr__(self, "_prefix", prefix)

    def __len__(self):
        return len(self.actual)

    def mismatch_flags(self) -> np.ndarray:
        return self._flags


@dataclass(frozen=True)
class AssumptionParams:
    """Move-cost factor D, error rate q, window fraction epsilon.

    window = round(eps * D) clamped to >= 1, threshold = floor(q * window).
    """

    D: float
    q: float
    epsilon: float = 1.0

    def __post_init__(self):
        if not self.D > 1:
            raise ValueError(f"D must exceed 1, got {self.D}")
        if not 0 < self.q < 1:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        if not 0 < self.epsilon <= 1:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")

    @property
    def window(self) -> int:
        return max(1, round_half_up(self.epsilon * self.D))

    @property
    def threshold(self) -> int:
        return threshold_count(self.q * self.window)


@dataclass(frozen=True)
class AssumptionVerdict:
    holds: bool
    violated_at: int | None = None

    def __str__(self):
        return "holds" if self.holds else f"violated(at={self.violated_at})"


class ViolationDetector:
    """Online sliding-window mismatch counter; single-owner mutable cursor.

    observe() is fed one mismatch indicator per request, in order, and
    returns True exactly once: at the first t whose (clipped) window of
    length `window` exceeds `threshold`.
    """

    def __init__(self, window: int, threshold: int):
        if window < 1:
            raise ValueError("window must be >= 1")
        if threshold < 0:
            raise ValueError("threshold must be >= 0")
        self.window = window
        self.threshold = threshold
        self.t = 0
        self.fired_at = None
        self._recent = deque(maxlen=window)
        self._count = 0

    def observe(self, is_mismatch: bool) -> bool:
        self.t += 1
        if len(self._recent) == self.window:
            self._count -= self._recent[0]
        self._recent.append(1 if is_mismatch else 0)
        self._count += self._recent[-1]
        if self.fired_at is None and self._count > self.threshold:
            self.fired_at = self.t
            return True
        return False


def mismatches(pair: PredictionPair, i: int, j: int) -> int:
    """Number of indices t in [i, j] with s_t != s_hat_t."""
    n = len(pair)
    if not 1 <= i <= j <= n:
        raise IndexError(f"interval [{i}, {j}] outside 1..{n}")
    return int(pair._prefix[j] - pair._prefix[i - 1])


def check_assumption(pair: PredictionPair, params: AssumptionParams) -> AssumptionVerdict:
    """Does every length-W window keep its mismatch count within threshold?

    The verdict is computed by the same detector the robust strategy runs
    online; on violation, violated_at is the first request index whose
    window already exceeds the budget.
    """
    detector = ViolationDetector(params.window, params.threshold)
    for flag in pair.mismatch_flags():
        if detector.observe(bool(flag)):
            return AssumptionVerdict(False, detector.fired_at)
    return AssumptionVerdict(True)


def max_window_density(pair: PredictionPair, length: int) -> float:
    """max over intervals I of length `length` of mismatches(I) / length."""
    n = len(pair)
    if not 1 <= length <= n:
        raise IndexError(f"window length {length} outside 1..{n}")
    prefix = pair._prefix
    window_counts = prefix[length:] - prefix[:-length]
    return float(window_counts.max()) / length
