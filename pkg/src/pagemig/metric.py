"""Metric spaces the page lives in: uniform, Euclidean plane, explicit matrix.

Points are plain Python values: hashable labels for uniform metrics, integer
labels 0..k-1 for explicit metrics, and (x, y) float tuples for the plane.
Metrics are immutable after construction and safe to share across workers.

All cost comparisons elsewhere in the package use COST_ATOL as the absolute
tolerance; distances themselves are ordinary doubles.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

COST_ATOL = 1e-9

Point = object  # label (hashable) or (x, y) tuple, depending on the metric


@dataclass(frozen=True)
class MetricViolation:
    """First failed metric axiom and the indices witnessing it."""

    axiom: str  # identity | positivity | symmetry | triangle
    witness: tuple

    def __str__(self):
        return f"{self.axiom} violated at {self.witness}"


class UniformMetric:
    """d(p, q) = 1 for p != q, over arbitrary hashable labels."""

    kind = "uniform"

    def distance(self, p, q) -> float:
        return 0.0 if p == q else 1.0

    def check_point(self, p) -> None:
        if isinstance(p, (list, np.ndarray)):
            raise ValueError("uniform metric points must be hashable labels")

    def descriptor(self) -> dict:
        return {"kind": self.kind}

    def __eq__(self, other):
        return isinstance(other, UniformMetric)

    def __hash__(self):
        return hash(self.kind)


class EuclideanPlane:
    """Standard Euclidean distance over (x, y) tuples.

    Distance is computed as sqrt(dx*dx + dy*dy) in every code path (scalar
    and vectorized) so that identical inputs give bit-identical results.
    """

    kind = "euclidean2d"

    def distance(self, p, q) -> float:
        dx = p[0] - q[0]
        dy = p[1] - q[1]
        return math.sqrt(dx * dx + dy * dy)

    def check_point(self, p) -> None:
        if not (isinstance(p, tuple) and len(p) == 2):
            raise ValueError(f"plane points must be (x, y) tuples, got {p!r}")

    def descriptor(self) -> dict:
        return {"kind": self.kind}

    def __eq__(self, other):
        return isinstance(other, EuclideanPlane)

    def __hash__(self):
        return hash(self.kind)


class ExplicitMetric:
    """Finite metric given by a k x k distance matrix over labels 0..k-1.

    The matrix is validated against all four metric axioms at construction.
    """

    kind = "explicit"

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=float)
        violation = validate_explicit(m)
        if violation is not None:
            raise ValueError(f"not a metric: {violation}")
        m.setflags(write=False)
        self.matrix = m
        self.n_points = m.shape[0]

    def distance(self, p, q) -> float:
        self.check_point(p)
        self.check_point(q)
        return float(self.matrix[p, q])

    def check_point(self, p) -> None:
        if not isinstance(p, (int, np.integer)) or not 0 <= p < self.n_points:
            raise ValueError(f"unknown label {p!r} for explicit metric of {self.n_points} points")

    def points(self):
        return list(range(self.n_points))

    def descriptor(self) -> dict:
        return {"kind": self.kind, "points": self.n_points, "matrix": self.matrix.tolist()}

    def __eq__(self, other):
        return isinstance(other, ExplicitMetric) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.kind, self.matrix.tobytes()))


Metric = UniformMetric | EuclideanPlane | ExplicitMetric


def distance(metric, p, q) -> float:
    """Distance between two points, after validating them for the metric."""
    metric.check_point(p)
    metric.check_point(q)
    return metric.distance(p, q)


def validate_explicit(matrix) -> MetricViolation | None:
    """Check a square matrix against the metric axioms.

    Returns None when all axioms hold, otherwise the first violation found
    (identity, then positivity, then symmetry, then triangle inequality).
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {m.shape}")
    k = m.shape[0]
    for i in range(k):
        if m[i, i] != 0.0:
            return MetricViolation("identity", (i,))
    for i in range(k):
        for j in range(k):
            if i != j and not m[i, j] > 0.0:
                return MetricViolation("positivity", (i, j))
    for i in range(k):
        for j in range(i + 1, k):
            if m[i, j] != m[j, i]:
                return MetricViolation("symmetry", (i, j))
    for i in range(k):
        for j in range(k):
            for l in range(k):
                if m[i, j] > m[i, l] + m[l, j]:
                    return MetricViolation("triangle", (i, l, j))
    return None


def repaired_explicit(matrix) -> np.ndarray:
    """Turn an arbitrary nonnegative square matrix into a valid metric.

    Symmetrize by averaging, zero the diagonal, lift non-positive
    off-diagonal entries to the smallest positive entry (or 1), then take
    the shortest-path closure to restore the triangle inequality.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {m.shape}")
    m = np.abs(0.5 * (m + m.T))
    np.fill_diagonal(m, 0.0)
    off = m[~np.eye(m.shape[0], dtype=bool)]
    floor = off[off > 0].min() if np.any(off > 0) else 1.0
    m = np.maximum(m, floor)
    np.fill_diagonal(m, 0.0)
    # Floyd-Warshall closure, iterated to a fixpoint: a single pass can be
    # off by an ulp when later updates shrink an intermediate leg, and the
    # fixpoint condition is exactly the triangle check the validator runs.
    while True:
        prev = m
        for l in range(m.shape[0]):
            m = np.minimum(m, m[:, l : l + 1] + m[l : l + 1, :])
        if np.array_equal(prev, m):
            return m


def cross_distances(metric, rows, cols) -> np.ndarray:
    """len(rows) x len(cols) distance matrix, vectorized per metric kind.

    Matches the scalar distance() bit for bit.
    """
    if isinstance(metric, EuclideanPlane):
        a = np.asarray(rows, dtype=float)
        b = np.asarray(cols, dtype=float)
        dx = a[:, None, 0] - b[None, :, 0]
        dy = a[:, None, 1] - b[None, :, 1]
        return np.sqrt(dx * dx + dy * dy)
    if isinstance(metric, ExplicitMetric):
        ri = np.asarray(rows, dtype=int)
        ci = np.asarray(cols, dtype=int)
        for p in rows:
            metric.check_point(int(p))
        for p in cols:
            metric.check_point(int(p))
        return metric.matrix[np.ix_(ri, ci)].astype(float)
    # uniform: labels may be arbitrary hashables, compare pairwise
    out = np.ones((len(rows), len(cols)))
    col_index = {}
    for j, q in enumerate(cols):
        col_index.setdefault(q, []).append(j)
    for i, p in enumerate(rows):
        for j in col_index.get(p, ()):
            out[i, j] = 0.0
    return out


def pairwise_distances(metric, points) -> np.ndarray:
    return cross_distances(metric, points, points)


def metric_from_descriptor(desc: dict):
    """Inverse of Metric.descriptor(); bare explicit files also accepted."""
    kind = desc.get("kind", "explicit" if "matrix" in desc else None)
    if kind == "uniform":
        return UniformMetric()
    if kind == "euclidean2d":
        return EuclideanPlane()
    if kind == "explicit":
        metric = ExplicitMetric(desc["matrix"])
        declared = desc.get("points")
        if declared is not None and declared != metric.n_points:
            raise ValueError(f"header says {declared} points but matrix has {metric.n_points}")
        return metric
    raise ValueError(f"unknown metric descriptor {desc!r}")


def load_explicit_metric(path) -> ExplicitMetric:
    """Load an explicit metric from a JSON file {"points": k, "matrix": [[...]]}."""
    with open(path) as fh:
        desc = json.load(fh)
    metric = metric_from_descriptor(desc)
    if not isinstance(metric, ExplicitMetric):
        raise ValueError(f"{path} does not describe an explicit metric")
    return metric
