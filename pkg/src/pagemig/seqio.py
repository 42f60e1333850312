"""On-disk formats for sequences and prediction pairs.

Single sequence: JSON lines; the first line is a header object
{"start": ..., "metric": {...}, "n": ...} and each following line is one
request {"t": i, "point": ...}. Prediction pairs are stored as two
parallel request files plus one shared header:

    <prefix>.header.json
    <prefix>.predicted.jsonl
    <prefix>.actual.jsonl

Points serialize as-is for labels and as [x, y] for plane points.
"""

from __future__ import annotations

import json
from pathlib import Path

from .metric import metric_from_descriptor
from .sequences import PredictionPair, RequestSequence


def point_to_json(p):
    if isinstance(p, tuple):
        return list(p)
    if hasattr(p, "item"):  # numpy scalar
        return p.item()
    return p


def point_from_json(p):
    if isinstance(p, list):
        return tuple(float(x) for x in p)
    return p


def _write_requests(path, seq: RequestSequence, header: dict | None):
    with open(path, "w") as fh:
        if header is not None:
            fh.write(json.dumps(header) + "\n")
        for t, p in enumerate(seq.items, 1):
            fh.write(json.dumps({"t": t, "point": point_to_json(p)}) + "\n")


def _read_requests(path, expect_header: bool):
    header = None
    points = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "t" not in obj:
                if header is not None or points:
                    raise ValueError(f"{path}: stray header line")
                header = obj
                continue
            if obj["t"] != len(points) + 1:
                raise ValueError(f"{path}: request index {obj['t']} out of order")
            points.append(point_from_json(obj["point"]))
    if expect_header and header is None:
        raise ValueError(f"{path}: missing header line")
    return header, points


def write_sequence(path, seq: RequestSequence, metric) -> None:
    header = {"start": point_to_json(seq.start), "metric": metric.descriptor(), "n": len(seq)}
    _write_requests(path, seq, header)


def read_sequence(path):
    """Returns (RequestSequence, Metric)."""
    header, points = _read_requests(path, expect_header=True)
    metric = metric_from_descriptor(header["metric"])
    seq = RequestSequence(point_from_json(header["start"]), tuple(points))
    for p in seq.items:
        metric.check_point(p)
    return seq, metric


def pair_paths(prefix):
    prefix = Path(prefix)
    return (
        prefix.with_name(prefix.name + ".header.json"),
        prefix.with_name(prefix.name + ".predicted.jsonl"),
        prefix.with_name(prefix.name + ".actual.jsonl"),
    )


def write_pair(prefix, pair: PredictionPair, metric) -> None:
    header_path, pred_path, act_path = pair_paths(prefix)
    header = {
        "start": point_to_json(pair.actual.start),
        "metric": metric.descriptor(),
        "n": len(pair),
    }
    header_path.write_text(json.dumps(header, indent=2) + "\n")
    _write_requests(pred_path, pair.predicted, None)
    _write_requests(act_path, pair.actual, None)


def read_pair(prefix):
    """Returns (PredictionPair, Metric)."""
    header_path, pred_path, act_path = pair_paths(prefix)
    header = json.loads(header_path.read_text())
    metric = metric_from_descriptor(header["metric"])
    start = point_from_json(header["start"])
    _, pred_points = _read_requests(pred_path, expect_header=False)
    _, act_points = _read_requests(act_path, expect_header=False)
    pair = PredictionPair(
        actual=RequestSequence(start, tuple(act_points)),
        predicted=RequestSequence(start, tuple(pred_points)),
    )
    for p in pair.actual.items + pair.predicted.items:
        metric.check_point(p)
    return pair, metric
