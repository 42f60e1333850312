"""Render comparison panels and trajectory overlays from harness output.

This package is deliberately decoupled from the simulation code: it reads
only the documented results.csv schema (dataset, panel, vary, x, strategy,
mean_total, ...) and the JSON-lines sequence files, so either side can be
rebuilt independently. Rendering is a pure function of the input files:
identical CSVs produce structurally identical figures.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

plt.rcParams["svg.fonttype"] = "none"  # keep SVG text assertable as text
plt.rcParams["svg.hashsalt"] = "pagemig-figures"  # stable element ids run to run

REQUIRED_COLUMNS = {"dataset", "panel", "vary", "x", "strategy", "mean_total"}

DISPLAY_NAMES = {
    "predict": "Predict",
    "opt": "Opt",
    "coinflip": "Online",
    "robust": "Robust",
    "lazy_predict": "Lazy Predict",
    "delayed_predict": "Delayed Predict",
}

SAVE_KW = {"metadata": {"Date": None}}  # keep SVG output byte-stable


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    out_dir: str
    formats: tuple = ("png", "svg")
    columns: int = 2
    dpi: int = 120


@dataclass
class Panel:
    panel_id: int
    vary: str
    fixed_label: str
    series: dict = field(default_factory=dict)  # strategy -> list[(x, y)]


def display_name(strategy: str) -> str:
    return DISPLAY_NAMES.get(strategy, strategy)


def read_rows(csv_path):
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = set(reader.fieldnames or ())
        missing = REQUIRED_COLUMNS - header
        if missing:
            raise ValueError(f"results CSV lacks columns {sorted(missing)}")
        return list(reader)


def _fixed_label(row) -> str:
    vary = row["vary"]
    parts = []
    for axis in ("D", "sigma", "q"):
        if axis == vary or axis not in row or row[axis] == "":
            continue
        value = float(row[axis])
        if axis != "D" and value == 0.0:
            continue
        parts.append(f"{axis}={value:g}")
    fixed = ", ".join(parts)
    return f"fixed {fixed}, varying {vary}" if fixed else f"varying {vary}"


def collect_panels(rows):
    """dataset -> ordered list of Panel, series in CSV appearance order."""
    datasets: dict = {}
    for row in rows:
        panel_key = int(row["panel"])
        panels = datasets.setdefault(row["dataset"], {})
        panel = panels.get(panel_key)
        if panel is None:
            panel = Panel(panel_key, row["vary"], _fixed_label(row))
            panels[panel_key] = panel
        panel.series.setdefault(row["strategy"], []).append(
            (float(row["x"]), float(row["mean_total"]))
        )
    return {
        ds: [panels[k] for k in sorted(panels)] for ds, panels in datasets.items()
    }


def render_comparison(spec: FigureSpec) -> list[Path]:
    """One figure per dataset; one line per strategy per panel."""
    rows = read_rows(spec.csv_path)
    out_dir = Path(spec.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for dataset, panels in collect_panels(rows).items():
        ncols = min(spec.columns, len(panels))
        nrows = (len(panels) + ncols - 1) // ncols
        fig, axes = plt.subplots(
            nrows, ncols, figsize=(5.2 * ncols, 3.8 * nrows), squeeze=False
        )
        for ax, panel in zip(axes.flat, panels):
            for strategy, points in panel.series.items():
                points = sorted(points)
                ax.plot(
                    [p[0] for p in points],
                    [p[1] for p in points],
                    marker="o",
                    label=display_name(strategy),
                )
            ax.set_xlabel(panel.vary)
            ax.set_ylabel("total cost")
            ax.set_title(panel.fixed_label, fontsize=10)
            ax.legend()
        for ax in axes.flat[len(panels):]:
            ax.set_visible(False)
        fig.suptitle(f"{dataset} dataset")
        fig.tight_layout()
        for fmt in spec.formats:
            path = out_dir / f"comparison_{dataset}.{fmt}"
            fig.savefig(path, dpi=spec.dpi, **SAVE_KW)
            written.append(path)
        plt.close(fig)
    return written


def read_trajectory(path) -> list[tuple]:
    """Planar points from a sequence .jsonl file (header line optional)."""
    points = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "t" not in obj:
                continue  # header line
            p = obj["point"]
            if not (isinstance(p, list) and len(p) == 2):
                raise ValueError(f"{path}: trajectory plots need planar [x, y] points, got {p!r}")
            points.append((float(p[0]), float(p[1])))
    return points


def render_trajectory(predicted_path, actual_path, out_path) -> list[Path]:
    """Overlay the predicted (blue) and actual (red) planar paths."""
    predicted = read_trajectory(predicted_path)
    actual = read_trajectory(actual_path)
    fig, ax = plt.subplots(figsize=(6.4, 5.6))
    if predicted:
        ax.plot(*zip(*predicted), color="tab:blue", linewidth=1.0, label="predicted")
    else:
        ax.plot([], [], color="tab:blue", label="predicted")
    if actual:
        ax.plot(*zip(*actual), color="tab:red", linewidth=1.0, label="actual")
    else:
        ax.plot([], [], color="tab:red", label="actual")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend()
    fig.tight_layout()
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    written = []
    if out_path.suffix:
        fig.savefig(out_path, **SAVE_KW)
        written.append(out_path)
    else:
        for fmt in ("png", "svg"):
            path = out_path.with_suffix(f".{fmt}")
            fig.savefig(path, **SAVE_KW)
            written.append(path)
    plt.close(fig)
    return written
