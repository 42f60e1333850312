"""A10: render the comparison CSV produced by the experiment harness and
assert the figure structure (panel counts, series counts, legend labels).

The harness is driven through its CLI only; this package never imports it.
"""

import json
import subprocess
import sys

import pytest

from pagemig_figures import FigureSpec, inspect_svg, render_comparison, render_trajectory

HARNESS = [sys.executable, "-m", "pagemig.cli"]

A9_STYLE_CONFIG = {
    "master_seed": 1010,
    "runs": 5,
    "datasets": [{"name": "brownian", "n": 80}, {"name": "line", "n": 80}],
    "panels": [
        {"vary": "D", "values": [2, 5, 10], "fixed": {"sigma": 0.5}},
        {"vary": "D", "values": [2, 5, 10], "fixed": {"sigma": 2.0}},
        {"vary": "sigma", "values": [0.0, 0.5, 1.0], "fixed": {"D": 2}},
        {"vary": "sigma", "values": [0.0, 0.5, 1.0], "fixed": {"D": 5}},
    ],
    "strategies": ["predict", "opt", "coinflip"],
}


def harness_available() -> bool:
    probe = subprocess.run(
        HARNESS + ["--help"], capture_output=True, text=True
    )
    return probe.returncode == 0


pytestmark = pytest.mark.skipif(
    not harness_available(), reason="experiment harness CLI not installed"
)


@pytest.fixture(scope="module")
def results_csv(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("harness")
    cfg = tmp / "config.json"
    cfg.write_text(json.dumps(A9_STYLE_CONFIG))
    out = tmp / "results"
    proc = subprocess.run(
        HARNESS + ["compare", "--config", str(cfg), "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return out / "results.csv"


def test_a10_comparison_structure(results_csv, tmp_path):
    written = render_comparison(FigureSpec(csv_path=results_csv, out_dir=tmp_path))
    svgs = sorted(p for p in written if p.suffix == ".svg")
    pngs = sorted(p for p in written if p.suffix == ".png")
    assert len(svgs) == 2 and len(pngs) == 2  # one figure per dataset
    for svg in svgs:
        structure = inspect_svg(svg)
        assert structure.panels == 4
        assert all(count == 3 for count in structure.series_per_panel)
        assert structure.labels_everywhere({"Predict", "Opt", "Online"})
    print(f"[A10] PASS: 2 datasets x 4 panels x 3 series, labels Predict/Opt/Online")


def test_a10_trajectory_overlay(tmp_path):
    prefix = tmp_path / "pair"
    proc = subprocess.run(
        HARNESS
        + ["generate", "--kind", "brownian", "--n", "150", "--sigma", "1.0",
           "--seed", "12", "--out", str(prefix)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    written = render_trajectory(
        f"{prefix}.predicted.jsonl", f"{prefix}.actual.jsonl", tmp_path / "traj"
    )
    svg = next(p for p in written if p.suffix == ".svg")
    structure = inspect_svg(svg)
    assert structure.panels == 1
    assert structure.series_per_panel == (2,)
    assert structure.labels_everywhere({"predicted", "actual"})
    print("[A10] PASS: trajectory overlay with predicted/actual legend")
