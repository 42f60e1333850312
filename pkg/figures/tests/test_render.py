import json

import pytest

from pagemig_figures import FigureSpec, inspect_svg, render_comparison, render_trajectory
from pagemig_figures.render import collect_panels, read_rows

CSV_HEADER = (
    "dataset,panel,vary,x,D,sigma,q,n,strategy,runs,replicates,seed,"
    "mean_total,std_total,mean_move,mean_serve,ratio_to_opt,bound,bound_ok"
)


def write_csv(path, rows):
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r['dataset']},{r['panel']},{r['vary']},{r['x']},{r['D']},{r['sigma']},0.0,"
            f"50,{r['strategy']},1,1,0,{r['mean']},0.0,0.0,0.0,,,"
        )
    path.write_text("\n".join(lines) + "\n")


def sweep_rows(dataset="brownian", panel=0, vary="sigma", xs=(0.0, 1.0, 2.0), D=2.0):
    rows = []
    for x in xs:
        sigma = x if vary == "sigma" else 0.5
        d = x if vary == "D" else D
        for strategy, base in (("predict", 10.0), ("opt", 9.0), ("coinflip", 25.0)):
            mean = base if strategy != "predict" or x > 0 else 9.0  # sigma=0 ties opt
            rows.append(
                dict(dataset=dataset, panel=panel, vary=vary, x=x, D=d,
                     sigma=sigma, strategy=strategy, mean=mean + x)
            )
    return rows


def test_missing_columns_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("dataset,panel\nbrownian,0\n")
    with pytest.raises(ValueError, match="lacks columns"):
        read_rows(bad)


def test_single_sweep_point_renders(tmp_path):
    csv_path = tmp_path / "one.csv"
    write_csv(csv_path, sweep_rows(xs=(1.0,)))
    written = render_comparison(FigureSpec(csv_path=csv_path, out_dir=tmp_path / "out"))
    svg = [p for p in written if p.suffix == ".svg"]
    assert len(svg) == 1
    structure = inspect_svg(svg[0])
    assert structure.panels == 1
    assert structure.series_per_panel == (3,)


def test_sigma_zero_predict_coincides_with_opt(tmp_path):
    csv_path = tmp_path / "tie.csv"
    write_csv(csv_path, sweep_rows())
    panels = collect_panels(read_rows(csv_path))["brownian"]
    series = panels[0].series
    assert series["predict"][0] == series["opt"][0]  # the sigma=0 point


def test_two_datasets_two_panels_each(tmp_path):
    rows = (
        sweep_rows("brownian", 0, "D", (2.0, 5.0))
        + sweep_rows("brownian", 1, "sigma", (0.0, 1.0))
        + sweep_rows("line", 0, "D", (2.0, 5.0))
        + sweep_rows("line", 1, "sigma", (0.0, 1.0))
    )
    csv_path = tmp_path / "multi.csv"
    write_csv(csv_path, rows)
    written = render_comparison(FigureSpec(csv_path=csv_path, out_dir=tmp_path / "out"))
    assert {p.name for p in written} == {
        "comparison_brownian.png", "comparison_brownian.svg",
        "comparison_line.png", "comparison_line.svg",
    }
    for svg in (p for p in written if p.suffix == ".svg"):
        structure = inspect_svg(svg)
        assert structure.panels == 2
        assert all(c == 3 for c in structure.series_per_panel)
        assert structure.labels_everywhere({"Predict", "Opt", "Online"})


def test_rendering_is_deterministic(tmp_path):
    csv_path = tmp_path / "det.csv"
    write_csv(csv_path, sweep_rows())
    a = render_comparison(FigureSpec(csv_path=csv_path, out_dir=tmp_path / "a"))
    b = render_comparison(FigureSpec(csv_path=csv_path, out_dir=tmp_path / "b"))
    svg_a = next(p for p in a if p.suffix == ".svg")
    svg_b = next(p for p in b if p.suffix == ".svg")
    assert svg_a.read_bytes() == svg_b.read_bytes()


def write_sequence_file(path, points, header=True):
    lines = []
    if header:
        lines.append(json.dumps({"start": [0.0, 0.0], "metric": {"kind": "euclidean2d"}, "n": len(points)}))
    for t, p in enumerate(points, 1):
        lines.append(json.dumps({"t": t, "point": list(p)}))
    path.write_text("\n".join(lines) + "\n")


def test_trajectory_overlay(tmp_path):
    pred = tmp_path / "pred.jsonl"
    act = tmp_path / "act.jsonl"
    write_sequence_file(pred, [(float(t), 0.0) for t in range(1, 20)])
    write_sequence_file(act, [(float(t), 0.3) for t in range(1, 20)], header=False)
    written = render_trajectory(pred, act, tmp_path / "traj")
    svg = next(p for p in written if p.suffix == ".svg")
    structure = inspect_svg(svg)
    assert structure.panels == 1
    assert structure.series_per_panel == (2,)
    assert structure.labels_everywhere({"predicted", "actual"})


def test_trajectory_identical_files(tmp_path):
    pred = tmp_path / "p.jsonl"
    write_sequence_file(pred, [(0.0, 0.0), (1.0, 1.0)])
    written = render_trajectory(pred, pred, tmp_path / "same")
    assert inspect_svg(next(p for p in written if p.suffix == ".svg")).series_per_panel == (2,)


def test_trajectory_empty_sequences(tmp_path):
    pred = tmp_path / "empty.jsonl"
    write_sequence_file(pred, [])
    written = render_trajectory(pred, pred, tmp_path / "empty_fig")
    assert all(p.exists() for p in written)


def test_trajectory_rejects_labels(tmp_path):
    bad = tmp_path / "labels.jsonl"
    bad.write_text('{"t": 1, "point": 3}\n')
    with pytest.raises(ValueError, match="planar"):
        render_trajectory(bad, bad, tmp_path / "x")
