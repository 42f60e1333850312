"""Experiment orchestration: sweeps, seed fan-out, result tables.

compare() reproduces the synthetic-experiment layout: for every sweep
point it generates a predicted/actual pair, runs the configured strategies
(the offline optimum is the pseudo-strategy "opt"), averages randomized
strategies over `runs` seeded replicas, and emits one CSV row per
(sweep point, strategy).

Seeds fan out from the master seed through a counter-style hash split
keyed by (purpose, dataset, point, strategy, replica), so adding a
strategy or panel never perturbs the random streams of the others, and
identical config + master seed reproduces the CSV byte for byte.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .generators import (
    bounded_flip,
    brownian_process,
    gaussian_perturb,
    line_process,
    lower_bound_instance,
    suffix_adversary,
)
from .metric import EuclideanPlane, UniformMetric
from .offline import optimal_schedule
from .rounding import delay_steps, window_size
from .sequences import (
    AssumptionParams,
    PredictionPair,
    RequestSequence,
    check_assumption,
    max_window_density,
)
from .simulation import run
from .strategies import coinflip_expected_cost, make_strategy

CSV_COLUMNS = [
    "dataset",
    "panel",
    "vary",
    "x",
    "D",
    "sigma",
    "q",
    "n",
    "strategy",
    "runs",
    "replicates",
    "seed",
    "mean_total",
    "std_total",
    "mean_move",
    "mean_serve",
    "ratio_to_opt",
    "bound",
    "bound_ok",
]

DETERMINISTIC = {"opt", "predict", "lazy_predict", "delayed_predict"}


def derive_seed(master_seed: int, *parts) -> int:
    """Stable 63-bit seed from the master seed and a label tuple."""
    text = repr((int(master_seed),) + tuple(parts))
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass(frozen=True)
class DatasetSpec:
    name: str  # line | brownian | uniform_random
    n: int
    k: int = 6  # label count for uniform_random

    def validate(self):
        if self.name not in ("line", "brownian", "uniform_random"):
            raise ValueError(f"datasets[].name: unknown dataset {self.name!r}")
        if self.n < 0:
            raise ValueError("datasets[].n: must be >= 0")
        if self.name == "uniform_random" and self.k < 2:
            raise ValueError("datasets[].k: need at least 2 labels")


@dataclass(frozen=True)
class PanelSpec:
    vary: str  # D | sigma | q
    values: tuple
    fixed: dict

    def validate(self):
        if self.vary not in ("D", "sigma", "q"):
            raise ValueError(f"panels[].vary: must be D, sigma or q, got {self.vary!r}")
        if not self.values:
            raise ValueError("panels[].values: sweep must be nonempty")
        if self.vary != "D" and "D" not in self.fixed:
            raise ValueError("panels[].fixed: D must be fixed when not varied")


@dataclass(frozen=True)
class StrategySpec:
    name: str
    options: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return self.options.get("label", self.name)


@dataclass(frozen=True)
class ExperimentConfig:
    datasets: tuple
    panels: tuple
    strategies: tuple
    runs: int = 100
    instance_replicates: int = 1
    master_seed: int = 0
    ratio_bounds: dict = field(default_factory=dict)

    def validate(self):
        if not self.datasets:
            raise ValueError("datasets: at least one dataset required")
        if not self.panels:
            raise ValueError("panels: at least one sweep panel required")
        if not self.strategies:
            raise ValueError("strategies: at least one strategy required")
        if self.runs < 1:
            raise ValueError("runs: must be >= 1")
        if self.instance_replicates < 1:
            raise ValueError("instance_replicates: must be >= 1")
        for ds in self.datasets:
            ds.validate()
        for p in self.panels:
            p.validate()


def config_from_dict(d: dict) -> ExperimentConfig:
    try:
        datasets = tuple(
            DatasetSpec(name=ds["name"], n=int(ds["n"]), k=int(ds.get("k", 6)))
            for ds in d["datasets"]
        )
        panels = tuple(
            PanelSpec(
                vary=p["vary"],
                values=tuple(p["values"]),
                fixed=dict(p.get("fixed", {})),
            )
            for p in d["panels"]
        )
        strategies = []
        for s in d["strategies"]:
            if isinstance(s, str):
                strategies.append(StrategySpec(s))
            else:
                opts = {k: v for k, v in s.items() if k != "name"}
                strategies.append(StrategySpec(s["name"], opts))
        cfg = ExperimentConfig(
            datasets=datasets,
            panels=panels,
            strategies=tuple(strategies),
            runs=int(d.get("runs", 100)),
            instance_replicates=int(d.get("instance_replicates", 1)),
            master_seed=int(d.get("master_seed", 0)),
            ratio_bounds=dict(d.get("ratio_bounds", {})),
        )
    except KeyError as exc:
        raise ValueError(f"config missing required field {exc.args[0]!r}") from exc
    cfg.validate()
    return cfg


def load_config(path) -> ExperimentConfig:
    """Read an experiment config from a JSON or TOML file."""
    text = Path(path).read_text()
    if str(path).endswith(".toml"):
        try:
            import tomllib
        except ModuleNotFoundError:
            try:
                import tomli as tomllib
            except ModuleNotFoundError as exc:
                raise ValueError("TOML configs need Python >= 3.11 or tomli; use JSON") from exc
        return config_from_dict(tomllib.loads(text))
    return config_from_dict(json.loads(text))


def _axes(panel: PanelSpec, x):
    values = dict(panel.fixed)
    values[panel.vary] = x
    D = float(values.get("D", 2.0))
    sigma = float(values.get("sigma", 0.0))
    q = float(values.get("q", 0.0))
    return D, sigma, q


def _build_instance(cfg, ds: DatasetSpec, D, sigma, q, rep):
    base_seed = derive_seed(cfg.master_seed, "instance", ds.name, ds.n, D, sigma, q, rep)
    noise_seed = derive_seed(cfg.master_seed, "noise", ds.name, ds.n, D, sigma, q, rep)
    if ds.name == "line":
        predicted = line_process(ds.n)
        actual = gaussian_perturb(predicted, sigma, noise_seed)
        metric = EuclideanPlane()
    elif ds.name == "brownian":
        predicted = brownian_process(ds.n, base_seed)
        actual = gaussian_perturb(predicted, sigma, noise_seed)
        metric = EuclideanPlane()
    else:  # uniform_random: bounded_flip at construction rate q/2 => checker holds at q
        rng = np.random.default_rng(base_seed)
        labels = tuple(int(v) for v in rng.integers(0, ds.k, size=ds.n))
        predicted = RequestSequence(0, labels)
        if q > 0:
            actual = bounded_flip(predicted, q / 2.0, 1.0, D, noise_seed)
        else:
            actual = RequestSequence(predicted.start, predicted.items)
        metric = UniformMetric()
    return PredictionPair(actual=actual, predicted=predicted), metric


def _strategy_kwargs(strat: StrategySpec, q: float) -> dict:
    kw = dict(strat.options)
    kw.pop("label", None)
    if strat.name in ("robust", "delayed_predict") and "q" not in kw and "delay" not in kw:
        if q <= 0:
            raise ValueError(
                f"strategy {strat.name!r} needs a q (strategy option or q axis)"
            )
        kw["q"] = q
    if strat.name == "lazy_predict" and "epsilon" not in kw and "period" not in kw:
        kw["epsilon"] = 0.2
    return kw


def _point_rows(cfg: ExperimentConfig, ds: DatasetSpec, panel_idx: int, x) -> list[dict]:
    panel = cfg.panels[panel_idx]
    D, sigma, q = _axes(panel, x)
    instances = [
        _build_instance(cfg, ds, D, sigma, q, rep)
        for rep in range(cfg.instance_replicates)
    ]
    point_seed = derive_seed(cfg.master_seed, "instance", ds.name, ds.n, D, sigma, q, 0)
    rows = []
    for strat in cfg.strategies:
        totals, movec, servec = [], [], []
        for rep, (pair, metric) in enumerate(instances):
            if strat.name == "opt":
                res = optimal_schedule(pair.actual, metric, D)
                totals.append(res.total_cost)
                movec.append(res.move_cost)
                servec.append(res.serve_cost)
                continue
            kw = _strategy_kwargs(strat, q)
            n_runs = 1 if strat.name in DETERMINISTIC else cfg.runs
            for r in range(n_runs):
                seed = derive_seed(
                    cfg.master_seed, "run", ds.name, ds.n, D, sigma, q, rep, strat.label, r
                )
                strategy = make_strategy(
                    strat.name, predicted=pair.predicted, metric=metric, D=D, seed=seed, **kw
                )
                report = run(strategy, pair.actual, metric, D)
                totals.append(report.total_cost)
                movec.append(report.ledger.move_cost)
                servec.append(report.ledger.serve_cost)
        mean = float(np.mean(totals))
        std = float(np.std(totals, ddof=1)) if len(totals) > 1 else 0.0
        rows.append(
            {
                "dataset": ds.name,
                "panel": panel_idx,
                "vary": panel.vary,
                "x": x,
                "D": D,
                "sigma": sigma,
                "q": q,
                "n": ds.n,
                "strategy": strat.label,
                "runs": len(totals),
                "replicates": cfg.instance_replicates,
                "seed": point_seed,
                "mean_total": mean,
                "std_total": std,
                "mean_move": float(np.mean(movec)),
                "mean_serve": float(np.mean(servec)),
                "ratio_to_opt": "",
                "bound": "",
                "bound_ok": "",
            }
        )
    return rows


def _point_rows_task(args):
    return _point_rows(*args)


def compare(cfg: ExperimentConfig, workers: int = 1) -> list[dict]:
    """Run the full sweep; rows come back in deterministic config order."""
    cfg.validate()
    tasks = [
        (cfg, ds, panel_idx, x)
        for ds in cfg.datasets
        for panel_idx in range(len(cfg.panels))
        for x in cfg.panels[panel_idx].values
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_point_rows_task, tasks))
    else:
        results = [_point_rows_task(t) for t in tasks]
    return [row for point in results for row in point]


def ratio_report(rows: list[dict], bounds: dict | None = None) -> list[dict]:
    """Append cost(strategy)/cost(opt) per sweep point; flag bound breaches.

    Returns the list of flag records; rows are annotated in place.
    """
    bounds = bounds or {}
    opt_by_point = {}
    for row in rows:
        if row["strategy"] == "opt":
            opt_by_point[(row["dataset"], row["panel"], row["x"])] = row["mean_total"]
    flags = []
    for row in rows:
        key = (row["dataset"], row["panel"], row["x"])
        if key not in opt_by_point:
            raise ValueError(f"no opt baseline for sweep point {key}")
        ratio = row["mean_total"] / opt_by_point[key]
        row["ratio_to_opt"] = ratio
        bound = bounds.get(row["strategy"])
        if bound is not None:
            ok = ratio <= float(bound)
            row["bound"] = float(bound)
            row["bound_ok"] = ok
            flags.append(
                {
                    "dataset": row["dataset"],
                    "panel": row["panel"],
                    "x": row["x"],
                    "strategy": row["strategy"],
                    "ratio": ratio,
                    "bound": float(bound),
                    "ok": ok,
                }
            )
    return flags


def write_results_csv(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in CSV_COLUMNS})


def read_results_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_report_json(path, cfg: ExperimentConfig, rows, flags) -> None:
    report = {
        "rows": len(rows),
        "all_ok": all(f["ok"] for f in flags),
        "violations": [f for f in flags if not f["ok"]],
        "bounds_checked": len(flags),
        "master_seed": cfg.master_seed,
    }
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def replay_row(cfg: ExperimentConfig, row: dict) -> dict:
    """Recompute one CSV row standalone from the config and row coordinates."""
    ds = next((d for d in cfg.datasets if d.name == row["dataset"]), None)
    if ds is None:
        raise ValueError(f"dataset {row['dataset']!r} not in config")
    panel_idx = int(row["panel"])
    x_raw = row["x"]
    panel = cfg.panels[panel_idx]
    x = None
    for v in panel.values:
        if repr(v) == x_raw or str(v) == str(x_raw) or (
            isinstance(v, (int, float)) and float(v) == float(x_raw)
        ):
            x = v
            break
    if x is None:
        raise ValueError(f"x={x_raw!r} not among panel {panel_idx} values")
    fresh = _point_rows(cfg, ds, panel_idx, x)
    for cand in fresh:
        if cand["strategy"] == row["strategy"]:
            return cand
    raise ValueError(f"strategy {row['strategy']!r} not in config")


# ---------------------------------------------------------------------------
# assumption checking and the two dedicated evaluations


def check_pair(pair: PredictionPair, params: AssumptionParams) -> dict:
    """Assumption verdict plus a max-density ladder over window lengths."""
    verdict = check_assumption(pair, params)
    ladder = []
    length = params.window
    n = len(pair)
    while length <= n:
        ladder.append({"length": length, "max_density": max_window_density(pair, length)})
        if length == n:
            break
        length = min(2 * length, n)
    return {
        "holds": verdict.holds,
        "violated_at": verdict.violated_at,
        "window": params.window,
        "threshold": params.threshold,
        "density_ladder": ladder,
    }


LOWER_BOUND_STRATEGIES = ("predict", "lazy_predict", "delayed_predict", "coinflip")


def lowerbound_eval(D: float, q_values, floor_fraction: float = 1.0 / 8.0) -> list[dict]:
    """Exact two-branch evaluation of the 1 + Omega(q) lower bound.

    Deterministic strategies are simulated; the coin-flip baseline is
    evaluated by its exact expected cost. The branch-averaged ratio of each
    strategy must be at least 1 + q * floor_fraction.
    """
    metric = UniformMetric()
    out = []
    for q in q_values:
        branches = {b: lower_bound_instance(D, q, b) for b in ("A", "B")}
        opt = {
            b: optimal_schedule(pair.actual, metric, D).total_cost
            for b, pair in branches.items()
        }
        for name in LOWER_BOUND_STRATEGIES:
            ratios = {}
            for b, pair in branches.items():
                if name == "coinflip":
                    cost = coinflip_expected_cost(pair.actual, metric, D)
                else:
                    kw = {"epsilon": 1.0} if name == "lazy_predict" else {}
                    if name == "delayed_predict":
                        kw["q"] = q
                    strategy = make_strategy(
                        name, predicted=pair.predicted, metric=metric, D=D, **kw
                    )
                    cost = run(strategy, pair.actual, metric, D).total_cost
                ratios[b] = cost / opt[b]
            avg = 0.5 * (ratios["A"] + ratios["B"])
            floor = 1.0 + q * floor_fraction
            out.append(
                {
                    "q": q,
                    "strategy": name,
                    "ratio_A": ratios["A"],
                    "ratio_B": ratios["B"],
                    "avg_ratio": avg,
                    "floor": floor,
                    "ok": avg >= floor,
                    "opt_A": opt["A"],
                    "opt_B": opt["B"],
                }
            )
    return out


def far_point_suffix(n: int, q: float, D: float, far_scale: float = 6.0) -> PredictionPair:
    """Suffix-adversary pair whose suffix alternates between two far points."""
    suffix_len = int(math.floor(q * n))
    a = (far_scale * D, 0.0)
    b = (far_scale * D, float(D))
    adversarial = RequestSequence(
        (0.0, 0.0), tuple(a if i % 2 == 0 else b for i in range(suffix_len))
    )
    return suffix_adversary(n, q, adversarial)


def robust_eval(
    n: int,
    q_values,
    D: float,
    epsilon: float = 0.4,
    master_seed: int = 0,
    bound_constant: float = 30.0,
    far_scale: float = 6.0,
) -> list[dict]:
    """Robust-vs-opt ratios on far-point suffix adversaries.

    The pass bound cost(robust)/cost(opt) <= bound_constant / q freezes the
    O(1/q) guarantee as a non-regression check.
    """
    metric = EuclideanPlane()
    out = []
    for q in q_values:
        pair = far_point_suffix(n, q, D, far_scale)
        params = AssumptionParams(D=D, q=q, epsilon=epsilon)
        seed = derive_seed(master_seed, "robust-eval", n, D, q)
        strategy = make_strategy(
            "robust", predicted=pair.predicted, metric=metric, D=D, seed=seed,
            q=q, epsilon=epsilon,
        )
        report = run(strategy, pair.actual, metric, D)
        opt_cost = optimal_schedule(pair.actual, metric, D).total_cost
        ratio = report.total_cost / opt_cost
        bound = bound_constant / q
        out.append(
            {
                "q": q,
                "n": n,
                "D": D,
                "window": params.window,
                "threshold": params.threshold,
                "switch_time": report.switch_time,
                "robust_cost": report.total_cost,
                "opt_cost": opt_cost,
                "ratio": ratio,
                "bound": bound,
                "ok": ratio <= bound,
            }
        )
    return out
