"""Command-line harness.

Subcommands: generate, simulate, compare, check, replay, lowerbound-eval,
robust-eval. Exit codes: 0 = all configured bound checks passed, 1 = a
bound was violated, 2 = usage error (argparse's convention).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness, seqio
from .generators import gaussian_perturb, brownian_process, line_process, lower_bound_instance
from .metric import EuclideanPlane, UniformMetric
from .offline import optimal_schedule
from .sequences import AssumptionParams, PredictionPair, RequestSequence
from .simulation import run
from .strategies import make_strategy


def _cmd_generate(args) -> int:
    if args.kind in ("line", "brownian"):
        if args.n is None:
            raise SystemExit("--n is required for line/brownian")
        predicted = (
            line_process(args.n)
            if args.kind == "line"
            else brownian_process(args.n, args.seed)
        )
        actual = gaussian_perturb(predicted, args.sigma, None if args.seed is None else args.seed + 1)
        pair = PredictionPair(actual=actual, predicted=predicted)
        seqio.write_pair(args.out, pair, EuclideanPlane())
        print(f"wrote pair {args.out}.{{header.json,predicted.jsonl,actual.jsonl}} (n={args.n})")
    elif args.kind == "lowerbound":
        branches = [args.branch] if args.branch else ["A", "B"]
        for b in branches:
            pair = lower_bound_instance(args.D, args.q, b)
            prefix = f"{args.out}_{b}"
            seqio.write_pair(prefix, pair, UniformMetric())
            print(f"wrote branch {b} pair {prefix}.* (n={len(pair)})")
    elif args.kind == "suffix":
        if args.n is None:
            raise SystemExit("--n is required for suffix")
        pair = harness.far_point_suffix(args.n, args.q, args.D, args.far_scale)
        seqio.write_pair(args.out, pair, EuclideanPlane())
        print(f"wrote suffix-adversary pair {args.out}.* (n={args.n})")
    else:
        raise SystemExit(f"unknown kind {args.kind}")
    return 0


def _parse_kv(pairs):
    out = {}
    for item in pairs or []:
        key, _, value = item.partition("=")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def _cmd_simulate(args) -> int:
    pair, metric = seqio.read_pair(args.pair)
    options = _parse_kv(args.param)
    if args.strategy == "opt":
        res = optimal_schedule(pair.actual, metric, args.D)
        print(json.dumps({"strategy": "opt", "cost": res.total_cost,
                          "move_cost": res.move_cost, "serve_cost": res.serve_cost}))
        return 0
    strategy = make_strategy(
        args.strategy, predicted=pair.predicted, metric=metric, D=args.D,
        seed=args.seed, **options,
    )
    report = run(strategy, pair.actual, metric, args.D)
    print(report.to_json())
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n")
    return 0


def _cmd_compare(args) -> int:
    cfg = harness.load_config(args.config)
    rows = harness.compare(cfg, workers=args.workers)
    flags = harness.ratio_report(rows, cfg.ratio_bounds)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    harness.write_results_csv(rows, out_dir / "results.csv")
    harness.write_report_json(out_dir / "report.json", cfg, rows, flags)
    bad = [f for f in flags if not f["ok"]]
    print(f"{len(rows)} rows -> {out_dir / 'results.csv'}")
    if bad:
        for f in bad:
            print(
                f"bound violated: {f['dataset']} panel {f['panel']} x={f['x']} "
                f"{f['strategy']} ratio {f['ratio']:.4f} > {f['bound']:.4f}"
            )
        return 1
    return 0


def _cmd_check(args) -> int:
    pair, _ = seqio.read_pair(args.pair)
    params = AssumptionParams(D=args.D, q=args.q, epsilon=args.epsilon)
    result = harness.check_pair(pair, params)
    if result["holds"]:
        print(f"holds (window={result['window']}, threshold={result['threshold']})")
    else:
        print(
            f"violated(at={result['violated_at']}) "
            f"(window={result['window']}, threshold={result['threshold']})"
        )
    for entry in result["density_ladder"]:
        print(f"  length {entry['length']:>7}: max density {entry['max_density']:.6f}")
    return 0 if result["holds"] else 1


def _cmd_replay(args) -> int:
    cfg = harness.load_config(args.config)
    rows = harness.read_results_csv(args.csv)
    if not 0 <= args.row < len(rows):
        raise SystemExit(f"--row must be in 0..{len(rows) - 1}")
    stored = rows[args.row]
    fresh = harness.replay_row(cfg, stored)
    match = repr(fresh["mean_total"]) == stored["mean_total"]
    print(
        f"row {args.row}: stored mean_total={stored['mean_total']} "
        f"recomputed={fresh['mean_total']!r} -> {'match' if match else 'MISMATCH'}"
    )
    return 0 if match else 1


def _cmd_lowerbound(args) -> int:
    rows = harness.lowerbound_eval(args.D, args.q)
    ok = True
    for r in rows:
        ok &= r["ok"]
        print(
            f"q={r['q']:<5} {r['strategy']:<16} ratio_A={r['ratio_A']:.4f} "
            f"ratio_B={r['ratio_B']:.4f} avg={r['avg_ratio']:.4f} "
            f"floor={r['floor']:.4f} {'ok' if r['ok'] else 'FAIL'}"
        )
    return 0 if ok else 1


def _cmd_robust(args) -> int:
    rows = harness.robust_eval(
        n=args.n, q_values=args.q, D=args.D, epsilon=args.epsilon,
        master_seed=args.seed, bound_constant=args.bound_constant,
    )
    ok = True
    for r in rows:
        ok &= r["ok"]
        print(
            f"q={r['q']:<5} switch_time={r['switch_time']} "
            f"robust={r['robust_cost']:.1f} opt={r['opt_cost']:.1f} "
            f"ratio={r['ratio']:.3f} bound={r['bound']:.1f} {'ok' if r['ok'] else 'FAIL'}"
        )
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pagemig", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write synthetic and adversarial instances")
    g.add_argument("--kind", required=True, choices=["line", "brownian", "lowerbound", "suffix"])
    g.add_argument("--n", type=int)
    g.add_argument("--sigma", type=float, default=0.0)
    g.add_argument("--q", type=float, default=0.1)
    g.add_argument("--D", type=float, default=2.0)
    g.add_argument("--seed", type=int)
    g.add_argument("--branch", choices=["A", "B"])
    g.add_argument("--far-scale", type=float, default=6.0)
    g.add_argument("--out", required=True, help="output file prefix")
    g.set_defaults(func=_cmd_generate)

    s = sub.add_parser("simulate", help="run one strategy over a stored pair")
    s.add_argument("--pair", required=True, help="pair file prefix")
    s.add_argument("--strategy", required=True)
    s.add_argument("--D", type=float, required=True)
    s.add_argument("--seed", type=int)
    s.add_argument("--param", action="append", metavar="KEY=VALUE")
    s.add_argument("--json", help="also write the run report here")
    s.set_defaults(func=_cmd_simulate)

    c = sub.add_parser("compare", help="run a sweep config; emit results.csv + report.json")
    c.add_argument("--config", required=True)
    c.add_argument("--out", default="results")
    c.add_argument("--workers", type=int, default=1)
    c.set_defaults(func=_cmd_compare)

    k = sub.add_parser("check", help="assumption verdict + density profile for a pair")
    k.add_argument("--pair", required=True)
    k.add_argument("--D", type=float, required=True)
    k.add_argument("--q", type=float, required=True)
    k.add_argument("--epsilon", type=float, default=1.0)
    k.set_defaults(func=_cmd_check)

    r = sub.add_parser("replay", help="recompute one results.csv row standalone")
    r.add_argument("--config", required=True)
    r.add_argument("--csv", required=True)
    r.add_argument("--row", type=int, required=True)
    r.set_defaults(func=_cmd_replay)

    lb = sub.add_parser("lowerbound-eval", help="exact two-branch lower-bound ratios")
    lb.add_argument("--D", type=float, default=100.0)
    lb.add_argument("--q", type=float, nargs="+", default=[0.05, 0.1, 0.2])
    lb.set_defaults(func=_cmd_lowerbound)

    rb = sub.add_parser("robust-eval", help="robust-vs-opt ratios on suffix adversaries")
    rb.add_argument("--n", type=int, default=2000)
    rb.add_argument("--D", type=float, default=50.0)
    rb.add_argument("--q", type=float, nargs="+", default=[0.05, 0.1])
    rb.add_argument("--epsilon", type=float, default=0.4)
    rb.add_argument("--seed", type=int, default=0)
    rb.add_argument("--bound-constant", type=float, default=30.0)
    rb.set_defaults(func=_cmd_robust)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        parser.exit(2, f"error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
