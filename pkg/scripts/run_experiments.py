#!/usr/bin/env python3
"""Run the default comparison sweep and print a ratio summary.

Equivalent to `pagemig compare --config configs/default.json --out results`
plus a console digest. Expect a few minutes single-worker at n=1000; pass
--workers to parallelize over sweep points.
"""

import argparse
import sys
from pathlib import Path

from pagemig import harness

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=ROOT / "configs" / "default.json")
    ap.add_argument("--out", default=ROOT / "results")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    cfg = harness.load_config(args.config)
    rows = harness.compare(cfg, workers=args.workers)
    flags = harness.ratio_report(rows, cfg.ratio_bounds)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    harness.write_results_csv(rows, out / "results.csv")
    harness.write_report_json(out / "report.json", cfg, rows, flags)

    print(f"wrote {len(rows)} rows to {out / 'results.csv'}")
    for row in rows:
        if row["strategy"] == "opt":
            continue
        print(
            f"{row['dataset']:<9} panel {row['panel']} {row['vary']}={row['x']:<5} "
            f"{row['strategy']:<10} cost {row['mean_total']:>12.1f} "
            f"ratio {row['ratio_to_opt']:.4f}"
        )
    bad = [f for f in flags if not f["ok"]]
    if bad:
        print(f"{len(bad)} ratio bound violations")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
