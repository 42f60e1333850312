"""Figure rendering CLI.

    figures render --csv results.csv --out dir/
    figures trajectory --predicted pred.jsonl --actual act.jsonl --out path

`render` emits comparison_<dataset>.png and .svg per dataset found in the
CSV; `trajectory` overlays two planar sequence files.
"""

from __future__ import annotations

import argparse
import sys

from .render import FigureSpec, render_comparison, render_trajectory


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="figures", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    r = sub.add_parser("render", help="multi-panel comparison figures from results.csv")
    r.add_argument("--csv", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--columns", type=int, default=2)

    t = sub.add_parser("trajectory", help="overlay predicted and actual planar paths")
    t.add_argument("--predicted", required=True)
    t.add_argument("--actual", required=True)
    t.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "render":
            written = render_comparison(
                FigureSpec(csv_path=args.csv, out_dir=args.out, columns=args.columns)
            )
        else:
            written = render_trajectory(args.predicted, args.actual, args.out)
    except (ValueError, FileNotFoundError) as exc:
        parser.exit(2, f"error: {exc}\n")
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
